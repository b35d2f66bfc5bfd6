"""Annular morphism engine: algebra laws, idempotents, loops, and wraps."""

import numpy as np
import pytest

from conftest import ALL_CATEGORIES, random_endomorphism
from tubecat.trees import EngineError
from tubecat.tube import (
    verify_handle_slides,
    verify_idempotents,
    verify_isotypic_partition,
    verify_twist_invertibility,
)

HS_EXACT = [n for n in ALL_CATEGORIES if n != "z3"]


def all_words(n: int):
    return [(a,) for a in range(n)] + [(a, b) for a in range(n) for b in range(n)]


def random_morphism(eng, X, Y, rng):
    hb = eng.hom_basis(X, Y)
    mor = eng.zero_morphism(X, Y)
    for elem in hb.all_elements():
        c = complex(rng.standard_normal(), rng.standard_normal())
        mor = mor + c * eng.basis_morphism(elem, X, Y)
    return mor


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_identity_and_associativity(name, engine_for):
    eng = engine_for(name)
    rng = np.random.default_rng(23)
    words = all_words(eng.nlab)
    for _ in range(10):
        X = words[rng.integers(len(words))]
        Y = words[rng.integers(len(words))]
        f = random_morphism(eng, X, Y, rng)
        if f.norm() == 0:
            continue
        idX = eng.identity_morphism(X)
        idY = eng.identity_morphism(Y)
        assert eng.compose(f, idX).distance(f) < 1e-10 * max(1, f.norm())
        assert eng.compose(idY, f).distance(f) < 1e-10 * max(1, f.norm())
        g = random_morphism(eng, Y, X, rng)
        h = random_morphism(eng, X, Y, rng)
        lhs = eng.compose(h, eng.compose(g, f))
        rhs = eng.compose(eng.compose(h, g), f)
        assert lhs.distance(rhs) < 1e-9 * max(1.0, lhs.norm())


def test_composition_rejects_mismatched_objects(engine_for):
    eng = engine_for("semion")
    with pytest.raises(EngineError):
        eng.compose(eng.identity_morphism((0,)), eng.identity_morphism((1,)))


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_component_roundtrip(name, engine_for):
    eng = engine_for(name)
    rng = np.random.default_rng(31)
    words = all_words(eng.nlab)
    X = words[rng.integers(len(words))]
    f = random_morphism(eng, X, X, rng)
    comps = {s: eng.component(f, s) for s in range(eng.nlab)}
    g = eng.from_components(X, X, comps)
    assert f.distance(g) < 1e-12 * max(1.0, f.norm())


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_seam_average_idempotents(name, engine_for):
    rep = verify_idempotents(engine_for(name))
    assert rep.passed, rep.failures[:4]
    assert rep.max_residual <= 1e-8


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_isotypic_partition_of_unity(name, engine_for):
    rep = verify_isotypic_partition(engine_for(name))
    assert rep.passed, rep.failures[:4]
    assert rep.max_residual <= 1e-8


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_isotypic_projections_are_orthogonal_idempotents(name, engine_for):
    eng = engine_for(name)
    n = eng.nlab
    for s in range(n):
        projs = {}
        for a in range(n):
            for b in range(n):
                e = eng.isotypic_idempotent(s, a, b)
                if e.norm() > 1e-12:
                    projs[(a, b)] = e
        for (a, b), e in projs.items():
            assert eng.compose(e, e).distance(e) < 1e-8 * max(1.0, e.norm())
            for (c, d), f in projs.items():
                if (c, d) == (a, b):
                    continue
                assert eng.compose(e, f).norm() < 1e-8


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_wrap_is_invertible(name, engine_for):
    rep = verify_twist_invertibility(engine_for(name))
    assert rep.passed, rep.failures


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_wrap_is_natural(name, engine_for):
    """The once-around wrap commutes with every annular morphism."""
    eng = engine_for(name)
    rng = np.random.default_rng(3)
    words = all_words(eng.nlab)
    for _ in range(8):
        X = words[rng.integers(len(words))]
        Y = words[rng.integers(len(words))]
        if eng.hom_basis(X, Y).total_dim == 0:
            continue
        f = random_morphism(eng, X, Y, rng)
        lhs = eng.compose(eng.twist_automorphism(Y), f)
        rhs = eng.compose(f, eng.twist_automorphism(X))
        assert lhs.distance(rhs) < 1e-9 * max(1.0, f.norm())


@pytest.mark.parametrize("name", HS_EXACT)
def test_seam_loop_expansion(name, engine_for):
    eng = engine_for(name)
    n = eng.nlab
    for i in range(n):
        for j in range(n):
            for s in range(n):
                rep = eng.verify_handle_slide(i, j, s)
                assert rep.passed, rep.failures


def test_seam_loop_expansion_needs_conjugate_weights_on_z3(engine_for):
    """With nontrivial charge conjugation the seam loop expands over the
    projections with one conjugated S-weight; the unconjugated expansion
    misses by an order-one amount.  This pins the nature of the z3
    discrepancy surfaced by verify_handle_slides."""
    eng = engine_for("z3")
    smat = eng.modular.s_matrix
    n = eng.nlab
    worst_conj = 0.0
    worst_plain = 0.0
    for i in range(n):
        for j in range(n):
            for s in range(n):
                lhs = eng.gamma(i, j, s)
                rhs_conj = eng.zero_morphism((s,), (s,))
                for a in range(n):
                    for b in range(n):
                        coeff = smat[i, a] * np.conj(smat[b, j]) / (eng.d[a] * eng.d[b])
                        rhs_conj = rhs_conj + coeff * eng.isotypic_idempotent(s, a, b)
                worst_conj = max(
                    worst_conj, lhs.distance(rhs_conj) / max(1.0, lhs.norm())
                )
                worst_plain = max(
                    worst_plain, eng.verify_handle_slide(i, j, s).max_residual
                )
    assert worst_conj < 1e-8
    assert worst_plain > 0.5


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_seam_loop_average_is_block_sum_of_loops(name, engine_for):
    """nu assembles the seam loops with weight d(S)/d(C) per block."""
    eng = engine_for(name)
    blocks = eng.nu(0, 0)
    for s, mor in blocks.items():
        direct = (eng.d[s] / eng.total_dim) * eng.gamma(0, 0, s)
        assert mor.distance(direct) < 1e-12


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_trace_pairing_is_nondegenerate(name, engine_for):
    """The bilinear trace pairing on End(X) is invertible: the annular
    endomorphism algebras are semisimple."""
    eng = engine_for(name)
    n = eng.nlab
    rng = np.random.default_rng(17)
    words = all_words(n)
    for _ in range(4):
        X = words[rng.integers(len(words))]
        pm = eng.pairing_matrix(X, X)
        if pm.size == 0:
            continue
        assert pm.shape[0] == pm.shape[1]
        sv = np.linalg.svd(pm, compute_uv=False)
        assert sv[-1] > 1e-8
