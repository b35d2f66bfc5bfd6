"""Fusion-tree linear algebra: dimensions, isometries, braids, and bends."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tubecat.category import builtin_category, bundled_names
from tubecat.trees import Calculus, EngineError

ALL = list(bundled_names())

_calc_cache: dict = {}


def calc_for(name: str) -> Calculus:
    if name not in _calc_cache:
        _calc_cache[name] = Calculus(builtin_category(name))
    return _calc_cache[name]


def dp_hom_dim(cat, c: int, word) -> int:
    """Independent count of splitting trees: fold the fusion matrices."""
    if not word:
        return int(c == 0)
    n = cat.ring.size
    vec = np.zeros(n, dtype=int)
    vec[word[0]] = 1
    for a in word[1:]:
        vec = vec @ cat.ring.fusion[:, a, :]
    return int(vec[c])


@settings(max_examples=60, deadline=None, derandomize=True)
@given(data=st.data())
def test_tree_count_matches_fusion_fold(data):
    name = data.draw(st.sampled_from(ALL))
    cat = builtin_category(name)
    n = cat.ring.size
    word = tuple(
        data.draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=4))
    )
    c = data.draw(st.integers(0, n - 1))
    calc = calc_for(name)
    assert len(calc.trees(c, word)) == dp_hom_dim(cat, c, word)
    assert calc.hom_dim(c, word) == dp_hom_dim(cat, c, word)


@pytest.mark.parametrize("name", ALL)
def test_tree_morphisms_are_isometries(name):
    calc = calc_for(name)
    cat = builtin_category(name)
    n = cat.ring.size
    rng = np.random.default_rng(11)
    words = [tuple(rng.integers(0, n, size=k)) for k in (1, 2, 3) for _ in range(3)]
    for word in words:
        for c in range(n):
            for tree in calc.trees(c, word):
                sigma = calc.tree_mor(c, word, tree)
                prod = sigma.dagger() @ sigma
                assert prod.distance(calc.identity((c,))) < 1e-10


@pytest.mark.parametrize("name", ALL)
def test_braids_are_unitary_and_invertible(name):
    calc = calc_for(name)
    cat = builtin_category(name)
    n = cat.ring.size
    rng = np.random.default_rng(5)
    for _ in range(6):
        word = tuple(rng.integers(0, n, size=3))
        for k in (1, 2):
            b_pos = calc.braid(word, k, 1)
            b_neg_word = list(word)
            b_neg_word[k - 1], b_neg_word[k] = b_neg_word[k], b_neg_word[k - 1]
            b_neg = calc.braid(tuple(b_neg_word), k, -1)
            # inverse braid undoes the crossing
            prod = b_neg @ b_pos
            assert prod.distance(calc.identity(word)) < 1e-10
            # unitarity
            prod2 = b_pos.dagger() @ b_pos
            assert prod2.distance(calc.identity(word)) < 1e-10


@pytest.mark.parametrize("name", ALL)
def test_loops_evaluate_to_quantum_dimension(name):
    calc = calc_for(name)
    cat = builtin_category(name)
    for a in range(cat.ring.size):
        for loop in (
            calc.ev(a, tilde=True) @ calc.coev(a),
            calc.ev(a) @ calc.coev(a, tilde=True),
        ):
            val = complex(loop.block(0)[0, 0]) if loop.block(0).size else 0.0
            assert val == pytest.approx(cat.qdim[a], abs=1e-10)


@pytest.mark.parametrize("name", ALL)
def test_zigzags_are_identities(name):
    calc = calc_for(name)
    cat = builtin_category(name)
    for a in range(cat.ring.size):
        ident = calc.identity((a,))
        zig = (
            calc.tensor_id_right(calc.ev(a, tilde=True), a)
            @ calc.tensor_id_left(a, calc.coev(a, tilde=True))
        )
        assert zig.distance(ident) < 1e-10
        zag = (
            calc.tensor_id_left(a, calc.ev(a))
            @ calc.tensor_id_right(calc.coev(a), a)
        )
        assert zag.distance(ident) < 1e-10


@pytest.mark.parametrize("name", ALL)
def test_f_matrices_are_unitary(name):
    calc = calc_for(name)
    cat = builtin_category(name)
    n = cat.ring.size
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    entry = calc.f_matrix(a, b, c, d)
                    if entry is None:
                        continue
                    erows, fcols, mat = entry
                    assert len(erows) == len(fcols) == mat.shape[0]
                    assert (
                        np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max() < 1e-10
                    )


def test_composition_requires_matching_words():
    calc = calc_for("semion")
    with pytest.raises(EngineError):
        _ = calc.identity((0,)) @ calc.identity((1,))


def test_double_braiding_reads_off_s_matrix():
    """Tracing the double braid of two strands gives the unnormalized
    S-entry: the defining picture of the pairing."""
    from tubecat.category import compute_modular_data

    for name in ALL:
        calc = calc_for(name)
        cat = builtin_category(name)
        md = compute_modular_data(cat)
        n = cat.ring.size
        for a in range(n):
            for b in range(n):
                dbl = calc.braid((b, a), 1, 1) @ calc.braid((a, b), 1, 1)
                assert abs(dbl.qtrace() - md.s_matrix[cat.ring.dual[a], b]) < 1e-9
