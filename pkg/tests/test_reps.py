"""Representations from multiplicity matrices: traces, functoriality,
invariance checks, and the multiplicity round trip."""

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import ALL_CATEGORIES, random_endomorphism
from tubecat.category import CategoryDataError, builtin_category
from tubecat.reps import (
    InvarianceReport,
    build_rep,
    check_modular_invariance,
    check_s_invariance,
    check_t_invariance,
    default_family,
    multiplicity_matrix,
    random_multiplicity,
    trace_s_twisted,
    trace_standard,
    trace_t_twisted,
)


def test_default_family_is_words_up_to_length_two():
    fam = default_family(2)
    assert () in fam
    assert (0,) in fam and (1,) in fam
    assert (0, 1) in fam and (1, 0) in fam
    assert all(len(w) <= 2 for w in fam)
    assert len(fam) == 1 + 2 + 4


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_idempotent_traces_read_off_multiplicities(name, engine_for, core_for):
    eng = engine_for(name)
    core = core_for(name)
    n = eng.nlab
    rng = np.random.default_rng(101)
    Z = random_multiplicity(rng, n)
    F = build_rep(core, Z)
    for I in range(n):
        for J in range(n):
            eps = eng.epsilon_idempotent(I, J)
            assert trace_standard(F, (I, J), eps) == pytest.approx(
                Z[I, J], abs=1e-9
            )


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_wrapped_idempotent_traces_carry_twist_ratio(name, engine_for, core_for):
    eng = engine_for(name)
    core = core_for(name)
    n = eng.nlab
    theta = np.diag(eng.modular.t_matrix)
    rng = np.random.default_rng(103)
    Z = random_multiplicity(rng, n)
    F = build_rep(core, Z)
    for I in range(n):
        for J in range(n):
            eps = eng.epsilon_idempotent(I, J)
            want = (theta[I] / theta[J]) * Z[I, J]
            assert trace_t_twisted(F, (I, J), eps) == pytest.approx(want, abs=1e-9)


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_seam_loop_traces_conjugate_by_s(name, engine_for, core_for):
    """Trace of the seam-loop average equals (S Z S^-1)_IJ entrywise."""
    eng = engine_for(name)
    core = core_for(name)
    n = eng.nlab
    S = eng.modular.s_matrix
    Sinv = np.linalg.inv(S)
    NT = core.nu_table()
    rng = np.random.default_rng(105)
    for _ in range(6):
        Z = random_multiplicity(rng, n)
        lhs = np.einsum("ijab,ab->ij", NT, Z)
        rhs = S @ Z @ Sinv
        assert np.abs(lhs - rhs).max() < 1e-9


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_rotated_trace_of_idempotent_equals_loop_trace(name, engine_for, core_for):
    eng = engine_for(name)
    core = core_for(name)
    n = eng.nlab
    NT = core.nu_table()
    rng = np.random.default_rng(107)
    Z = random_multiplicity(rng, n)
    F = build_rep(core, Z)
    for I in range(n):
        for J in range(n):
            eps = eng.epsilon_idempotent(I, J)
            rotated = trace_s_twisted(F, (I, J), eps)
            loop = complex(np.einsum("ab,ab->", NT[I, J], F.z))
            assert rotated == pytest.approx(loop, abs=1e-9)


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_rotated_trace_table_matches_direct_evaluation(name, engine_for, core_for):
    eng = engine_for(name)
    core = core_for(name)
    rng = np.random.default_rng(109)
    fam = [w for w in core.family if eng.hom_basis(w, w).total_dim > 0]
    Z = random_multiplicity(rng, eng.nlab)
    F = build_rep(core, Z)
    for _ in range(6):
        X = fam[rng.integers(len(fam))]
        mor = random_endomorphism(eng, X, rng)
        a = trace_s_twisted(F, X, mor, method="table")
        b = trace_s_twisted(F, X, mor, method="direct")
        assert a == pytest.approx(b, abs=1e-8)


def test_rotated_trace_rejects_unknown_method(core_for):
    core = core_for("semion")
    F = build_rep(core, np.eye(2, dtype=int))
    with pytest.raises(ValueError, match="method"):
        trace_s_twisted(F, (0,), core.engine.identity_morphism((0,)), method="spin")


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_representation_is_contravariant_functor(name, engine_for, core_for):
    eng = engine_for(name)
    core = core_for(name)
    rng = np.random.default_rng(111)
    fam = [w for w in core.family if eng.hom_basis(w, w).total_dim > 0]
    Z = random_multiplicity(rng, eng.nlab)
    F = build_rep(core, Z)
    for _ in range(8):
        X = fam[rng.integers(len(fam))]
        a = random_endomorphism(eng, X, rng)
        b = random_endomorphism(eng, X, rng)
        Ma, Mb = F.matrix(a), F.matrix(b)
        Mab = F.matrix(eng.compose(a, b))
        if Ma.size == 0:
            continue
        assert np.abs(Mab - Mb @ Ma).max() < 1e-8 * max(1.0, np.abs(Mab).max())
        ident = F.matrix(eng.identity_morphism(X))
        assert np.abs(ident - np.eye(ident.shape[0])).max() < 1e-9


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_multiplicity_roundtrip(name, core_for):
    core = core_for(name)
    n = core.engine.nlab
    rng = np.random.default_rng(113)
    for _ in range(6):
        Z = random_multiplicity(rng, n)
        F = build_rep(core, Z)
        assert np.array_equal(multiplicity_matrix(F), Z)


@settings(max_examples=12, deadline=None, derandomize=True)
@given(data=st.data())
def test_multiplicity_roundtrip_arbitrary_small_matrices(data, core_for):
    name = data.draw(st.sampled_from(["semion", "z3"]))
    core = core_for(name)
    n = core.engine.nlab
    entries = data.draw(
        st.lists(st.integers(0, 3), min_size=n * n, max_size=n * n)
    )
    Z = np.array(entries, dtype=int).reshape(n, n)
    F = build_rep(core, Z)
    assert np.array_equal(multiplicity_matrix(F), Z)


# ------------------------------------------------------------ build_rep input


def test_build_rep_rejects_bad_multiplicities(core_for):
    core = core_for("semion")
    with pytest.raises(CategoryDataError):
        build_rep(core, [[1, 0], [0, -1]])
    with pytest.raises(CategoryDataError):
        build_rep(core, [[1.5, 0], [0, 1]])
    with pytest.raises(CategoryDataError):
        build_rep(core, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_build_rep_accepts_engine_directly(engine_for):
    eng = engine_for("trivial")
    F = build_rep(eng, [[2]])
    assert np.array_equal(multiplicity_matrix(F), [[2]])


# --------------------------------------------------------- invariance checks


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_identity_multiplicity_is_invariant(name, core_for):
    core = core_for(name)
    n = core.engine.nlab
    rep = check_modular_invariance(build_rep(core, np.eye(n, dtype=int)))
    assert rep.passed and rep.consistent


def test_charge_conjugation_multiplicity_is_invariant(core_for):
    core = core_for("z3")
    C = core.engine.modular.charge_conj.astype(int)
    assert not np.array_equal(C, np.eye(3, dtype=int))
    rep = check_modular_invariance(build_rep(core, C))
    assert rep.passed and rep.consistent


@pytest.mark.parametrize("name", ALL_CATEGORIES)
def test_verdicts_agree_with_commutators(name, core_for):
    """The trace-equality verdicts must equal the plain commutator verdicts
    for invariant and non-invariant inputs alike."""
    core = core_for(name)
    n = core.engine.nlab
    md = core.engine.modular
    rng = np.random.default_rng(115)
    candidates = [np.eye(n, dtype=int)] + [random_multiplicity(rng, n) for _ in range(4)]
    for Z in candidates:
        F = build_rep(core, Z)
        rt = check_t_invariance(F)
        rs = check_s_invariance(F)
        rm = check_modular_invariance(F)
        assert rt.consistent, (Z, rt.residuals)
        assert rs.consistent, (Z, rs.residuals)
        assert rm.consistent
        t_comm = np.abs(Z @ md.t_matrix - md.t_matrix @ Z).max() < 1e-9
        s_comm = np.abs(Z @ md.s_matrix - md.s_matrix @ Z).max() < 1e-9
        assert rt.commutator_zero == t_comm
        assert rs.commutator_zero == s_comm
        assert rt.trace_check == t_comm
        assert rs.trace_check == s_comm
        assert rm.passed == (t_comm and s_comm and Z[0, 0] == 1)


def test_upper_triangular_z_fails_t_invariance(core_for):
    core = core_for("semion")
    F = build_rep(core, [[1, 1], [0, 1]])
    rt = check_t_invariance(F)
    assert not rt.passed and rt.consistent
    assert rt.residuals["commutator"] > 0.1


def test_unit_entry_is_required_for_full_invariance(core_for):
    """Twice the identity commutes with both generators, so the combined
    check must fail purely on the unit entry."""
    core = core_for("semion")
    F = build_rep(core, [[2, 0], [0, 2]])
    assert check_t_invariance(F).passed
    assert check_s_invariance(F).passed
    assert not check_modular_invariance(F).passed


def test_invariance_report_round_trips_through_json(core_for):
    core = core_for("semion")
    rep = check_modular_invariance(build_rep(core, np.eye(2, dtype=int)))
    encoded = json.dumps(rep.to_dict(), sort_keys=True)
    assert json.loads(encoded) == json.loads(encoded)
    decoded = json.loads(encoded)
    assert decoded["passed"] is True
    assert decoded["z"] == [[1, 0], [0, 1]]


def test_random_multiplicity_pins_unit_entry():
    rng = np.random.default_rng(5)
    for n in (1, 2, 4):
        for _ in range(5):
            Z = random_multiplicity(rng, n)
            assert Z.shape == (n, n)
            assert Z[0, 0] == 1
            assert (Z >= 0).all()
