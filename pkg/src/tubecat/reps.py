"""Representations of the cylinder category with prescribed multiplicities.

A multiplicity matrix Z of non-negative integers determines a functor
F = (+)_{I,J} Z_IJ-many copies of the irreducible attached to the weighted
seam-average idempotent on (I, J).  Concretely F(X) is realized as the
direct sum over (I, J) of Z_IJ copies of the image of that idempotent
acting on Hom(X, (I,J)) by post-composition, and F(alpha) acts by
pre-composition (so F is contravariant).

Because every trace functional here is linear in the morphism and the
idempotent images do not depend on Z, each object X gets a reusable table
tau[j, I, J] = trace of the j-th hom-basis endomorphism on the (I, J)
block.  Any trace of any morphism for any Z is then a contraction against
these tables; the invariance checks cost almost nothing per Z.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .category import CategoryDataError
from .trees import EngineError, Word
from .tube import TubeEngine, TubeMorphism, _as_word

# Orientation of the quarter-turn used for the seam-rotation trace, and the
# handedness of the cup/cap pair inside it.  Pinned by requiring the rotated
# trace of the seam-average idempotent on (I, J) to equal the seam-loop trace
# tr F(nu_I^J) on categories with a complex S matrix; the opposite quarter
# turn realizes the inverse rotation (S^-1 Z S instead of S Z S^-1) and is
# kept only as a diagnostic.
S_ROUTE = "right"
ROUTE_TAGS = {"left": (False, False), "right": (False, False)}

_INT_TOL = 1e-6


@dataclass
class InvarianceReport:
    """Outcome of one invariance check: per-clause booleans, residual
    tables keyed by label pair, and whether the clauses agree."""

    kind: str
    commutator_zero: bool
    generator_check: bool
    trace_check: bool
    consistent: bool
    passed: bool
    max_residual: float
    residuals: dict[str, float] = field(default_factory=dict)
    z: np.ndarray | None = None
    details: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "commutator_zero": bool(self.commutator_zero),
            "generator_check": bool(self.generator_check),
            "trace_check": bool(self.trace_check),
            "consistent": bool(self.consistent),
            "passed": bool(self.passed),
            "max_residual": float(self.max_residual),
            "residuals": {k: float(v) for k, v in sorted(self.residuals.items())},
            "z": None if self.z is None else [[int(e) for e in row] for row in self.z],
            "details": list(self.details),
        }


def default_family(n: int) -> tuple[Word, ...]:
    """All tensor words of length at most two."""
    fam: list[Word] = [()]
    fam.extend((a,) for a in range(n))
    fam.extend((a, b) for a in range(n) for b in range(n))
    return tuple(fam)


class RepFamily:
    """Z-independent data shared by every representation over one engine:
    idempotent image bases and the three trace tables per object."""

    def __init__(self, engine: TubeEngine, family=None):
        self.engine = engine
        n = engine.nlab
        self.n = n
        if family is None:
            family = default_family(n)
        self.family: tuple[Word, ...] = tuple(_as_word(x) for x in family)
        self._spaces: dict[Word, dict[tuple[int, int], np.ndarray]] = {}
        self._tau: dict[Word, np.ndarray] = {}
        self._tau_t: dict[Word, np.ndarray] = {}
        self._tau_s: dict[Word, np.ndarray] = {}
        self._twist_blocks: dict[Word, dict[tuple[int, int], np.ndarray]] = {}
        self._nu_table: np.ndarray | None = None
        self._eps_flat: dict[tuple[int, int], np.ndarray] = {}

    # ----------------------------------------------------------- flattening

    def flatten(self, alpha: TubeMorphism) -> np.ndarray:
        """Coefficient vector of a morphism over its full hom basis."""
        hb = self.engine.hom_basis(alpha.source, alpha.target)
        parts = [
            alpha.seam_vector(s, hb.seam_dim(s)) for s in sorted(hb.elements)
        ]
        if not parts:
            return np.zeros(0, dtype=complex)
        return np.concatenate(parts)

    # ---------------------------------------------------------- rep spaces

    def spaces(self, X) -> dict[tuple[int, int], np.ndarray]:
        """Orthonormal bases (in coefficient coordinates) of the idempotent
        images inside Hom(X, (I,J)), keyed by (I, J); empty blocks absent."""
        X = _as_word(X)
        cached = self._spaces.get(X)
        if cached is not None:
            return cached
        eng = self.engine
        out: dict[tuple[int, int], np.ndarray] = {}
        for I in range(self.n):
            for J in range(self.n):
                hb = eng.hom_basis(X, (I, J))
                if hb.total_dim == 0:
                    continue
                eps = eng.epsilon_idempotent(I, J)
                cols = []
                for b in hb.all_elements():
                    bm = eng.basis_morphism(b, X, (I, J))
                    cols.append(self.flatten(eng.compose(eps, bm)))
                L = np.array(cols, dtype=complex).T
                u, sv, _ = np.linalg.svd(L)
                rank = int((sv > 0.5).sum())
                if rank:
                    out[(I, J)] = u[:, :rank]
        self._spaces[X] = out
        return out

    def _action_columns(self, X, target, q_cols: np.ndarray, alpha: TubeMorphism):
        """Pre-composition with alpha applied to morphisms X->target given
        by coefficient columns; returns the new coefficient columns."""
        eng = self.engine
        hb = eng.hom_basis(alpha.source, target)
        out = np.zeros((hb.total_dim, q_cols.shape[1]), dtype=complex)
        src_hb = eng.hom_basis(X, target)
        for k in range(q_cols.shape[1]):
            mor = self._unflatten(src_hb, q_cols[:, k])
            out[:, k] = self.flatten(eng.compose(mor, alpha))
        return out

    @staticmethod
    def _unflatten(hb, vec: np.ndarray) -> TubeMorphism:
        coeffs = {}
        pos = 0
        for s in sorted(hb.elements):
            d = hb.seam_dim(s)
            part = np.asarray(vec[pos : pos + d], dtype=complex)
            pos += d
            if part.size and np.abs(part).max() > 0:
                coeffs[s] = part
        return TubeMorphism(hb.source, hb.target, coeffs)

    # ---------------------------------------------------------- tau tables

    def tau(self, X) -> np.ndarray:
        """tau[j, I, J] = trace, on the (I,J) image block, of pre-composition
        with the j-th basis endomorphism of X."""
        X = _as_word(X)
        cached = self._tau.get(X)
        if cached is not None:
            return cached
        tab = self._build_tau(X, None)
        self._tau[X] = tab
        return tab

    def tau_t(self, X) -> np.ndarray:
        """Same table for basis elements pre-composed with the wrap t_X."""
        X = _as_word(X)
        cached = self._tau_t.get(X)
        if cached is not None:
            return cached
        tab = self._build_tau(X, self.engine.twist_automorphism(X))
        self._tau_t[X] = tab
        return tab

    def _build_tau(self, X: Word, post: TubeMorphism | None) -> np.ndarray:
        eng = self.engine
        hb = eng.hom_basis(X, X)
        dim = hb.total_dim
        tab = np.zeros((dim, self.n, self.n), dtype=complex)
        sps = self.spaces(X)
        basis = hb.all_elements()
        for j, b in enumerate(basis):
            alpha = eng.basis_morphism(b, X, X)
            if post is not None:
                alpha = eng.compose(alpha, post)
            for (I, J), Q in sps.items():
                acted = self._action_columns(X, (I, J), Q, alpha)
                tab[j, I, J] = np.trace(Q.conj().T @ acted)
        return tab

    def tau_s(self, X) -> np.ndarray:
        """Seam-rotation table: tau_s[j, I, J] sums, over the single-letter
        objects carrying the rotated j-th basis endomorphism, the standard
        trace tables of those objects."""
        X = _as_word(X)
        cached = self._tau_s.get(X)
        if cached is not None:
            return cached
        eng = self.engine
        hb = eng.hom_basis(X, X)
        tab = np.zeros((hb.total_dim, self.n, self.n), dtype=complex)
        for j, b in enumerate(hb.all_elements()):
            alpha = eng.basis_morphism(b, X, X)
            rotated = self._route_rotation(alpha)
            for s, mor in rotated.items():
                tab[j] += np.einsum(
                    "k,kab->ab", self.flatten(mor), self.tau((s,))
                )
        self._tau_s[X] = tab
        return tab

    def _route_rotation(self, alpha: TubeMorphism, route: str = None):
        route = route or S_ROUTE
        left, right = self.engine.rotations_of_endo(
            alpha, ROUTE_TAGS["left"], ROUTE_TAGS["right"]
        )
        return left if route == "left" else right

    # ------------------------------------------------------- special tables

    def eps_flat(self, I: int, J: int) -> np.ndarray:
        key = (I, J)
        cached = self._eps_flat.get(key)
        if cached is None:
            cached = self.flatten(self.engine.epsilon_idempotent(I, J))
            self._eps_flat[key] = cached
        return cached

    def nu_table(self) -> np.ndarray:
        """NT[I, J, A, B] with tr F(nu_I^J) = sum_{A,B} NT[I,J,A,B] Z_AB."""
        if self._nu_table is not None:
            return self._nu_table
        eng = self.engine
        n = self.n
        NT = np.zeros((n, n, n, n), dtype=complex)
        for I in range(n):
            for J in range(n):
                for S in range(n):
                    g = eng.gamma(I, J, S)
                    NT[I, J] += (eng.d[S] / eng.total_dim) * np.einsum(
                        "k,kab->ab", self.flatten(g), self.tau((S,))
                    )
        self._nu_table = NT
        return NT

    def twist_blocks(self, X) -> dict[tuple[int, int], np.ndarray]:
        """Matrix of the wrap action on each (I,J) image block of X."""
        X = _as_word(X)
        cached = self._twist_blocks.get(X)
        if cached is not None:
            return cached
        eng = self.engine
        t = eng.twist_automorphism(X)
        out = {}
        for (I, J), Q in self.spaces(X).items():
            acted = self._action_columns(X, (I, J), Q, t)
            out[(I, J)] = Q.conj().T @ acted
        self._twist_blocks[X] = out
        return out


@dataclass
class TubeRep:
    """One representation: shared family data plus its multiplicity matrix."""

    core: RepFamily
    z: np.ndarray

    @property
    def engine(self) -> TubeEngine:
        return self.core.engine

    @property
    def family(self) -> tuple[Word, ...]:
        return self.core.family

    def space_dim(self, X) -> int:
        sps = self.core.spaces(X)
        return int(
            sum(self.z[I, J] * Q.shape[1] for (I, J), Q in sps.items())
        )

    def matrix(self, alpha: TubeMorphism) -> np.ndarray:
        """Full matrix of F(alpha): F(target) -> F(source), block-diagonal
        over (I, J) with each block repeated Z_IJ times."""
        core = self.core
        X, Y = alpha.source, alpha.target
        sx, sy = core.spaces(X), core.spaces(Y)
        keys = sorted(set(sx) | set(sy))
        rows = sum(
            int(self.z[k]) * (sx[k].shape[1] if k in sx else 0) for k in keys
        )
        cols = sum(
            int(self.z[k]) * (sy[k].shape[1] if k in sy else 0) for k in keys
        )
        out = np.zeros((rows, cols), dtype=complex)
        r = c = 0
        for k in keys:
            zk = int(self.z[k])
            nr = sx[k].shape[1] if k in sx else 0
            nc = sy[k].shape[1] if k in sy else 0
            if zk and nr and nc:
                acted = core._action_columns(Y, k, sy[k], alpha)
                blk = sx[k].conj().T @ acted
                out[r : r + zk * nr, c : c + zk * nc] = np.kron(np.eye(zk), blk)
            r += zk * nr
            c += zk * nc
        return out


def build_rep(engine_or_core, z, family=None) -> TubeRep:
    """Construct the representation with multiplicity matrix z."""
    core = (
        engine_or_core
        if isinstance(engine_or_core, RepFamily)
        else RepFamily(engine_or_core, family)
    )
    zarr = np.asarray(z)
    n = core.n
    if zarr.shape != (n, n):
        raise CategoryDataError(
            f"multiplicity matrix must be {n}x{n}, got {zarr.shape}"
        )
    if np.iscomplexobj(zarr):
        if np.abs(zarr.imag).max() > 0:
            raise CategoryDataError("multiplicity matrix must be real")
        zarr = zarr.real
    rounded = np.rint(zarr)
    if np.abs(zarr - rounded).max() > _INT_TOL or (rounded < 0).any():
        raise CategoryDataError(
            "multiplicity matrix entries must be non-negative integers"
        )
    return TubeRep(core, rounded.astype(int))


# ------------------------------------------------------------------- traces


def trace_standard(F: TubeRep, X, alpha: TubeMorphism) -> complex:
    X = _as_word(X)
    if X not in F.family:
        raise EngineError(f"object {X} outside the representation's family")
    flat = F.core.flatten(alpha)
    return complex(np.einsum("j,jab,ab->", flat, F.core.tau(X), F.z))


def trace_t_twisted(F: TubeRep, X, alpha: TubeMorphism) -> complex:
    X = _as_word(X)
    if X not in F.family:
        raise EngineError(f"object {X} outside the representation's family")
    flat = F.core.flatten(alpha)
    return complex(np.einsum("j,jab,ab->", flat, F.core.tau_t(X), F.z))


def trace_s_twisted(F: TubeRep, X, alpha: TubeMorphism, method: str = "table") -> complex:
    """Rotated trace.  `method="table"` contracts the cached rotation tables;
    `method="direct"` builds each rotated seam component as an explicit
    morphism and traces its full representation matrix."""
    X = _as_word(X)
    if X not in F.family:
        raise EngineError(f"object {X} outside the representation's family")
    if method == "table":
        flat = F.core.flatten(alpha)
        return complex(np.einsum("j,jab,ab->", flat, F.core.tau_s(X), F.z))
    if method != "direct":
        raise ValueError(f"unknown s-twisted trace method {method!r}")
    rotated = F.core._route_rotation(alpha)
    total = 0.0 + 0.0j
    for _, mor in rotated.items():
        total += np.trace(F.matrix(mor))
    return complex(total)


def multiplicity_matrix(F: TubeRep) -> np.ndarray:
    """Recover Z from the traces of the seam-average idempotents."""
    n = F.core.n
    out = np.zeros((n, n), dtype=int)
    for I in range(n):
        for J in range(n):
            val = complex(
                np.einsum(
                    "j,jab,ab->",
                    F.core.eps_flat(I, J),
                    F.core.tau((I, J)),
                    F.z,
                )
            )
            rounded = round(val.real)
            if abs(val - rounded) > _INT_TOL:
                raise EngineError(
                    f"trace of idempotent ({I},{J}) is {val}, not an integer"
                )
            out[I, J] = rounded
    return out


# ------------------------------------------------------------------- checks


def _spanning_residual(F: TubeRep, table_a, table_b) -> float:
    """Largest trace disagreement between two tables over all basis
    endomorphisms of all family objects."""
    worst = 0.0
    for X in F.family:
        ta = np.einsum("jab,ab->j", table_a(X), F.z)
        tb = np.einsum("jab,ab->j", table_b(X), F.z)
        if ta.size:
            worst = max(worst, float(np.abs(ta - tb).max()))
    return worst


def check_t_invariance(F: TubeRep, tolerance: float = 1e-7) -> InvarianceReport:
    """Wrap invariance: Z commutes with the twist diagonal iff the wrap acts
    as the identity iff the wrapped trace equals the standard trace."""
    core = F.core
    eng = F.engine
    theta = np.array([eng.cat.twist[i] for i in range(core.n)])
    comm = np.abs(F.z * (theta[None, :] - theta[:, None]))
    comm_resid = float(comm.max()) if comm.size else 0.0
    commutes = comm_resid <= tolerance

    gen_resid = 0.0
    for X in F.family:
        for (I, J), blk in core.twist_blocks(X).items():
            if F.z[I, J] == 0:
                continue
            gen_resid = max(
                gen_resid, float(np.abs(blk - np.eye(blk.shape[0])).max())
            )
    generator = gen_resid <= tolerance

    tr_resid = _spanning_residual(F, core.tau, core.tau_t)
    traces = tr_resid <= tolerance

    consistent = commutes == generator == traces
    residuals = {
        "commutator": comm_resid,
        "wrap_action": gen_resid,
        "trace_spanning": tr_resid,
    }
    details = []
    if not consistent:
        details.append(
            "clauses disagree: commutator "
            f"{commutes}, wrap action {generator}, traces {traces}"
        )
    return InvarianceReport(
        kind="t",
        commutator_zero=commutes,
        generator_check=generator,
        trace_check=traces,
        consistent=consistent,
        passed=commutes and generator and traces and consistent,
        max_residual=max(residuals.values()),
        residuals=residuals,
        z=F.z.copy(),
        details=details,
    )


def check_s_invariance(F: TubeRep, tolerance: float = 1e-7) -> InvarianceReport:
    """Seam-rotation invariance: Z commutes with S iff the seam-loop traces
    match the idempotent traces iff the rotated trace equals the standard
    trace.  Additionally pins tr F(nu_I^J) to the S-conjugation of Z."""
    core = F.core
    eng = F.engine
    smat = eng.modular.s_matrix
    comm = smat @ F.z - F.z @ smat
    comm_resid = float(np.abs(comm).max()) if comm.size else 0.0
    scale = max(1.0, float(np.abs(smat @ F.z).max()))
    commutes = comm_resid / scale <= tolerance

    nt = core.nu_table()
    nu_traces = np.einsum("ijab,ab->ij", nt, F.z)
    eps_traces = F.z.astype(complex)
    gen_resid = float(np.abs(nu_traces - eps_traces).max())
    generator = gen_resid <= max(tolerance, tolerance * scale)

    tr_resid = _spanning_residual(F, core.tau, core.tau_s)
    traces = tr_resid <= max(tolerance, tolerance * scale)

    conj = smat @ F.z @ np.linalg.inv(smat)
    conj_resid = float(np.abs(nu_traces - conj).max())

    consistent = commutes == generator == traces
    residuals = {
        "commutator": comm_resid,
        "nu_vs_eps": gen_resid,
        "trace_spanning": tr_resid,
        "nu_vs_conjugation": conj_resid,
    }
    details = []
    if conj_resid > max(tolerance, tolerance * scale):
        details.append(
            f"seam-loop traces deviate from S-conjugation by {conj_resid:.3e}"
        )
    if not consistent:
        details.append(
            "clauses disagree: commutator "
            f"{commutes}, loop traces {generator}, rotated traces {traces}"
        )
    return InvarianceReport(
        kind="s",
        commutator_zero=commutes,
        generator_check=generator,
        trace_check=traces,
        consistent=consistent,
        passed=commutes and generator and traces and consistent,
        max_residual=max(residuals.values()),
        residuals=residuals,
        z=F.z.copy(),
        details=details,
    )


def check_modular_invariance(F: TubeRep, tolerance: float = 1e-7) -> InvarianceReport:
    """Full test: unit normalization plus both invariance checks."""
    rt = check_t_invariance(F, tolerance)
    rs = check_s_invariance(F, tolerance)
    unit_ok = int(F.z[0, 0]) == 1
    residuals = {f"t:{k}": v for k, v in rt.residuals.items()}
    residuals.update({f"s:{k}": v for k, v in rs.residuals.items()})
    details = list(rt.details) + list(rs.details)
    if not unit_ok:
        details.append(f"unit multiplicity is {int(F.z[0, 0])}, expected 1")
    consistent = rt.consistent and rs.consistent
    return InvarianceReport(
        kind="modular",
        commutator_zero=rt.commutator_zero and rs.commutator_zero,
        generator_check=rt.generator_check and rs.generator_check,
        trace_check=rt.trace_check and rs.trace_check,
        consistent=consistent,
        passed=unit_ok and rt.passed and rs.passed,
        max_residual=max(rt.max_residual, rs.max_residual),
        residuals=residuals,
        z=F.z.copy(),
        details=details,
    )


def random_multiplicity(rng: np.random.Generator, n: int, force_unit: bool = True):
    """Random small multiplicity matrix, entries in {0, 1, 2}."""
    z = rng.integers(0, 3, size=(n, n))
    if force_unit:
        z[0, 0] = 1
    return z
