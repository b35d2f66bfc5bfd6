"""Classification of modular invariant matrices for given modular data.

A modular invariant is a non-negative integer matrix Z with unit
(0,0)-entry commuting with both S and T.  The real solution space of the
two commutator equations (the commutant) is computed once by a dense
null-space solve; integer points inside the entry-bounded box are then
enumerated by depth-first search over the commutant coordinates with
interval pruning.  A brute-force enumerator over the twist-compatible
support serves as an independent oracle on small instances.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .category import (
    ModularData,
    ModularDataError,
    NonScalarLambdaError,
    SingularSMatrixError,
)

_SNAP_DENOMINATOR = 64
_SNAP_TOL = 1e-9
_DEFAULT_NODE_BUDGET = 2_000_000
_DEFAULT_DIM_BUDGET = 16
_ENTRY_BOUND_CAP = 8


class PartialSearchError(RuntimeError):
    """The commutant is too large for the configured search budget; raised
    instead of silently returning a truncated enumeration."""


@dataclass
class CommutantBasis:
    """Basis of {M real : MS = SM and MT = TM} in reduced echelon form over
    the flattened matrix coordinates."""

    basis: list[np.ndarray]
    pivots: list[int]
    n: int
    residual: float = 0.0

    @property
    def dimension(self) -> int:
        return len(self.basis)


def commutant(md: ModularData, tolerance: float = 1e-9) -> CommutantBasis:
    """Null space of M -> ([M,S], [M,T]) over real matrices M."""
    S = md.s_matrix
    T = md.t_matrix
    n = S.shape[0]
    eye = np.eye(n)
    # Commutator maps acting on vec(M), M real; complex equations are split
    # into real and imaginary rows.
    blocks = []
    for A in (S, T):
        op = np.kron(A.T, eye) - np.kron(eye, A)
        blocks.append(op.real)
        blocks.append(op.imag)
    stack = np.vstack(blocks)
    _, sv, vt = np.linalg.svd(stack)
    tol = max(tolerance, sv.max() * n * n * np.finfo(float).eps) if sv.size else tolerance
    rank = int((sv > tol).sum())
    null = vt[rank:]
    if null.size == 0:
        return CommutantBasis(basis=[], pivots=[], n=n)
    rows = _rref(null)
    basis, pivots = [], []
    worst = 0.0
    for row in rows:
        snapped = _snap_rational(row)
        M = snapped.reshape(n, n)
        worst = max(
            worst,
            float(np.abs(M @ S - S @ M).max()),
            float(np.abs(M @ T - T @ M).max()),
        )
        basis.append(M)
        pivots.append(int(np.argmax(np.abs(snapped) > 0.5)))
    return CommutantBasis(basis=basis, pivots=pivots, n=n, residual=worst)


def _rref(rows: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Reduced row echelon form with partial pivoting; rows span unchanged."""
    rows = np.array(rows, dtype=float)
    m, k = rows.shape
    r = 0
    for c in range(k):
        if r == m:
            break
        piv = r + int(np.argmax(np.abs(rows[r:, c])))
        if abs(rows[piv, c]) <= tol:
            continue
        rows[[r, piv]] = rows[[piv, r]]
        rows[r] /= rows[r, c]
        for i in range(m):
            if i != r and abs(rows[i, c]) > tol:
                rows[i] -= rows[i, c] * rows[r]
        r += 1
    return rows[:r]


def _snap_rational(vec: np.ndarray) -> np.ndarray:
    out = vec.copy()
    for i, x in enumerate(vec):
        frac = Fraction(float(x)).limit_denominator(_SNAP_DENOMINATOR)
        if abs(float(frac) - x) <= _SNAP_TOL:
            out[i] = float(frac)
    return out


def is_modular_invariant(z, md: ModularData, tolerance: float = 1e-8):
    """Definition check; returns (bool, report dict with per-clause data)."""
    zarr = np.asarray(z, dtype=float)
    n = md.s_matrix.shape[0]
    report: dict = {"shape_ok": zarr.shape == (n, n)}
    if not report["shape_ok"]:
        report["passed"] = False
        return False, report
    rounded = np.rint(zarr)
    integral = float(np.abs(zarr - rounded).max()) <= tolerance
    nonneg = bool((rounded >= 0).all())
    unit = int(rounded[0, 0]) == 1
    cs = float(np.abs(rounded @ md.s_matrix - md.s_matrix @ rounded).max())
    ct = float(np.abs(rounded @ md.t_matrix - md.t_matrix @ rounded).max())
    scale = max(1.0, float(np.abs(md.s_matrix).max()) * float(np.abs(rounded).max() or 1.0))
    report.update(
        integral=integral,
        non_negative=nonneg,
        unit_entry=unit,
        s_commutator=cs,
        t_commutator=ct,
        commutes=cs <= tolerance * scale and ct <= tolerance * scale,
    )
    passed = integral and nonneg and unit and report["commutes"]
    report["passed"] = passed
    return passed, report


def default_entry_bound(md: ModularData) -> int:
    d = np.abs(md.s_matrix[0])
    bound = int(np.ceil(float(np.max(np.outer(d, d))) - 1e-9))
    return max(1, min(bound, _ENTRY_BOUND_CAP))


def enumerate_modular_invariants(
    md: ModularData,
    entry_bound: int | None = None,
    node_budget: int = _DEFAULT_NODE_BUDGET,
) -> list[np.ndarray]:
    """All modular invariants with entries <= entry_bound, lexicographically
    sorted.  Searches integer points of the commutant: in echelon
    coordinates every solution is determined by its values at the pivot
    entries, which are themselves entries of Z and hence integers in
    [0, entry_bound]."""
    if entry_bound is None:
        entry_bound = default_entry_bound(md)
    if entry_bound < 1:
        raise ValueError("entry_bound must be >= 1")
    com = commutant(md)
    n = com.n
    k = com.dimension
    if k == 0:
        return []
    if k > _DEFAULT_DIM_BUDGET:
        raise PartialSearchError(
            f"commutant dimension {k} exceeds the search budget ({_DEFAULT_DIM_BUDGET})"
        )
    B = np.array([m.reshape(-1) for m in com.basis])  # k x n^2

    # Interval pruning data: suffix_lo/hi[i, x] bound the contribution of
    # coordinates i.. to entry x given coefficients in [0, entry_bound].
    pos = np.maximum(B, 0.0) * entry_bound
    neg = np.minimum(B, 0.0) * entry_bound
    suffix_hi = np.zeros((k + 1, n * n))
    suffix_lo = np.zeros((k + 1, n * n))
    for i in range(k - 1, -1, -1):
        suffix_hi[i] = suffix_hi[i + 1] + pos[i]
        suffix_lo[i] = suffix_lo[i + 1] + neg[i]

    lo_target = np.zeros(n * n)
    hi_target = np.full(n * n, float(entry_bound))
    lo_target[0] = hi_target[0] = 1.0  # unit entry pinned

    found: list[tuple] = []
    nodes = 0

    def dfs(i: int, acc: np.ndarray):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise PartialSearchError(
                f"search exceeded the node budget ({node_budget})"
            )
        if (acc + suffix_hi[i] < lo_target - 1e-7).any():
            return
        if (acc + suffix_lo[i] > hi_target + 1e-7).any():
            return
        if i == k:
            vec = np.rint(acc)
            if np.abs(acc - vec).max() > 1e-7:
                return
            found.append(tuple(int(v) for v in vec))
            return
        # The pivot coordinate of basis row i is untouched by rows > i, so
        # its final value equals acc[pivot] + c; c ranges over the integers
        # keeping that entry inside its target interval.
        p = com.pivots[i]
        c_lo = int(np.ceil(lo_target[p] - acc[p] - 1e-7))
        c_hi = int(np.floor(hi_target[p] - acc[p] + 1e-7))
        for c in range(c_lo, c_hi + 1):
            dfs(i + 1, acc + c * B[i])

    dfs(0, np.zeros(n * n))

    out = []
    for vec in sorted(set(found)):
        Z = np.array(vec, dtype=int).reshape(n, n)
        okay, _ = is_modular_invariant(Z, md)
        if okay:
            out.append(Z)
    return out


def brute_force_invariants(md: ModularData, entry_bound: int) -> list[np.ndarray]:
    """Independent oracle: direct scan of all bounded matrices supported on
    twist-compatible entries (T diagonal forces Z_IJ = 0 when the twists at
    I and J differ)."""
    n = md.s_matrix.shape[0]
    theta = np.diag(md.t_matrix)
    free = [
        (i, j)
        for i in range(n)
        for j in range(n)
        if abs(theta[i] - theta[j]) <= 1e-9 and (i, j) != (0, 0)
    ]
    out = []
    total = (entry_bound + 1) ** len(free)
    if total > 5_000_000:
        raise PartialSearchError(
            f"brute force over {len(free)} free entries is too large"
        )
    for code in range(total):
        Z = np.zeros((n, n), dtype=int)
        Z[0, 0] = 1
        rem = code
        for (i, j) in free:
            Z[i, j] = rem % (entry_bound + 1)
            rem //= entry_bound + 1
        okay, _ = is_modular_invariant(Z, md)
        if okay:
            out.append(Z)
    out.sort(key=lambda m: tuple(m.reshape(-1)))
    return out


def load_modular_data_file(source) -> ModularData:
    """Standalone S/T input: JSON object with "S" and "T" as matrices of
    [re, im] pairs.  Validates the defining relations and reconstructs the
    charge conjugation, the anomaly scalar, and the global dimension."""
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    elif isinstance(source, str):
        stripped = source.lstrip()
        if stripped.startswith("{") or stripped.startswith("["):
            text = source
        else:
            text = Path(source).read_text(encoding="utf-8")
    else:
        text = json.dumps(source)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModularDataError(f"modular data file is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "S" not in obj or "T" not in obj:
        raise ModularDataError('modular data file needs "S" and "T" entries')

    def mat(rows, name):
        try:
            arr = np.array(
                [[complex(e[0], e[1]) for e in row] for row in rows], dtype=complex
            )
        except (TypeError, IndexError, ValueError) as exc:
            raise ModularDataError(
                f'"{name}" must be a matrix of [re, im] pairs'
            ) from exc
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ModularDataError(f'"{name}" must be square')
        return arr

    S = mat(obj["S"], "S")
    T = mat(obj["T"], "T")
    if S.shape != T.shape:
        raise ModularDataError("S and T must have matching shape")
    n = S.shape[0]
    if np.abs(T - np.diag(np.diag(T))).max() > 1e-9:
        raise ModularDataError("T must be diagonal")
    if abs(np.linalg.det(S)) < 1e-12:
        raise SingularSMatrixError("S matrix is singular")
    S2 = S @ S
    dim = float(np.abs(S2).max())
    C = S2 / dim
    Crounded = np.rint(C.real)
    if (
        np.abs(C - Crounded).max() > 1e-8
        or not np.isin(Crounded, (0.0, 1.0)).all()
        or (Crounded.sum(axis=0) != 1).any()
        or (Crounded.sum(axis=1) != 1).any()
    ):
        raise ModularDataError("S^2 is not a scaled permutation matrix")
    ST3 = np.linalg.matrix_power(S @ T, 3)
    ratios = ST3 @ np.linalg.inv(S2)
    lam = complex(ratios[0, 0])
    if np.abs(ratios - lam * np.eye(n)).max() > 1e-8:
        raise NonScalarLambdaError("(ST)^3 is not a scalar multiple of S^2")
    return ModularData(
        s_matrix=S,
        t_matrix=T,
        charge_conj=Crounded.astype(int),
        lam=lam,
        global_dim=dim,
    )
