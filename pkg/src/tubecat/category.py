"""Category data: loading, validation, and modular data computation.

The input format is a JSON document fixing a multiplicity-free modular
category by its fusion ring and F/R-symbols.  Loading is strict: unknown
keys, missing or duplicated symbol entries, and fusion-ring violations are
all rejected with a descriptive error.  Verification of the pentagon and
hexagon equations is report-based (never raises), so corrupted data can be
diagnosed rather than merely refused.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

UNIT = 0

DEFAULT_TOLERANCE = 1e-9

_BUNDLED = ("trivial", "semion", "fibonacci", "ising", "z3", "double_z2")

DATA_DIR_ENV = "TUBEALG_DATA_DIR"


class CategoryDataError(ValueError):
    """Input data is malformed or violates a structural invariant."""


class ModularDataError(ValueError):
    """Modular data cannot be computed from the given category."""


class NonScalarLambdaError(ModularDataError):
    """(ST)^3 (S^2)^{-1} is not a scalar matrix — corrupt input data."""


class SingularSMatrixError(ModularDataError):
    """The S-matrix is singular — the input is not modular."""


@dataclass(frozen=True)
class FusionRing:
    labels: tuple[str, ...]
    dual: tuple[int, ...]
    fusion: np.ndarray  # N[a, b, c] in {0, 1}

    @property
    def size(self) -> int:
        return len(self.labels)

    def n(self, a: int, b: int, c: int) -> int:
        return int(self.fusion[a, b, c])

    def validate(self) -> None:
        n = self.size
        N = self.fusion
        if N.shape != (n, n, n):
            raise CategoryDataError("fusion tensor has wrong shape")
        if not np.all((N == 0) | (N == 1)):
            raise CategoryDataError("fusion multiplicities must be 0 or 1")
        if len(self.dual) != n or sorted(self.dual) != list(range(n)):
            raise CategoryDataError("dual map must be a permutation of the labels")
        for a in range(n):
            if self.dual[self.dual[a]] != a:
                raise CategoryDataError("dual map is not an involution")
        if self.dual[UNIT] != UNIT:
            raise CategoryDataError("the unit must be self-dual")
        for b in range(n):
            for c in range(n):
                if N[UNIT, b, c] != (1 if b == c else 0):
                    raise CategoryDataError("unit row of the fusion tensor is wrong")
                if N[b, UNIT, c] != (1 if b == c else 0):
                    raise CategoryDataError("unit column of the fusion tensor is wrong")
        for a in range(n):
            for b in range(n):
                expect = 1 if b == self.dual[a] else 0
                if N[a, b, UNIT] != expect:
                    raise CategoryDataError(
                        f"duality mismatch: N[{a},{b}->unit] = {N[a, b, UNIT]}, "
                        f"expected {expect}"
                    )
        if not np.array_equal(N, N.transpose(1, 0, 2)):
            raise CategoryDataError("fusion ring is not commutative")
        # associativity of the fusion ring
        left = np.einsum("abe,ecd->abcd", N, N)
        right = np.einsum("bcf,afd->abcd", N, N)
        if not np.array_equal(left, right):
            raise CategoryDataError("fusion ring is not associative")

    def fusion_matrix(self, a: int) -> np.ndarray:
        """Left-multiplication matrix (N_a)_{cb} = N[a, b, c]."""
        return self.fusion[a].T.astype(float)


@dataclass(frozen=True)
class MTCData:
    ring: FusionRing
    f: dict[tuple[int, int, int, int, int, int], complex] = field(repr=False)
    r: dict[tuple[int, int, int], complex] = field(repr=False)
    qdim: tuple[float, ...]
    twist: tuple[complex, ...]
    global_dim: float
    tolerance: float = DEFAULT_TOLERANCE
    name: str = ""

    def f_symbol(self, a, b, c, d, e, f) -> complex:
        val = self.f.get((a, b, c, d, e, f))
        if val is None:
            raise CategoryDataError(f"F-symbol {(a, b, c, d, e, f)} is not admissible")
        return val

    def f_get(self, a, b, c, d, e, f) -> complex:
        return self.f.get((a, b, c, d, e, f), 0.0 + 0.0j)

    def r_symbol(self, a, b, c) -> complex:
        val = self.r.get((a, b, c))
        if val is None:
            raise CategoryDataError(f"R-symbol {(a, b, c)} is not admissible")
        return val

    @property
    def size(self) -> int:
        return self.ring.size


@dataclass(frozen=True)
class ModularData:
    s_matrix: np.ndarray
    t_matrix: np.ndarray
    charge_conj: np.ndarray
    lam: complex
    global_dim: float

    def as_dict(self) -> dict:
        return {
            "S": _matrix_to_json(self.s_matrix),
            "T": _matrix_to_json(self.t_matrix),
            "C": [[int(x) for x in row] for row in self.charge_conj],
            "lambda": [self.lam.real, self.lam.imag],
            "global_dim": self.global_dim,
        }


@dataclass
class ConsistencyReport:
    check: str
    passed: bool
    max_residual: float
    checked: int
    failures: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "passed": bool(self.passed),
            "max_residual": float(self.max_residual),
            "instances": int(self.checked),
            "failures": list(self.failures),
        }


# --------------------------------------------------------------------- loading


def _require_keys(obj: dict, allowed: set[str], required: set[str], where: str):
    unknown = set(obj) - allowed
    if unknown:
        raise CategoryDataError(f"unknown key(s) in {where}: {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise CategoryDataError(f"missing key(s) in {where}: {sorted(missing)}")


def _as_complex(value, where: str) -> complex:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        raise CategoryDataError(f"{where} must be a [re, im] pair")
    return complex(value[0], value[1])


def _label_index(value, n: int, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or not (0 <= value < n):
        raise CategoryDataError(f"{where}: label index {value!r} out of range")
    return value


def load_category(source, tolerance: float = DEFAULT_TOLERANCE, name: str = "") -> MTCData:
    """Parse and validate a category-data JSON document.

    ``source`` may be a path, bytes, a JSON string, or a readable file
    object.  Raises CategoryDataError on any schema or consistency problem.
    """
    text = _read_source(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CategoryDataError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CategoryDataError("top level must be a JSON object")
    _require_keys(
        doc,
        allowed={"labels", "dual", "fusion", "F", "R", "qdim", "twist"},
        required={"labels", "dual", "fusion", "F", "R"},
        where="category file",
    )

    labels = doc["labels"]
    if (
        not isinstance(labels, list)
        or not labels
        or not all(isinstance(x, str) for x in labels)
        or len(set(labels)) != len(labels)
    ):
        raise CategoryDataError("labels must be a non-empty list of distinct strings")
    n = len(labels)

    if not isinstance(doc["dual"], list) or len(doc["dual"]) != n:
        raise CategoryDataError("dual must be a list of label indices, one per label")
    dual = tuple(_label_index(x, n, "dual") for x in doc["dual"])

    fusion = np.zeros((n, n, n), dtype=int)
    if not isinstance(doc["fusion"], list):
        raise CategoryDataError("fusion must be a list of [a, b, c] triples")
    for item in doc["fusion"]:
        if not isinstance(item, list) or len(item) != 3:
            raise CategoryDataError("fusion entries must be [a, b, c] triples")
        a, b, c = (_label_index(x, n, "fusion") for x in item)
        if fusion[a, b, c]:
            raise CategoryDataError(f"duplicate fusion triple {item}")
        fusion[a, b, c] = 1

    ring = FusionRing(tuple(labels), dual, fusion)
    ring.validate()

    f_syms: dict[tuple[int, int, int, int, int, int], complex] = {}
    if not isinstance(doc["F"], list):
        raise CategoryDataError("F must be a list of records")
    for rec in doc["F"]:
        if not isinstance(rec, dict):
            raise CategoryDataError("F entries must be objects")
        _require_keys(rec, {"labels", "value"}, {"labels", "value"}, "F record")
        labs = rec["labels"]
        if not isinstance(labs, list) or len(labs) != 6:
            raise CategoryDataError("F record labels must be [a,b,c,d,e,f]")
        key = tuple(_label_index(x, n, "F record") for x in labs)
        a, b, c, d, e, f = key
        if not (fusion[a, b, e] and fusion[e, c, d] and fusion[b, c, f] and fusion[a, f, d]):
            raise CategoryDataError(f"F record {labs} is not admissible")
        if key in f_syms:
            raise CategoryDataError(f"duplicate F record {labs}")
        f_syms[key] = _as_complex(rec["value"], "F value")

    r_syms: dict[tuple[int, int, int], complex] = {}
    if not isinstance(doc["R"], list):
        raise CategoryDataError("R must be a list of records")
    for rec in doc["R"]:
        if not isinstance(rec, dict):
            raise CategoryDataError("R entries must be objects")
        _require_keys(rec, {"labels", "value"}, {"labels", "value"}, "R record")
        labs = rec["labels"]
        if not isinstance(labs, list) or len(labs) != 3:
            raise CategoryDataError("R record labels must be [a,b,c]")
        key = tuple(_label_index(x, n, "R record") for x in labs)
        a, b, c = key
        if not fusion[a, b, c]:
            raise CategoryDataError(f"R record {labs} is not admissible")
        if key in r_syms:
            raise CategoryDataError(f"duplicate R record {labs}")
        val = _as_complex(rec["value"], "R value")
        if val == 0:
            raise CategoryDataError(f"R-symbol {labs} must be invertible")
        r_syms[key] = val

    # completeness: every admissible symbol must be present
    for a in range(n):
        for b in range(n):
            for e in range(n):
                if not fusion[a, b, e]:
                    continue
                for c in range(n):
                    for d in range(n):
                        if not fusion[e, c, d]:
                            continue
                        if not any((a, b, c, d, e, f) in f_syms for f in range(n)):
                            raise CategoryDataError(
                                f"missing F records for labels ({a},{b},{c},{d})"
                            )
                        for f in range(n):
                            if (
                                fusion[b, c, f]
                                and fusion[a, f, d]
                                and (a, b, c, d, e, f) not in f_syms
                            ):
                                raise CategoryDataError(
                                    f"missing F record ({a},{b},{c},{d},{e},{f})"
                                )
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if fusion[a, b, c] and (a, b, c) not in r_syms:
                    raise CategoryDataError(f"missing R record ({a},{b},{c})")

    # unit gauge: symbols touching the unit must be exactly trivial
    for key, val in f_syms.items():
        if UNIT in key[:3] and abs(val - 1.0) > 1e-12:
            raise CategoryDataError(
                f"F record {list(key)} must equal 1 (unit-gauge data required)"
            )
    for key, val in r_syms.items():
        if UNIT in key[:2] and abs(val - 1.0) > 1e-12:
            raise CategoryDataError(
                f"R record {list(key)} must equal 1 (unit-gauge data required)"
            )

    computed_qdim = _qdim_from_f(ring, f_syms)
    if "qdim" in doc:
        if not isinstance(doc["qdim"], list) or len(doc["qdim"]) != n:
            raise CategoryDataError("qdim must be a list of [re, im] pairs, one per label")
        file_qdim = [_as_complex(x, "qdim entry") for x in doc["qdim"]]
        for i, q in enumerate(file_qdim):
            if abs(q.imag) > tolerance or q.real <= 0:
                raise CategoryDataError("quantum dimensions must be positive reals")
            if abs(q.real - computed_qdim[i]) > max(tolerance, 1e-6):
                raise CategoryDataError(
                    f"inconsistent dimensions: file qdim[{i}] = {q.real:.9g} but "
                    f"F-symbols give {computed_qdim[i]:.9g}"
                )
        qdim = tuple(q.real for q in file_qdim)
    else:
        qdim = tuple(computed_qdim)

    if "twist" in doc:
        if not isinstance(doc["twist"], list) or len(doc["twist"]) != n:
            raise CategoryDataError("twist must be a list of [re, im] pairs, one per label")
        twist = tuple(_as_complex(x, "twist entry") for x in doc["twist"])
    else:
        twist = tuple(_twist_from_r(ring, r_syms, qdim))

    if abs(twist[UNIT] - 1.0) > tolerance:
        raise CategoryDataError("the unit twist must be 1")

    global_dim = float(sum(d * d for d in qdim))
    return MTCData(
        ring=ring,
        f=f_syms,
        r=r_syms,
        qdim=qdim,
        twist=twist,
        global_dim=global_dim,
        tolerance=tolerance,
        name=name,
    )


def _read_source(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, (str, Path)):
        p = Path(source)
        if isinstance(source, Path) or _looks_like_path(str(source)):
            try:
                return p.read_text(encoding="utf-8")
            except OSError as exc:
                raise CategoryDataError(f"cannot read {source}: {exc}") from exc
        return str(source)
    if isinstance(source, io.IOBase) or hasattr(source, "read"):
        data = source.read()
        return data.decode("utf-8") if isinstance(data, bytes) else data
    raise CategoryDataError(f"unsupported source type {type(source)!r}")


def _looks_like_path(text: str) -> bool:
    stripped = text.lstrip()
    return not stripped.startswith("{")


def _qdim_from_f(ring: FusionRing, f_syms) -> list[float]:
    dims = []
    for a in range(ring.size):
        ad = ring.dual[a]
        val = f_syms.get((a, ad, a, a, UNIT, UNIT))
        if val is None or val == 0:
            raise CategoryDataError(
                f"cannot derive the quantum dimension of label {a}: "
                f"F record ({a},{ad},{a},{a},0,0) is missing or zero"
            )
        dims.append(1.0 / abs(val))
    return dims


def _twist_from_r(ring: FusionRing, r_syms, qdim) -> list[complex]:
    twists = []
    for a in range(ring.size):
        tot = 0.0 + 0.0j
        for c in range(ring.size):
            if ring.fusion[a, a, c]:
                tot += qdim[c] * r_syms[(a, a, c)]
        twists.append(tot / qdim[a])
    return twists


def builtin_category(name: str, tolerance: float = DEFAULT_TOLERANCE) -> MTCData:
    """Load one of the bundled categories by name."""
    if name not in _BUNDLED:
        raise CategoryDataError(
            f"unknown builtin category {name!r}; available: {', '.join(_BUNDLED)}"
        )
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        path = Path(override) / f"{name}.json"
    else:
        path = Path(__file__).parent / "data" / f"{name}.json"
    return load_category(path, tolerance=tolerance, name=name)


def bundled_names() -> tuple[str, ...]:
    return _BUNDLED


# ---------------------------------------------------------------- verification


def verify_pentagon(cat: MTCData) -> ConsistencyReport:
    """Check every pentagon instance of the F-symbols.

    Instance convention, with all trees left-parenthesized and F as the
    left-to-right reassociation matrix:
        F[f,c,d,e][g,l] F[a,b,l,e][f,k]
            = sum_h F[a,b,c,g][f,h] F[a,h,d,e][g,k] F[b,c,d,k][h,l]
    """
    n = cat.size
    N = cat.ring.fusion
    worst = 0.0
    checked = 0
    failures: list[str] = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    for e in range(n):
                        for f in range(n):
                            if not N[a, b, f]:
                                continue
                            for g in range(n):
                                if not (N[f, c, g] and N[g, d, e]):
                                    continue
                                for k in range(n):
                                    if not N[a, k, e]:
                                        continue
                                    for l in range(n):
                                        if not N[c, d, l]:
                                            continue
                                        lhs = cat.f_get(f, c, d, e, g, l) * cat.f_get(
                                            a, b, l, e, f, k
                                        )
                                        rhs = 0.0 + 0.0j
                                        for h in range(n):
                                            rhs += (
                                                cat.f_get(a, b, c, g, f, h)
                                                * cat.f_get(a, h, d, e, g, k)
                                                * cat.f_get(b, c, d, k, h, l)
                                            )
                                        resid = abs(lhs - rhs)
                                        checked += 1
                                        if resid > worst:
                                            worst = resid
                                        if resid > cat.tolerance and len(failures) < 20:
                                            failures.append(
                                                f"pentagon({a},{b},{c},{d};e={e},f={f},"
                                                f"g={g},k={k},l={l}): residual {resid:.3e}"
                                            )
    return ConsistencyReport("pentagon", worst <= cat.tolerance, worst, checked, failures)


def verify_hexagon(cat: MTCData) -> ConsistencyReport:
    """Check both hexagon orientations of the R-symbols.

    With the braid acting on splitting vertices as c . v[a,b->c] =
    R[a,b,c] v[b,a->c]:
        R[a,f,d] F[b,c,a,d][f,g]
            = sum_e Finv[a,b,c,d][f,e] R[a,b,e] F[b,a,c,d][e,g] R[a,c,g]
    and the second orientation replaces each R[x,y,z] by 1/R[y,x,z].
    """
    n = cat.size
    N = cat.ring.fusion
    worst = 0.0
    checked = 0
    failures: list[str] = []

    def r_plus(x, y, z):
        return cat.r_symbol(x, y, z)

    def r_minus(x, y, z):
        return 1.0 / cat.r_symbol(y, x, z)

    for orientation, rsym in (("+", r_plus), ("-", r_minus)):
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    for d in range(n):
                        finv = _f_matrix_inverse(cat, a, b, c, d)
                        if finv is None:
                            continue
                        erows, fcols, finv_mat = finv
                        for jf, f in enumerate(fcols):
                            for g in range(n):
                                if not (N[c, a, g] and N[b, g, d]):
                                    continue
                                lhs = (
                                    rsym(a, f, d) * cat.f_get(b, c, a, d, f, g)
                                    if N[a, f, d]
                                    else 0.0
                                )
                                rhs = 0.0 + 0.0j
                                for ie, e in enumerate(erows):
                                    rhs += (
                                        finv_mat[jf, ie]
                                        * rsym(a, b, e)
                                        * cat.f_get(b, a, c, d, e, g)
                                        * rsym(a, c, g)
                                    )
                                resid = abs(lhs - rhs)
                                checked += 1
                                if resid > worst:
                                    worst = resid
                                if resid > cat.tolerance and len(failures) < 20:
                                    failures.append(
                                        f"hexagon{orientation}({a},{b},{c},{d};f={f},"
                                        f"g={g}): residual {resid:.3e}"
                                    )
    return ConsistencyReport("hexagon", worst <= cat.tolerance, worst, checked, failures)


def _f_matrix_inverse(cat: MTCData, a, b, c, d):
    n = cat.size
    N = cat.ring.fusion
    erows = [e for e in range(n) if N[a, b, e] and N[e, c, d]]
    fcols = [f for f in range(n) if N[b, c, f] and N[a, f, d]]
    if not erows or not fcols or len(erows) != len(fcols):
        return None
    mat = np.array(
        [[cat.f_get(a, b, c, d, e, f) for f in fcols] for e in erows], dtype=complex
    )
    try:
        inv = np.linalg.inv(mat)
    except np.linalg.LinAlgError:
        return None
    return erows, fcols, inv


def verify_data_consistency(cat: MTCData) -> ConsistencyReport:
    """Dimension and twist sanity: d(unit)=1, duality symmetry, the product
    rule d(a)d(b) = sum_c N d(c), nonzero global dimension, unit twist, and
    agreement of the stored twists with the ones derived from R."""
    n = cat.size
    d = np.array(cat.qdim)
    worst = 0.0
    failures: list[str] = []
    checked = 0

    def note(resid: float, msg: str):
        nonlocal worst, checked
        checked += 1
        if resid > worst:
            worst = resid
        if resid > max(cat.tolerance, 1e-8) and len(failures) < 20:
            failures.append(msg)

    note(abs(d[UNIT] - 1.0), "d(unit) differs from 1")
    for a in range(n):
        note(abs(d[a] - d[cat.ring.dual[a]]), f"d({a}) differs from d(dual {a})")
    for a in range(n):
        for b in range(n):
            prod = sum(cat.ring.fusion[a, b, c] * d[c] for c in range(n))
            note(abs(d[a] * d[b] - prod), f"d({a})d({b}) violates the fusion product rule")
    note(abs(cat.global_dim - float(np.sum(d**2))), "global dimension is not sum of d^2")
    if cat.global_dim == 0:
        note(1.0, "global dimension is zero")
    note(abs(cat.twist[UNIT] - 1.0), "unit twist differs from 1")
    for a in range(n):
        note(
            abs(abs(cat.twist[a]) - 1.0),
            f"twist of label {a} is not unimodular",
        )
    derived = _twist_from_r(cat.ring, cat.r, cat.qdim)
    for a in range(n):
        note(
            abs(cat.twist[a] - derived[a]),
            f"stored twist of label {a} contradicts the R-symbols",
        )
    passed = worst <= max(cat.tolerance, 1e-8)
    return ConsistencyReport("data_consistency", passed, worst, checked, failures)


# ---------------------------------------------------------------- modular data


def compute_modular_data(cat: MTCData) -> ModularData:
    """S from the double-braiding loop formula, T from the twists.

    S[I,J] = sum_c N[dual(I), J -> c] (theta_c / (theta_I theta_J)) d(c).
    The scalar lam is extracted from (ST)^3 (S^2)^{-1}, which must be a
    scalar matrix for consistent input.
    """
    n = cat.size
    N = cat.ring.fusion
    d = np.array(cat.qdim)
    theta = np.array(cat.twist)
    s = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            tot = 0.0 + 0.0j
            idual = cat.ring.dual[i]
            for c in range(n):
                if N[idual, j, c]:
                    tot += theta[c] * d[c]
            s[i, j] = tot / (theta[i] * theta[j])
    t = np.diag(theta)
    conj = np.zeros((n, n), dtype=int)
    for i in range(n):
        conj[cat.ring.dual[i], i] = 1

    if abs(np.linalg.det(s)) < 1e-12 or np.linalg.cond(s) > 1e12:
        raise SingularSMatrixError(
            "S-matrix is singular; the input data is not modular"
        )
    st3 = np.linalg.matrix_power(s @ t, 3)
    s2 = s @ s
    ratio = st3 @ np.linalg.inv(s2)
    lam = complex(np.trace(ratio) / n)
    if np.abs(ratio - lam * np.eye(n)).max() > max(cat.tolerance * 100, 1e-7):
        raise NonScalarLambdaError(
            "(ST)^3 (S^2)^{-1} is not scalar; category data is corrupt"
        )
    return ModularData(
        s_matrix=s,
        t_matrix=t,
        charge_conj=conj,
        lam=lam,
        global_dim=cat.global_dim,
    )


def verify_modular_relations(md: ModularData, cat: MTCData) -> ConsistencyReport:
    """Entrywise checks of (ST)^3 = lam S^2, S^2 = d(C) C, TC = CT, plus
    S symmetry, the quantum-dimension row, and unimodularity of T."""
    s, t, conj = md.s_matrix, md.t_matrix, md.charge_conj.astype(complex)
    n = s.shape[0]
    d = np.array(cat.qdim)
    worst = 0.0
    failures: list[str] = []
    checked = 0

    def note(resid: float, msg: str):
        nonlocal worst, checked
        checked += 1
        if resid > worst:
            worst = resid
        if resid > cat.tolerance and len(failures) < 20:
            failures.append(f"{msg}: residual {resid:.3e}")

    st3 = np.linalg.matrix_power(s @ t, 3)
    note(float(np.abs(st3 - md.lam * (s @ s)).max()), "(ST)^3 = lambda S^2")
    note(float(np.abs(s @ s - cat.global_dim * conj).max()), "S^2 = d(C) C")
    note(float(np.abs(t @ conj - conj @ t).max()), "TC = CT")
    note(float(np.abs(s - s.T).max()), "S symmetric")
    note(float(np.abs(s[UNIT, :] - d).max()), "S unit row = quantum dimensions")
    note(float(np.abs(np.abs(np.diag(t)) - 1.0).max()), "T unimodular")
    note(float(np.abs(s @ d - cat.global_dim * np.eye(n)[:, UNIT]).max()),
         "S d-column = d(C) unit column")
    return ConsistencyReport(
        "modular_relations", worst <= cat.tolerance, worst, checked, failures
    )


def _matrix_to_json(mat: np.ndarray) -> list:
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(mat, dtype=complex)]
