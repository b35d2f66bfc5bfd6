"""Request models and handlers shared by the HTTP API and the CLI.

Each handler takes a validated request and returns ``(exit_code, report)``
where the report is a plain JSON-serializable dict with deterministic key
order.  Exit codes follow the scripting contract: 0 success, 1 a
mathematical check failed, 2 unreadable or invalid input, 3 search budget
exceeded.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from pydantic import BaseModel, Field

from .category import (
    CategoryDataError,
    ModularData,
    ModularDataError,
    MTCData,
    builtin_category,
    bundled_names,
    compute_modular_data,
    load_category,
    verify_data_consistency,
    verify_hexagon,
    verify_modular_relations,
    verify_pentagon,
)
from .modinv import (
    PartialSearchError,
    brute_force_invariants,
    default_entry_bound,
    enumerate_modular_invariants,
    is_modular_invariant,
    load_modular_data_file,
)
from .reps import (
    build_rep,
    check_modular_invariance,
    check_s_invariance,
    check_t_invariance,
)
from .tube import (
    TubeEngine,
    verify_handle_slides,
    verify_idempotents,
    verify_isotypic_partition,
    verify_twist_invertibility,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_LOAD_ERROR = 2
EXIT_SEARCH_BUDGET = 3

CATEGORY_CHECKS = ("data", "pentagon", "hexagon", "modular")
TUBE_CHECKS = ("idempotents", "isotypic_partition", "handle_slide", "twist_invertibility")
ALL_CHECKS = CATEGORY_CHECKS + TUBE_CHECKS


class LoadFailure(Exception):
    """Wrap any input problem so handlers can map it to exit code 2."""


class VerifyRequest(BaseModel):
    category: str
    tolerance: float = Field(default=1e-9, gt=0.0)
    checks: list[str] | None = None


class ModularDataRequest(BaseModel):
    category: str
    tolerance: float = Field(default=1e-9, gt=0.0)


class EnumerateRequest(BaseModel):
    category: str
    tolerance: float = Field(default=1e-9, gt=0.0)
    entry_bound: int | None = Field(default=None, ge=1)
    brute_force_check: bool = False


class CheckRepRequest(BaseModel):
    category: str
    z: str | list[list[int]] = "identity"
    tolerance: float = Field(default=1e-7, gt=0.0)


class CheckResult(BaseModel):
    check: str
    passed: bool
    max_residual: float
    instances: int
    failures: list[str]


class VerifyReport(BaseModel):
    category: str
    passed: bool
    checks: list[CheckResult]


class ModularDataReport(BaseModel):
    category: str
    labels: list[str]
    s_matrix: list[list[list[float]]]
    t_matrix: list[list[list[float]]]
    lam: list[float]
    global_dim: float
    charge_conj: list[list[int]]


class EnumerateReport(BaseModel):
    category: str
    entry_bound: int
    count: int
    invariants: list[list[list[int]]]
    all_pass_definition: bool
    brute_force_match: bool | None = None


class CheckRepReport(BaseModel):
    category: str
    z: list[list[int]]
    consistent: bool
    invariant: bool
    t_check: dict
    s_check: dict
    combined: dict


class ErrorReport(BaseModel):
    error: str
    detail: str


# ------------------------------------------------------------------ loading


def _looks_like_modular_file(path: Path) -> bool:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        return False
    return isinstance(doc, dict) and "S" in doc and "T" in doc and "fusion" not in doc


def load_source(category: str, tolerance: float, need_category: bool = True):
    """Resolve a --category value to ``(cat | None, md, display_name)``.

    Accepts ``builtin:<name>``, a bare bundled name, a category JSON path,
    or (when a full category is not required) a standalone S/T matrix file.
    """
    try:
        if category.startswith("builtin:"):
            cat = builtin_category(category[len("builtin:"):], tolerance=tolerance)
            return cat, compute_modular_data(cat), category
        if category in bundled_names():
            cat = builtin_category(category, tolerance=tolerance)
            return cat, compute_modular_data(cat), f"builtin:{category}"
        path = Path(category)
        if not path.exists():
            raise LoadFailure(f"category source {category!r} not found")
        if not need_category and _looks_like_modular_file(path):
            return None, load_modular_data_file(path), category
        cat = load_category(path, tolerance=tolerance)
        return cat, compute_modular_data(cat), category
    except LoadFailure:
        raise
    except (CategoryDataError, ModularDataError, OSError, ValueError) as exc:
        raise LoadFailure(str(exc)) from exc


def _error_report(exc: Exception, code: int) -> tuple[int, dict]:
    return code, ErrorReport(error=type(exc).__name__, detail=str(exc)).model_dump()


def _complex_matrix(m: np.ndarray) -> list[list[list[float]]]:
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


# ----------------------------------------------------------------- handlers


def handle_verify(req: VerifyRequest) -> tuple[int, dict]:
    selected = list(req.checks) if req.checks else list(ALL_CHECKS)
    unknown = [c for c in selected if c not in ALL_CHECKS]
    if unknown:
        return _error_report(
            LoadFailure(f"unknown checks {unknown}; available: {', '.join(ALL_CHECKS)}"),
            EXIT_LOAD_ERROR,
        )
    try:
        cat, md, name = load_source(req.category, req.tolerance)
    except LoadFailure as exc:
        return _error_report(exc, EXIT_LOAD_ERROR)

    eng = TubeEngine(cat) if any(c in TUBE_CHECKS for c in selected) else None
    tol = req.tolerance
    results = []
    for check in ALL_CHECKS:
        if check not in selected:
            continue
        if check == "data":
            rep = verify_data_consistency(cat)
        elif check == "pentagon":
            rep = verify_pentagon(cat)
        elif check == "hexagon":
            rep = verify_hexagon(cat)
        elif check == "modular":
            rep = verify_modular_relations(md, cat)
        elif check == "idempotents":
            rep = verify_idempotents(eng, tolerance=max(tol, 1e-8))
        elif check == "isotypic_partition":
            rep = verify_isotypic_partition(eng, tolerance=max(tol, 1e-8))
        elif check == "handle_slide":
            rep = verify_handle_slides(eng, tolerance=max(tol, 1e-8))
        else:
            rep = verify_twist_invertibility(eng, tolerance=max(tol, 1e-8))
        results.append(rep.as_dict())
    passed = all(r["passed"] for r in results)
    report = VerifyReport(
        category=name,
        passed=passed,
        checks=[CheckResult(**r) for r in results],
    ).model_dump()
    return (EXIT_OK if passed else EXIT_CHECK_FAILED), report


def handle_modular_data(req: ModularDataRequest) -> tuple[int, dict]:
    try:
        cat, md, name = load_source(req.category, req.tolerance, need_category=False)
    except LoadFailure as exc:
        return _error_report(exc, EXIT_LOAD_ERROR)
    labels = list(cat.ring.labels) if cat is not None else [
        str(i) for i in range(md.s_matrix.shape[0])
    ]
    report = ModularDataReport(
        category=name,
        labels=labels,
        s_matrix=_complex_matrix(md.s_matrix),
        t_matrix=_complex_matrix(md.t_matrix),
        lam=[float(md.lam.real), float(md.lam.imag)],
        global_dim=float(md.global_dim),
        charge_conj=[[int(v) for v in row] for row in md.charge_conj],
    ).model_dump()
    return EXIT_OK, report


def handle_enumerate(req: EnumerateRequest) -> tuple[int, dict]:
    try:
        _, md, name = load_source(req.category, req.tolerance, need_category=False)
    except LoadFailure as exc:
        return _error_report(exc, EXIT_LOAD_ERROR)
    bound = req.entry_bound if req.entry_bound is not None else default_entry_bound(md)
    try:
        invs = enumerate_modular_invariants(md, entry_bound=bound)
        bf_match = None
        if req.brute_force_check:
            brute = brute_force_invariants(md, entry_bound=bound)
            bf_match = len(brute) == len(invs) and all(
                np.array_equal(a, b) for a, b in zip(invs, brute)
            )
    except PartialSearchError as exc:
        return _error_report(exc, EXIT_SEARCH_BUDGET)
    all_ok = all(is_modular_invariant(z, md)[0] for z in invs)
    report = EnumerateReport(
        category=name,
        entry_bound=bound,
        count=len(invs),
        invariants=[[[int(v) for v in row] for row in z] for z in invs],
        all_pass_definition=all_ok,
        brute_force_match=bf_match,
    ).model_dump()
    code = EXIT_OK if all_ok and bf_match is not False else EXIT_CHECK_FAILED
    return code, report


def parse_z(source, md: ModularData, tolerance: float = 1e-9):
    """Interpret a multiplicity-matrix source: "identity", "enum:<k>",
    "@<path>", an inline JSON array, or an already-parsed list."""
    n = md.s_matrix.shape[0]
    if isinstance(source, str):
        text = source.strip()
        if text == "identity":
            return np.eye(n, dtype=int)
        if text.startswith("enum:"):
            index = int(text[len("enum:"):])
            invs = enumerate_modular_invariants(md)
            if not 0 <= index < len(invs):
                raise LoadFailure(
                    f"enum index {index} out of range; enumeration found {len(invs)}"
                )
            return invs[index]
        if text.startswith("@"):
            try:
                text = Path(text[1:]).read_text(encoding="utf-8")
            except OSError as exc:
                raise LoadFailure(f"cannot read z file: {exc}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise LoadFailure(f"z is not valid JSON: {exc}") from exc
    else:
        data = source
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise LoadFailure(f"z is not a rectangular numeric matrix: {exc}") from exc
    if arr.ndim != 2 or arr.shape != (n, n):
        raise LoadFailure(f"z must be a {n}x{n} matrix for this category")
    rounded = np.rint(arr)
    if np.abs(arr - rounded).max() > tolerance or (rounded < 0).any():
        raise LoadFailure("z must have non-negative integer entries")
    return rounded.astype(int)


def handle_check_rep(req: CheckRepRequest) -> tuple[int, dict]:
    try:
        cat, md, name = load_source(req.category, req.tolerance)
        z = parse_z(req.z, md)
    except LoadFailure as exc:
        return _error_report(exc, EXIT_LOAD_ERROR)
    except PartialSearchError as exc:
        return _error_report(exc, EXIT_SEARCH_BUDGET)
    eng = TubeEngine(cat)
    try:
        rep = build_rep(eng, z)
    except CategoryDataError as exc:
        return _error_report(exc, EXIT_LOAD_ERROR)
    combined = check_modular_invariance(rep, tolerance=req.tolerance)
    t_report = check_t_invariance(rep, tolerance=req.tolerance)
    s_report = check_s_invariance(rep, tolerance=req.tolerance)
    consistent = bool(
        combined.consistent and t_report.consistent and s_report.consistent
    )
    report = CheckRepReport(
        category=name,
        z=[[int(v) for v in row] for row in z],
        consistent=consistent,
        invariant=bool(combined.passed),
        t_check=t_report.to_dict(),
        s_check=s_report.to_dict(),
        combined=combined.to_dict(),
    ).model_dump()
    return (EXIT_OK if consistent else EXIT_CHECK_FAILED), report
