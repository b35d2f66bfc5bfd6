"""Command-line front end.

Thin client over the service handlers: every subcommand builds a request,
invokes the handler in-process, renders the report in the selected format,
and exits with the handler's code (0 success, 1 failed check, 2 bad input,
3 search budget exceeded).  Output is deterministic for a fixed
configuration and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .reps import random_multiplicity
from .service import (
    CheckRepRequest,
    EnumerateRequest,
    EXIT_LOAD_ERROR,
    LoadFailure,
    ModularDataRequest,
    VerifyRequest,
    handle_check_rep,
    handle_enumerate,
    handle_modular_data,
    handle_verify,
    load_source,
)


@dataclass
class RunConfig:
    category: str
    tolerance: float
    entry_bound: int | None
    seed: int
    fmt: str
    z: str
    checks: list[str] | None
    brute_force_check: bool


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tubecat",
        description="Verification, modular data, invariant enumeration, and "
        "representation checks for annular category data.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_entry_bound=False, with_z=False, with_checks=False):
        sp.add_argument(
            "--category",
            required=True,
            help="builtin:<name>, a bundled name, or a path to a JSON data file",
        )
        sp.add_argument("--tolerance", type=float, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        if with_entry_bound:
            sp.add_argument("--entry-bound", type=int, default=None)
        if with_z:
            sp.add_argument(
                "--z",
                default="identity",
                help='"identity", "random", "enum:<k>", "@<file>", or inline JSON',
            )
        if with_checks:
            sp.add_argument(
                "--checks",
                default=None,
                help="comma-separated subset of the verification checks",
            )

    sp = sub.add_parser("verify", help="run consistency checks on a category")
    common(sp, with_checks=True)
    sp = sub.add_parser("modular-data", help="print S, T, lambda, d(C), and C")
    common(sp)
    sp = sub.add_parser("enumerate", help="list bounded modular invariants")
    common(sp, with_entry_bound=True)
    sp.add_argument(
        "--brute-force-check",
        action="store_true",
        help="cross-check the lattice search against exhaustive scan",
    )
    sp = sub.add_parser("check-rep", help="build a representation and test invariance")
    common(sp, with_z=True)
    return p


def _config(args: argparse.Namespace, default_tol: float) -> RunConfig:
    return RunConfig(
        category=args.category,
        tolerance=args.tolerance if args.tolerance is not None else default_tol,
        entry_bound=getattr(args, "entry_bound", None),
        seed=args.seed,
        fmt=args.format,
        z=getattr(args, "z", "identity"),
        checks=(
            [c.strip() for c in args.checks.split(",") if c.strip()]
            if getattr(args, "checks", None)
            else None
        ),
        brute_force_check=getattr(args, "brute_force_check", False),
    )


# ---------------------------------------------------------------- rendering


def _fmt_complex(v: list[float]) -> str:
    return f"{v[0]:+.6f}{v[1]:+.6f}i"


def _render_matrix(rows, fmt) -> list[str]:
    return ["  [" + ", ".join(fmt(v) for v in row) + "]" for row in rows]


def _render(report: dict, command: str) -> str:
    if "error" in report:
        return f"error ({report['error']}): {report['detail']}"
    lines: list[str] = []
    if command == "verify":
        lines.append(f"category: {report['category']}")
        for chk in report["checks"]:
            status = "PASS" if chk["passed"] else "FAIL"
            lines.append(
                f"  {chk['check']:<20s} {status}  max_residual={chk['max_residual']:.3e}"
                f"  instances={chk['instances']}"
            )
            for f in chk["failures"][:8]:
                lines.append(f"      {f}")
        lines.append("result: " + ("PASS" if report["passed"] else "FAIL"))
    elif command == "modular-data":
        lines.append(f"category: {report['category']}")
        lines.append("labels: " + ", ".join(report["labels"]))
        lines.append("S =")
        lines.extend(_render_matrix(report["s_matrix"], _fmt_complex))
        lines.append("T =")
        lines.extend(_render_matrix(report["t_matrix"], _fmt_complex))
        lines.append(f"lambda = {_fmt_complex(report['lam'])}")
        lines.append(f"d(C) = {report['global_dim']:.9f}")
        lines.append("C =")
        lines.extend(_render_matrix(report["charge_conj"], str))
    elif command == "enumerate":
        lines.append(f"category: {report['category']}")
        lines.append(f"entry_bound: {report['entry_bound']}")
        lines.append(f"count: {report['count']}")
        for idx, z in enumerate(report["invariants"]):
            lines.append(f"Z[{idx}] =")
            lines.extend(_render_matrix(z, str))
        lines.append(f"all_pass_definition: {report['all_pass_definition']}")
        if report.get("brute_force_match") is not None:
            lines.append(f"brute_force_match: {report['brute_force_match']}")
    else:
        lines.append(f"category: {report['category']}")
        lines.append("z =")
        lines.extend(_render_matrix(report["z"], str))
        lines.append(f"invariant: {'yes' if report['invariant'] else 'no'}")
        lines.append(f"consistent: {'yes' if report['consistent'] else 'no'}")
        for key in ("t_check", "s_check"):
            chk = report[key]
            lines.append(
                f"{chk['kind']}: commutator={'0' if chk['commutator_zero'] else 'nonzero'}"
                f" generator_check={chk['generator_check']}"
                f" trace_check={chk['trace_check']} passed={chk['passed']}"
            )
            for rk, rv in chk["residuals"].items():
                lines.append(f"    {rk}: {rv:.3e}")
            for note in chk["details"]:
                lines.append(f"    {note}")
    return "\n".join(lines)


def _emit(code: int, report: dict, cfg: RunConfig, command: str) -> int:
    if cfg.fmt == "json":
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(_render(report, command) + "\n")
    return code


# -------------------------------------------------------------- subcommands


def cmd_verify(cfg: RunConfig) -> int:
    req = VerifyRequest(category=cfg.category, tolerance=cfg.tolerance, checks=cfg.checks)
    return _emit(*handle_verify(req), cfg, "verify")


def cmd_modular_data(cfg: RunConfig) -> int:
    req = ModularDataRequest(category=cfg.category, tolerance=cfg.tolerance)
    return _emit(*handle_modular_data(req), cfg, "modular-data")


def cmd_enumerate(cfg: RunConfig) -> int:
    req = EnumerateRequest(
        category=cfg.category,
        tolerance=cfg.tolerance,
        entry_bound=cfg.entry_bound,
        brute_force_check=cfg.brute_force_check,
    )
    return _emit(*handle_enumerate(req), cfg, "enumerate")


def cmd_check_rep(cfg: RunConfig) -> int:
    z = cfg.z
    if isinstance(z, str) and z.strip() == "random":
        try:
            _, md, _ = load_source(cfg.category, cfg.tolerance)
        except LoadFailure as exc:
            report = {"error": type(exc).__name__, "detail": str(exc)}
            return _emit(EXIT_LOAD_ERROR, report, cfg, "check-rep")
        rng = np.random.default_rng(cfg.seed)
        n = md.s_matrix.shape[0]
        z = [[int(v) for v in row] for row in random_multiplicity(rng, n)]
    req = CheckRepRequest(category=cfg.category, z=z, tolerance=cfg.tolerance)
    return _emit(*handle_check_rep(req), cfg, "check-rep")


_DEFAULT_TOL = {"verify": 1e-9, "modular-data": 1e-9, "enumerate": 1e-9, "check-rep": 1e-7}
_DISPATCH = {
    "verify": cmd_verify,
    "modular-data": cmd_modular_data,
    "enumerate": cmd_enumerate,
    "check-rep": cmd_check_rep,
}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    cfg = _config(args, _DEFAULT_TOL[args.command])
    return _DISPATCH[args.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
