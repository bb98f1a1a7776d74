"""Command-line interface.

Every sweepable flag accepts a scalar, a list ``a,b,c`` or an inclusive
range ``a:b:step`` (mixtures such as ``1,5:9:2`` are allowed).  One row is
produced per point of the Cartesian product, in the order the flags are
declared for the subcommand.

Exit codes: 0 success, 1 input / domain / solver errors, 2 when
``validate`` finds a residual above its threshold.
"""

from __future__ import annotations

import argparse
import itertools
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__
from . import asymptotics as asy
from . import equivalence as eqv
from . import thermo
from .errors import (
    ConvergenceError,
    DomainError,
    EnumerationCapError,
    GentileLabError,
    InfeasibleError,
)
from .partition_core import PartitionConstraint, count
from .report import ExactInt, ReportDocument

MAX_ROWS = 100_000
EXIT_OK, EXIT_ERROR, EXIT_VALIDATION = 0, 1, 2


class InputError(GentileLabError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise InputError(message)


# ---------------------------------------------------------------------------
# Value grammar
# ---------------------------------------------------------------------------


def _to_decimal(text: str) -> Decimal:
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise InputError(f"not a number: {text!r}") from None
    if not value.is_finite():
        raise InputError(f"not a finite number: {text!r}")
    return value


def _expand_item(item: str, kind: str) -> List[Any]:
    low = item.strip().lower()
    if kind.endswith("|inf") and low in ("inf", "infinity"):
        return [math.inf]
    if kind.endswith("|auto") and low == "auto":
        return ["auto"]
    if kind.endswith("|none") and low == "none":
        return [None]
    parts = item.split(":")
    if len(parts) == 1:
        values = [_to_decimal(item)]
    elif len(parts) == 3:
        a, b, step = (_to_decimal(p) for p in parts)
        if step == 0:
            raise InputError(f"zero step in range {item!r}")
        n_points = int((b - a) / step) + 1
        if n_points <= 0:
            raise InputError(f"empty range {item!r}")
        if n_points > MAX_ROWS:
            raise InputError(f"range {item!r} has more than {MAX_ROWS} points")
        values = [a + i * step for i in range(n_points)]
    else:
        raise InputError(f"malformed value {item!r} (expected x, a,b,c or a:b:step)")
    base = kind.split("|")[0]
    if base == "int":
        out = []
        for v in values:
            if v != v.to_integral_value():
                raise InputError(f"expected an integer, got {v}")
            out.append(int(v))
        return out
    return [float(v) for v in values]


def parse_values(text: str, kind: str) -> List[Any]:
    """Expand a flag value into its list of points."""
    items = [t for t in text.split(",")]
    if any(t.strip() == "" for t in items):
        raise InputError(f"empty item in {text!r}")
    values: List[Any] = []
    for item in items:
        values.extend(_expand_item(item.strip(), kind))
    if not values:
        raise InputError(f"no values in {text!r}")
    return values


# ---------------------------------------------------------------------------
# Subcommand definitions: (flag, dest, kind, default, help)
# ---------------------------------------------------------------------------

SWEEP_FLAGS: Dict[str, List[Tuple[str, str, str, Optional[str], str]]] = {
    "count": [
        ("--n", "n", "int", None, "integer to partition"),
        ("--max-parts", "max_parts", "int|none", "none", "at most this many parts"),
        ("--max-mult", "max_mult", "int|none", "none", "no part repeated more than this"),
        ("--s", "s", "int", "1", "parts are s-th powers"),
    ],
    "asympt": [
        ("--n", "n", "float", None, "energy / integer n"),
        ("--N", "N", "float|none", "none", "particle-number cap (fin, entropy)"),
        ("--M", "M", "float|inf", "inf", "occupation cap (frac)"),
        ("--s", "s", "float", "1", "spectrum exponent"),
        ("--beta", "beta", "float|none", "none", "inverse temperature (entropy)"),
    ],
    "thermo": [
        ("--N", "N", "float", None, "particle number"),
        ("--T", "T", "float", None, "temperature"),
        ("--M", "M", "float|inf", "inf", "occupation cap"),
        ("--s", "s", "float", "1", "spectrum exponent"),
    ],
    "equiv": [
        ("--n", "n", "int", None, "integer n (energy in level units)"),
        ("--cap-n", "cap_n", "int|auto", "auto", "particle number N; auto = ceil(2 sqrt(n))"),
        ("--s", "s", "int", "1", "spectrum exponent"),
    ],
}
SWEEP_FLAGS["validate"] = SWEEP_FLAGS["equiv"]

COLUMNS: Dict[str, List[str]] = {
    "count": ["n", "s", "max_parts", "max_multiplicity", "exact", "log"],
    "asympt": ["formula", "n", "s", "N", "M", "beta", "log_value", "beta0"],
    "thermo": [
        "mode", "N", "T", "M", "s", "fugacity", "log_partition",
        "energy", "delta_energy", "delta_fugacity", "reference",
    ],
    "equiv": [
        "n", "N", "s", "route", "T", "mapped_m", "log_mapped_m", "m_micro", "m_grand",
        "m_used", "rounding_delta", "m_clamped", "s_fin", "s_frac", "residual",
        "relative_residual", "s_fin_asymptotic", "s_frac_asymptotic",
        "relative_residual_asymptotic", "best_m_exact",
    ],
}
COLUMNS["validate"] = COLUMNS["equiv"] + ["threshold", "passed"]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gentile-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gentile-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    helps = {
        "count": "exact restricted-partition counts",
        "asympt": "asymptotic microstate formulas (log space)",
        "thermo": "ensemble thermodynamics",
        "equiv": "N <-> M equivalence report",
        "validate": "equivalence report gated by a residual threshold",
    }
    for name, flags in SWEEP_FLAGS.items():
        p = sub.add_parser(name, help=helps[name])
        for flag, dest, kind, default, text in flags:
            p.add_argument(flag, dest=dest, required=default is None, default=default, help=text)
        if name == "asympt":
            p.add_argument(
                "--formula", required=True,
                choices=["hr", "micro", "fin", "frac", "saddle", "entropy"],
            )
            p.add_argument(
                "--paper-literal-eq5", action="store_true",
                help="frac: use the literal (1 - 1/sqrt(M))**(1/2) factor (s = 1 only)",
            )
        if name == "thermo":
            p.add_argument(
                "--mode", required=True,
                choices=["canonical", "grand", "micro", "delta-gentile"],
            )
        if name in ("equiv", "validate"):
            p.add_argument("--route", choices=eqv.ROUTES, default="exact")
            p.add_argument("--m-cap", type=float, default=eqv.DEFAULT_M_CAP)
            p.add_argument("--no-best-m", action="store_true", help="skip the best-M diagnostic scan")
        if name == "validate":
            p.add_argument("--threshold", type=float, default=0.05)
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--output", default=None, help="output file (default: stdout)")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    return parser


# ---------------------------------------------------------------------------
# Row evaluators (module level so they pickle for --jobs)
# ---------------------------------------------------------------------------


def _row_count(p: Dict[str, Any]) -> Tuple[Dict[str, Any], List[str]]:
    result = count(PartitionConstraint(p["n"], p["max_parts"], p["max_mult"], p["s"]))
    row = {
        "n": p["n"], "s": p["s"], "max_parts": p["max_parts"],
        "max_multiplicity": p["max_mult"],
        "exact": ExactInt(result.exact), "log": result.log_value,
    }
    return row, []


def _row_asympt(p: Dict[str, Any]) -> Tuple[Dict[str, Any], List[str]]:
    model = asy.SpectrumModel(p["s"])
    formula, n = p["formula"], p["n"]
    notes: List[str] = []
    if formula == "hr":
        value = asy.log_hardy_ramanujan(n)
    elif formula == "micro":
        value = asy.log_microstates(n, model)
    elif formula == "fin":
        if p["N"] is None:
            raise InputError("--formula fin requires --N")
        value = asy.log_gamma_fin(n, p["N"], model)
    elif formula == "frac":
        value = asy.log_gamma_frac(n, p["M"], model, paper_literal=p["paper_literal"])
        if p["paper_literal"]:
            notes.append("literal-eq5 factor (1 - 1/sqrt(M))**(1/2) used")
    elif formula == "saddle":
        value = asy.entropy_beta(asy.saddle_point(n, model).beta0, n, model)
    else:
        if p["beta"] is None:
            raise InputError("--formula entropy requires --beta")
        value = asy.entropy_beta(p["beta"], n, model, p["N"])
    row = {
        "formula": formula, "n": n, "s": p["s"], "N": p["N"], "M": p["M"],
        "beta": p["beta"], "log_value": value,
        "beta0": asy.saddle_point(n, model).beta0,
    }
    return row, notes


def _row_thermo(p: Dict[str, Any]) -> Tuple[Dict[str, Any], List[str]]:
    mode, N, T, M, s = p["mode"], p["N"], p["T"], p["M"], p["s"]
    model = asy.SpectrumModel(s)
    row: Dict[str, Any] = {"mode": mode, "N": N, "T": T, "M": M, "s": s}
    if mode == "canonical":
        if s != 1.0:
            raise InputError("canonical mode is defined for the oscillator spectrum (s = 1)")
        if N != int(N):
            raise InputError("canonical mode requires an integer --N")
        n_int = int(N)
        row.update(
            M=None,
            log_partition=thermo.canonical_log_partition(n_int, T),
            energy=thermo.canonical_energy(n_int, T),
            delta_energy=thermo.energy_delta_finite(n_int, T),
            reference=thermo.energy_delta_finite_leading(n_int, T),
        )
    elif mode == "grand":
        state = thermo.solve_fugacity(N, T, M, model)
        row.update(fugacity=state.fugacity, energy=state.energy)
    elif mode == "micro":
        row.update(N=None, M=None, energy=thermo.microcanonical_energy(T, model))
    else:
        if math.isinf(M):
            raise InputError("delta-gentile mode requires a finite --M")
        gent = thermo.solve_fugacity(N, T, M, model)
        bose = thermo.solve_fugacity(N, T, thermo.INF, model)
        row.update(
            fugacity=gent.fugacity, energy=gent.energy,
            delta_energy=gent.energy - bose.energy,
            delta_fugacity=gent.fugacity - bose.fugacity,
            reference=1.0 / M,
        )
    return row, []


def _row_equiv(p: Dict[str, Any]) -> Tuple[Dict[str, Any], List[str]]:
    n = p["n"]
    N = p["cap_n"]
    if N == "auto":
        N = int(math.ceil(2.0 * math.sqrt(n)))
    rep = eqv.validate_equivalence(
        n, N, p["s"], p["route"], m_cap=p["m_cap"], scan_best_m=not p["no_best_m"]
    )
    row: Dict[str, Any] = {
        "n": rep.n, "N": rep.N, "s": rep.s, "route": rep.route, "T": rep.temperature,
        "mapped_m": rep.mapped_m, "log_mapped_m": rep.log_mapped_m,
        "m_used": rep.m_used, "rounding_delta": rep.rounding_delta,
        "m_clamped": rep.m_clamped, "s_fin": rep.s_fin, "s_frac": rep.s_frac,
        "residual": rep.residual, "relative_residual": rep.relative_residual,
        "s_fin_asymptotic": rep.asymptotic.s_fin,
        "s_frac_asymptotic": rep.asymptotic.s_frac,
        "relative_residual_asymptotic": rep.asymptotic.relative_residual,
        "best_m_exact": rep.best_m_exact,
    }
    if rep.s == 1:
        row["m_micro"] = eqv.map_m_micro(n, N)
        row["m_grand"] = eqv.map_m_grand(N, rep.temperature)
    if "threshold" in p:
        row["threshold"] = p["threshold"]
        row["passed"] = rep.relative_residual <= p["threshold"]
    notes = [f"n={n}, N={N}: {msg}" for msg in rep.notes]
    return row, notes


ROW_FUNCS: Dict[str, Callable] = {
    "count": _row_count,
    "asympt": _row_asympt,
    "thermo": _row_thermo,
    "equiv": _row_equiv,
    "validate": _row_equiv,
}


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------


def _grid(command: str, args: argparse.Namespace) -> Tuple[List[Dict[str, Any]], Dict[str, Any]]:
    axes = []
    echo: Dict[str, Any] = {}
    for flag, dest, kind, _default, _help in SWEEP_FLAGS[command]:
        raw = getattr(args, dest)
        echo[dest] = raw
        axes.append((dest, parse_values(str(raw), kind)))
    total = 1
    for _, values in axes:
        total *= len(values)
    if total > MAX_ROWS:
        raise InputError(f"sweep has {total} rows, above the cap of {MAX_ROWS}")
    fixed = {
        k: v for k, v in vars(args).items()
        if k not in echo and k not in ("command", "format", "output", "jobs")
    }
    echo.update(fixed)
    points = []
    for combo in itertools.product(*(values for _, values in axes)):
        point = dict(zip((d for d, _ in axes), combo))
        point.update(fixed)
        if command == "asympt":
            point["paper_literal"] = fixed["paper_literal_eq5"]
        points.append(point)
    return points, echo


def run(argv: Optional[Sequence[str]] = None) -> Tuple[Optional[ReportDocument], int]:
    """Execute one invocation and return ``(document, exit_code)``.

    The document is also written to ``--output`` (or stdout); diagnostics
    go to stderr with an ``input error:``, ``domain error:``,
    ``infeasible:`` or ``solver error:`` prefix.
    """
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        if args.jobs < 1:
            raise InputError("--jobs must be at least 1")
        points, echo = _grid(command, args)
        func = ROW_FUNCS[command]
        if args.jobs > 1 and len(points) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(func, points))
        else:
            results = [func(p) for p in points]
    except InputError as exc:
        return _fail("input error", exc)
    except DomainError as exc:
        return _fail("domain error", exc)
    except (EnumerationCapError, InfeasibleError) as exc:
        return _fail("infeasible", exc)
    except ConvergenceError as exc:
        return _fail("solver error", exc)

    doc = ReportDocument(
        columns=COLUMNS[command],
        metadata={
            "tool": "gentile-lab",
            "version": __version__,
            "subcommand": command,
            "parameters": echo,
        },
    )
    for row, notes in results:
        doc.rows.append(row)
        doc.notes.extend(notes)

    code = EXIT_OK
    if command == "validate" and not all(r["passed"] for r in doc.rows):
        failed = sum(1 for r in doc.rows if not r["passed"])
        doc.notes.append(f"{failed} of {len(doc.rows)} rows exceed threshold {args.threshold:g}")
        code = EXIT_VALIDATION

    text = doc.render(args.format)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)
    if code == EXIT_VALIDATION:
        print(f"validation failed: {doc.notes[-1]}", file=sys.stderr)
    return doc, code


def _fail(prefix: str, exc: Exception) -> Tuple[None, int]:
    print(f"{prefix}: {exc}", file=sys.stderr)
    return None, EXIT_ERROR


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        return run(argv)[1]
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)


if __name__ == "__main__":
    raise SystemExit(main())
