"""Command-line interface.

Subcommands:

    compute           C, T or H for the Laplace or Student-t family
    reproduce-remark  the worked Student-t values for y = 1, 2, 3 and two ledgers
    audit             numeric remainder-bound audit
    verify            Monte-Carlo battery against the closed forms

Exit codes: 0 success, 1 numerical failure, 2 usage error, 3 audit or
verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from typing import Any, Sequence, Union

from . import __version__
from .errors import ConvergenceError, DomainError
from .laplace import LaplaceParams, laplace_C, laplace_H, laplace_T, Y_ONE_TOL
from .lemma_audit import PRESETS, run_audit, summarize
from .mc_oracle import SEED_MAX, estimate_laplace_T, estimate_t_central
from .special_functions import t_central_tail
from .tinf import (
    LIMIT,
    ThresholdY,
    constants_ledger,
    theorem_C,
    theorem_H,
    theorem_T,
    threshold,
)

TOOL_VERSION = f"infconc {__version__}"

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_USAGE = 2
EXIT_CHECK = 3

MIN_VERIFY_N = 10_000
DEFAULT_SEED = 20240917
BAND = 4.0


class UsageError(Exception):
    pass


# --- records and rendering -------------------------------------------------

@dataclass(frozen=True)
class OutputRecord:
    family: str
    function: str
    y: float
    value: float
    attained_at: Union[int, str, None]
    branch: str
    search_bound: int | None
    tool_version: str = TOOL_VERSION

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "OutputRecord":
        names = {f.name for f in fields(cls)}
        if set(d) != names:
            raise ValueError(f"record keys {sorted(d)} do not match {sorted(names)}")
        return cls(**d)


def _json_value(x: Any) -> str:
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot render non-finite float {x!r} as JSON")
        text = format(x, ".17g")
        # keep floats recognisable as floats after parsing
        if not any(c in text for c in ".eE"):
            text += ".0"
        return text
    if isinstance(x, int):
        return str(x)
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        items = (f"{json.dumps(str(k))}: {_json_value(x[k])}" for k in sorted(x))
        return "{" + ", ".join(items) + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in x) + "]"
    raise TypeError(f"cannot render {type(x).__name__} as JSON")


def render_json(obj: Any) -> str:
    """Sorted-key JSON with every float written to 17 significant digits."""
    return _json_value(obj)


def parse_record(text: str) -> OutputRecord:
    return OutputRecord.from_dict(json.loads(text))


def _cell(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, dict):
        return ";".join(f"{k}={_cell(x[k])}" for k in sorted(x))
    return str(x)


def render_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(c) for c in r])
    return buf.getvalue()


def _short(x: Any) -> str:
    if isinstance(x, float):
        return format(x, ".10g")
    if x is None:
        return "-"
    if isinstance(x, dict):
        return ",".join(f"{k}={_short(x[k])}" for k in sorted(x))
    return str(x)


def render_table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [list(header)] + [[_short(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# --- argument types ----------------------------------------------------------

def _y_arg(text: str) -> ThresholdY:
    try:
        t = ThresholdY.parse(text)
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(f"invalid y {text!r}: {exc}") from None
    return t


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {n}")
    return n


def _seed_arg(text: str) -> int:
    try:
        s = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= s <= SEED_MAX:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {s}")
    return s


def _v_max_arg(text: str) -> int:
    n = _positive_int(text)
    if n < 3:
        raise argparse.ArgumentTypeError(f"--v-max-override must be >= 3, got {n}")
    return n


# --- compute -----------------------------------------------------------------

def compute_record(family: str, fn: str, y: ThresholdY, threads: int = 1,
                   v_max: int | None = None) -> OutputRecord:
    if family == "laplace":
        return _laplace_record(fn, y)
    if fn == "C":
        return OutputRecord("student-t", "C", y.y, theorem_C(y.y), 3, "any y>0", None)
    res = (theorem_T if fn == "T" else theorem_H)(y, threads=threads, v_max=v_max)
    return OutputRecord("student-t", fn, y.y, res.value, res.attained_at,
                        res.branch.value, res.search_bound)


def _laplace_record(fn: str, y: ThresholdY) -> OutputRecord:
    if fn == "C":
        at_one = abs(y.y - 1.0) <= Y_ONE_TOL
        # C(1) = 1/2 holds for every (mu, b); for y != 1 zero is only approached
        return OutputRecord("laplace", "C", y.y, laplace_C(y.y), None if at_one else LIMIT,
                            "y=1" if at_one else "y!=1", None)
    value = laplace_T(y.y) if fn == "T" else laplace_H(y.y)
    return OutputRecord("laplace", fn, y.y, value, None, "closed-form", None)


def cmd_compute(args: argparse.Namespace) -> int:
    if args.v_max_override is not None:
        print(
            f"warning: scanning to v = {args.v_max_override} instead of the proven bound; "
            "results carry no guarantee",
            file=sys.stderr,
        )
    rec = compute_record(args.family, args.fn, args.y, args.threads, args.v_max_override)
    if rec.search_bound is not None and rec.attained_at == rec.search_bound:
        print("note: minimum attained at the scan bound", file=sys.stderr)
    if args.format == "json":
        _emit(render_json(rec.as_dict()))
    elif args.format == "csv":
        d = rec.as_dict()
        _emit(render_csv(list(d), [list(d.values())]))
    else:
        d = rec.as_dict()
        _emit(render_table(["field", "value"], [[k, d[k]] for k in d]))
    return EXIT_OK


# --- reproduce-remark --------------------------------------------------------

# (y, function, reported value, reported argmin, tolerance)
REMARK_VALUES = [
    (1, "T", 0.6826, LIMIT, 5e-5),
    (1, "H", 0.1817, 3, 5e-5),
    (2, "T", 0.9501, 7, 5e-5),
    (2, "H", 0.0405, 3, 5e-5),
    (3, "T", 0.986153, 3, 5e-7),
    (3, "H", 0.002700, LIMIT, 5e-7),
]

REMARK_LEDGERS = {
    2: {"C1": 140.0, "C2": 1085.82, "C3": 2323.97, "V1": 100.0, "V2": 100.0,
        "V3": 100.0, "v0": 4648.94},
    3: {"C1": 1518.75, "C2": 18295.97, "C3": 37115.94, "V1": 100.0, "V2": 121.5,
        "V3": 121.5, "v0": 12372.98},
}
LEDGER_TOL = 0.01

REMARK_HEADER = ["kind", "y", "quantity", "computed", "reported", "abs_diff", "tolerance",
                 "within_tol", "attained_at", "reported_attained_at", "search_bound"]


def reproduce_remark(threads: int = 1) -> list[dict]:
    rows = []
    for y, fn, reported, at, tol in REMARK_VALUES:
        rec = compute_record("student-t", fn, ThresholdY(float(y)), threads)
        diff = abs(rec.value - reported)
        rows.append({
            "kind": "value", "y": float(y), "quantity": fn, "computed": rec.value,
            "reported": reported, "abs_diff": diff, "tolerance": tol,
            "within_tol": diff <= tol and rec.attained_at == at,
            "attained_at": rec.attained_at, "reported_attained_at": at,
            "search_bound": rec.search_bound,
        })
    for y, reported in REMARK_LEDGERS.items():
        led = constants_ledger(float(y)).as_dict()
        for name, rv in reported.items():
            diff = abs(led[name] - rv)
            rows.append({
                "kind": "ledger", "y": float(y), "quantity": name, "computed": led[name],
                "reported": rv, "abs_diff": diff, "tolerance": LEDGER_TOL,
                "within_tol": diff <= LEDGER_TOL, "attained_at": None,
                "reported_attained_at": None, "search_bound": None,
            })
    return rows


def cmd_reproduce_remark(args: argparse.Namespace) -> int:
    rows = reproduce_remark(args.threads)
    if args.format == "json":
        _emit(render_json({"rows": rows, "tool_version": TOOL_VERSION}))
    else:
        body = [[r[k] for k in REMARK_HEADER] for r in rows]
        _emit((render_csv if args.format == "csv" else render_table)(REMARK_HEADER, body))
    return EXIT_OK


# --- audit -------------------------------------------------------------------

AUDIT_HEADER = ["lemma", "point", "bound", "measured", "slack", "pass"]


def cmd_audit(args: argparse.Namespace) -> int:
    report = run_audit(args.preset, threads=args.threads)
    if args.format == "json":
        d = report.as_dict()
        d["preset"] = args.preset
        d["tool_version"] = TOOL_VERSION
        _emit(render_json(d))
    elif args.format == "csv":
        rows = [[c.lemma, dict(c.point), c.bound, c.measured, c.slack, c.passed] for c in report.checks]
        _emit(render_csv(AUDIT_HEADER, rows))
    else:
        rows = [[lemma, n, ok, ratio] for lemma, (n, ok, ratio) in summarize(report).items()]
        out = render_table(["lemma", "checks", "passed", "min slack ratio"], rows)
        for c in report.failures:
            out += f"FAIL {c.lemma} at {_short(c.point)}: measured {c.measured:.6g} bound {c.bound:.6g}\n"
        out += f"all_pass: {str(report.all_pass).lower()}\n"
        _emit(out)
    return EXIT_OK if report.all_pass else EXIT_CHECK


# --- verify ------------------------------------------------------------------

LAPLACE_BATTERY = [(mu, b, y) for mu, b in ((0.0, 1.0), (2.0, 3.0), (-1.0, 0.5))
                   for y in (0.5, 1.0, 2.0)]
T_BATTERY = [(3, 1.0), (7, 2.0), (3, 2.0), (5, 1.5), (3, 3.0)]

VERIFY_HEADER = ["scenario", "target", "p_hat", "std_err", "z", "pass", "n", "seed", "algorithm"]


def verify_battery(seed: int, n: int, threads: int = 1) -> list[dict]:
    rows = []
    k = 0
    for mu, b, y in LAPLACE_BATTERY:
        s = (seed + k) & SEED_MAX
        est = estimate_laplace_T(LaplaceParams(mu, b), y, n, s, threads)
        rows.append(_verify_row(f"laplace mu={mu:g} b={b:g} y={y:g}", laplace_T(y), est))
        k += 1
    for v, y in T_BATTERY:
        s = (seed + k) & SEED_MAX
        est = estimate_t_central(v, threshold(v, y), n, s, threads)
        target = t_central_tail(v, threshold(v, y))[0]
        rows.append(_verify_row(f"student-t v={v} y={y:g}", target, est))
        k += 1
    return rows


def _verify_row(name: str, target: float, est) -> dict:
    diff = est.p_hat - target
    z = diff / est.std_err if est.std_err > 0 else (0.0 if diff == 0 else math.copysign(math.inf, diff))
    return {
        "scenario": name, "target": target, "p_hat": est.p_hat, "std_err": est.std_err,
        "z": z, "pass": est.within(target, BAND), "n": est.n, "seed": est.seed,
        "algorithm": est.algorithm,
    }


def cmd_verify(args: argparse.Namespace) -> int:
    if args.n < MIN_VERIFY_N:
        raise UsageError(f"--n must be at least {MIN_VERIFY_N}, got {args.n}")
    rows = verify_battery(args.seed, args.n, args.threads)
    ok = all(r["pass"] for r in rows)
    if args.format == "json":
        _emit(render_json({"all_pass": ok, "band_std_errs": BAND, "rows": rows,
                           "tool_version": TOOL_VERSION}))
    else:
        body = [[r[k] for k in VERIFY_HEADER] for r in rows]
        if args.format == "csv":
            _emit(render_csv(VERIFY_HEADER, body))
        else:
            _emit(render_table(VERIFY_HEADER[:-1], [r[:-1] for r in body])
                  + f"all_pass: {str(ok).lower()}\n")
    return EXIT_OK if ok else EXIT_CHECK


# --- entry point -------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="infconc", description="Infimum concentration functions for the "
                "Laplace and Student-t families.")
    p.add_argument("--version", action="version", version=TOOL_VERSION)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, threads=True):
        sp.add_argument("--format", choices=("table", "json", "csv"), default="table")
        if threads:
            sp.add_argument("--threads", type=_positive_int, default=1,
                            help="worker threads; never changes results")

    c = sub.add_parser("compute", help="evaluate C, T or H")
    c.add_argument("--family", choices=("laplace", "student-t"), required=True)
    c.add_argument("--fn", choices=("C", "T", "H"), required=True)
    c.add_argument("--y", type=_y_arg, required=True, help="decimal y > 0 or the literal sqrt3")
    c.add_argument("--v-max-override", type=_v_max_arg, default=None,
                   help="scan Student-t degrees of freedom up to this bound instead")
    common(c)
    c.set_defaults(func=cmd_compute)

    r = sub.add_parser("reproduce-remark", help="worked values for y = 1, 2, 3")
    common(r)
    r.set_defaults(func=cmd_reproduce_remark)

    a = sub.add_parser("audit", help="check remainder bounds on a grid")
    a.add_argument("--preset", choices=tuple(PRESETS), default="quick")
    common(a)
    a.set_defaults(func=cmd_audit)

    v = sub.add_parser("verify", help="Monte-Carlo battery against closed forms")
    v.add_argument("--seed", type=_seed_arg, default=DEFAULT_SEED)
    v.add_argument("--n", type=_positive_int, default=1_000_000)
    common(v)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help and --version exit 0; every parse error is a usage error
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"infconc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"infconc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, ArithmeticError) as exc:
        print(f"infconc: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except Exception as exc:  # keep the exit-code contract for anything unforeseen
        print(f"infconc: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
