"""Command-line front end.

Subcommands: ``gen``, ``analyze``, ``curve``, ``optimize``, ``verify``.

Exit codes: 0 ok, 2 bad argument, 3 I/O failure, 4 degenerate scheme
(``q_max = 0``), 5 bound violation, 6 infeasible optimization.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import asdict, dataclass

from .attack import guess_probability, helstrom_decomposition, overlap_report, build_attack
from .errors import (
    BoundViolation,
    NoFeasiblePoint,
    NormalizationError,
    ParseError,
    QmaxOutOfRange,
    QmaxZero,
    QOutOfRange,
    QsealError,
)
from .fidelity import average_fidelity, fbar_at_a, fbar_minmax
from .optimizer import BOUND_TOL, maximize_fidelity, verify_bound
from .seal import (
    SealScheme,
    analyze_scheme,
    dumps_scheme,
    is_stringent_pair,
    load_scheme,
    make_product_scheme,
    make_stringent_scheme,
)

EXIT_OK = 0
EXIT_BAD_ARG = 2
EXIT_IO = 3
EXIT_DEGENERATE = 4
EXIT_BOUND = 5
EXIT_INFEASIBLE = 6

CSV_HEADER = ("q", "guess_pr", "fbar_sim", "fbar_closed", "detection_bound")
BUILTIN = {"stringent": make_stringent_scheme, "product": make_product_scheme}
Q_SLACK = 1e-12


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def fmt(x) -> str:
    """15 significant digits; ``-0`` printed as ``0``."""
    if x is None:
        return "null"
    s = f"{float(x):.15g}"
    return "0" if s == "-0" else s


@dataclass(frozen=True)
class TradeoffPoint:
    q: float
    guess_pr: float
    fbar_sim: float
    fbar_closed: float
    detection_bound: float


def _prepare(s: SealScheme):
    an = analyze_scheme(s)
    try:
        d = helstrom_decomposition(an.rho0, an.rho1)
    except QmaxZero:
        raise CliError("scheme has q_max = 0: both reduced states coincide", EXIT_DEGENERATE)
    return an, d


def _r15(x: float) -> float:
    return float(fmt(x))


def tradeoff_point(s: SealScheme, q: float, prepared=None) -> TradeoffPoint:
    """Attack statistics at ``q``, rounded to the 15 digits the reports carry."""
    an, d = prepared or _prepare(s)
    attack = build_attack(d, q, an.q_max)
    a = overlap_report(s, d).a
    a = min(max(a, an.q_max), 1.0)
    f = _r15(average_fidelity(s, attack))
    return TradeoffPoint(q, _r15(guess_probability(s, attack)), f,
                         _r15(fbar_at_a(a, q, an.q_max)), 1.0 - f)


def tradeoff_curve(s: SealScheme, steps: int) -> list[TradeoffPoint]:
    prepared = _prepare(s)
    q_max = prepared[0].q_max
    return [tradeoff_point(s, q_max * t / steps, prepared) for t in range(1, steps + 1)]


def curve_csv(points) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_HEADER) + "\n")
    for p in points:
        buf.write(",".join(fmt(getattr(p, name)) for name in CSV_HEADER) + "\n")
    return buf.getvalue()


# -- helpers ----------------------------------------------------------------

def _scheme_from_args(args) -> SealScheme:
    if getattr(args, "scheme", None):
        try:
            return load_scheme(args.scheme)
        except OSError as exc:
            raise CliError(f"cannot read {args.scheme}: {exc.strerror or exc}", EXIT_IO)
        except (ParseError, NormalizationError) as exc:
            raise CliError(f"{args.scheme}: {exc}", EXIT_BAD_ARG)
    if args.qmax is None:
        raise CliError("give a scheme file or --qmax for a built-in scheme", EXIT_BAD_ARG)
    try:
        return BUILTIN[args.type](args.qmax)
    except QmaxOutOfRange as exc:
        raise CliError(str(exc), EXIT_BAD_ARG)


def _write(text: str, path):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}", EXIT_IO)


def _check_q(q: float, q_max: float) -> float:
    if q < 0.0 or q > q_max + Q_SLACK:
        raise CliError(f"q = {q} outside [0, q_max = {fmt(q_max)}]", EXIT_BAD_ARG)
    return min(q, q_max)


def _emit(fields: dict, as_json: bool):
    if as_json:
        doc = {k: (v if isinstance(v, (bool, int, str)) or v is None else float(fmt(v)))
               for k, v in fields.items()}
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        width = max(len(k) for k in fields)
        for k, v in fields.items():
            if isinstance(v, bool):
                v = str(v).lower()
            elif not isinstance(v, (int, str)):
                v = fmt(v)
            sys.stdout.write(f"{k:<{width}}  {v}\n")


# -- subcommands --------------------------------------------------------------

def cmd_gen(args) -> int:
    try:
        s = BUILTIN[args.type](args.qmax)
    except QmaxOutOfRange as exc:
        raise CliError(str(exc), EXIT_BAD_ARG)
    _write(dumps_scheme(s), args.output)
    return EXIT_OK


def cmd_analyze(args) -> int:
    s = _scheme_from_args(args)
    an, d = _prepare(s)
    q = _check_q(args.q, an.q_max)
    p = tradeoff_point(s, q, (an, d))
    a = overlap_report(s, d).a
    fields = {
        "q_max": an.q_max,
        "q": q,
        "a": a,
        "guess_pr": p.guess_pr,
        "fbar_sim": p.fbar_sim,
        "fbar_closed": p.fbar_closed,
        "fbar_minmax": fbar_minmax(q, an.q_max),
        "detection_bound": p.detection_bound,
    }
    _emit(fields, args.json)
    return EXIT_OK


def cmd_curve(args) -> int:
    if args.steps < 2:
        raise CliError("--steps must be at least 2", EXIT_BAD_ARG)
    s = _scheme_from_args(args)
    _write(curve_csv(tradeoff_curve(s, args.steps)), args.output)
    return EXIT_OK


def cmd_optimize(args) -> int:
    if args.outcomes < 2:
        raise CliError("--outcomes must be at least 2", EXIT_BAD_ARG)
    if args.restarts < 1:
        raise CliError("--restarts must be at least 1", EXIT_BAD_ARG)
    s = _scheme_from_args(args)
    if s.dim_b != 2:
        raise CliError("optimize supports schemes with dim_b = 2 only", EXIT_BAD_ARG)
    an, _ = _prepare(s)
    q = _check_q(args.q, an.q_max)
    try:
        res = maximize_fidelity(s, q, k=args.outcomes, restarts=args.restarts, seed=args.seed)
    except NoFeasiblePoint as exc:
        raise CliError(str(exc), EXIT_INFEASIBLE)
    # the min-max value bounds the reader only on stringent-type reductions
    bound_applies = is_stringent_pair(an.rho0, an.rho1)
    bound = fbar_minmax(q, an.q_max)
    fields = {
        "q_max": an.q_max,
        "q": q,
        "outcomes": args.outcomes,
        "restarts_used": res.restarts_used,
        "seed": args.seed,
        "best_fbar": res.best_fbar,
        "achieved_q": res.achieved_q,
        "bound": bound,
        "gap_to_bound": res.gap_to_bound,
        "warm_fbar": res.warm_fbar,
        "bound_applies": bound_applies,
    }
    _emit(fields, args.json)
    if bound_applies and res.best_fbar > bound + BOUND_TOL:
        sys.stderr.write(f"bound violation: {fmt(res.best_fbar)} > {fmt(bound)}\n")
        return EXIT_BOUND
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        grid = [float(x) for x in args.grid.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"bad --grid {args.grid!r}", EXIT_BAD_ARG)
    if not grid:
        grid = [args.qmax * t / 4 for t in range(1, 5)]
    try:
        report = verify_bound(args.qmax, grid, k=args.outcomes, restarts=args.restarts,
                              seed=args.seed)
    except BoundViolation as exc:
        sys.stderr.write(f"bound violation: {exc}\n")
        return EXIT_BOUND
    except NoFeasiblePoint as exc:
        raise CliError(str(exc), EXIT_INFEASIBLE)
    except (QOutOfRange, QmaxOutOfRange) as exc:
        raise CliError(str(exc), EXIT_BAD_ARG)
    if args.json:
        doc = {"q_max": report.q_max, "k": report.k, "restarts": report.restarts,
               "seed": report.seed, "rows": [asdict(r) for r in report.rows]}
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write("q,best_fbar,bound,gap,warm_fbar,povms_checked\n")
        for r in report.rows:
            sys.stdout.write(",".join([fmt(r.q), fmt(r.best_fbar), fmt(r.bound), fmt(r.gap),
                                       fmt(r.warm_fbar), str(r.povms_checked)]) + "\n")
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def _add_scheme_source(p):
    p.add_argument("scheme", nargs="?", help="scheme file (omit to use a built-in scheme)")
    p.add_argument("--type", choices=sorted(BUILTIN), default="stringent",
                   help="built-in scheme when no file is given")
    p.add_argument("--qmax", type=float, help="q_max of the built-in scheme")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qseal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a built-in scheme file")
    p.add_argument("--type", choices=sorted(BUILTIN), default="stringent")
    p.add_argument("--qmax", type=float, required=True)
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("analyze", help="guessing probability and fidelity of the attack at q")
    _add_scheme_source(p)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("curve", help="CSV sweep of the tradeoff curve")
    _add_scheme_source(p)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("optimize", help="numerical search over general POVMs at fixed q")
    _add_scheme_source(p)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--outcomes", type=int, default=4)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify", help="check the min-max bound on the stringent scheme")
    p.add_argument("--qmax", type=float, required=True)
    p.add_argument("--grid", default="", help="comma-separated q values (default: 4 even steps)")
    p.add_argument("--outcomes", type=int, default=4)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"qseal: {exc}\n")
        return exc.code
    except QsealError as exc:
        sys.stderr.write(f"qseal: {exc}\n")
        return EXIT_BAD_ARG


if __name__ == "__main__":
    sys.exit(main())
