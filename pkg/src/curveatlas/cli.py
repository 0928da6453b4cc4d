"""Command-line front end.  Every subcommand prints JSON; exit status 0 = ok,
1 = a verification failed, 2 = bad usage or unparsable input."""
from __future__ import annotations

import argparse
import sys
import time
from typing import Sequence

from . import bounds
from .catalog import load_catalog
from .counting import count_points
from .curves import format_curve, genus, parse_curve
from .errors import (BudgetExceeded, CapExceeded, CurveAtlasError, InvariantViolation, NotWeil, ParseError,
                     PropertyFailed, SchemaError)
from .jsonio import big, dumps
from .rho import certify_rho
from .search import PREDICATES, SearchSpec, scan
from .tables import verify_extremal_table, verify_rho_table
from .zeta import closed_points_profile, l_polynomial_from_counts

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
_VERIFICATION_ERRORS = (PropertyFailed, InvariantViolation, NotWeil)


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json-out", metavar="PATH", help="also write the JSON result to PATH")
    p.add_argument("--threads", type=int, default=1, help="worker threads for enumeration")
    p.add_argument("--deterministic", action="store_true", help="omit timestamps so runs are byte-identical")
    p.add_argument("--catalog", metavar="PATH", help="witness catalog (default: the shipped catalog)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="curveatlas", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="N_1..N_n by enumeration")
    p.add_argument("--curve", required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--method", default="auto", choices=["auto", "kernel", "line", "brute", "reference"])

    p = sub.add_parser("zeta", parents=[common], help="L-polynomial from g counts")
    p.add_argument("--curve", required=True)
    p.add_argument("--n", type=int, default=None, help="also list N_1..N_n predicted by the L-polynomial")

    p = sub.add_parser("closed-points", parents=[common], help="B_1..B_r")
    p.add_argument("--curve", required=True)
    p.add_argument("--r", type=int, required=True)

    p = sub.add_parser("bounds", parents=[common], help="every bound at (q, g)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--r", type=int, default=None, help="include lower bounds on B_r")
    p.add_argument("--n", type=int, default=None, help="include the Weil interval for N_n")
    p.add_argument("--n1", type=int, default=None)
    p.add_argument("--n2", type=int, default=None)

    p = sub.add_parser("certify-rho", parents=[common], help="certificate for rho(q, g)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--g", type=int, required=True)

    p = sub.add_parser("verify-tables", parents=[common], help="reproduce the rho table or the extremal-curve table")
    p.add_argument("--table", type=int, choices=[1, 2], required=True)

    p = sub.add_parser("search", parents=[common], help="exhaustive hyperelliptic family scan (JSON lines)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--predicate", choices=PREDICATES, required=True)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--max-hits", type=int, default=None)
    p.add_argument("--h-zero", action="store_true", help="odd characteristic: restrict to h = 0")
    p.add_argument("--start-index", type=int, default=0, help="resume from this candidate index")
    return parser


def _curve(text: str):
    try:
        return parse_curve(text)
    except CapExceeded:
        raise
    except CurveAtlasError as exc:
        if isinstance(exc, (PropertyFailed, InvariantViolation)):
            raise
        raise UsageError(f"cannot parse curve: {exc}") from exc


def _catalog(args):
    try:
        return load_catalog(args.catalog)
    except (ParseError, SchemaError, OSError) as exc:
        raise UsageError(f"cannot load catalog: {exc}") from exc


def cmd_count(args) -> tuple[dict, int]:
    model = _curve(args.curve)
    counts = [count_points(model, n, args.method, threads=args.threads) for n in range(1, args.n + 1)]
    return {"curve": format_curve(model), "q": model.q, "g": genus(model), "N": [big(c) for c in counts]}, EXIT_OK


def cmd_zeta(args):
    model = _curve(args.curve)
    g = genus(model)
    counts = [count_points(model, n, threads=args.threads) for n in range(1, g + 1)]
    L = l_polynomial_from_counts(model.q, g, counts)
    out = {"curve": format_curve(model), **L.to_json(), "text": L.text()}
    if args.n:
        out["N"] = [big(c) for c in L.counts(args.n)]
    return out, EXIT_OK


def cmd_closed_points(args):
    model = _curve(args.curve)
    prof = closed_points_profile(model, args.r)
    return {"curve": format_curve(model), **prof.to_json()}, EXIT_OK


def cmd_bounds(args):
    q, g = args.q, args.g
    reports = list(bounds.rho_upper_bounds(q, g))
    if g >= 1 or args.n1 is not None:
        reports += bounds.b2_upper_bounds(q, g, args.n1, args.n2)
    if args.r is not None:
        reports += bounds.br_lower_bounds(q, g, args.r)
    out = {"q": q, "g": g, "reports": [r.to_json() for r in reports]}
    if args.n is not None:
        lo, hi = bounds.weil_interval(q, g, args.n)
        out["weil"] = {"n": args.n, "lo": big(lo), "hi": big(hi)}
    if args.n1 is not None and args.n2 is not None and g >= 1:
        out["hallouin_perret"] = bounds.hallouin_perret_check(q, g, args.n1, args.n2)
    return out, EXIT_OK


def cmd_certify_rho(args):
    cert = certify_rho(args.q, args.g, _catalog(args))
    return cert.to_json(), EXIT_OK


def cmd_verify_tables(args):
    catalog = _catalog(args)
    rows = verify_rho_table(catalog) if args.table == 1 else verify_extremal_table(catalog)
    passed = sum(r.ok for r in rows)
    out = {"table": args.table, "passed": passed, "total": len(rows), "rows": [r.to_json() for r in rows]}
    return out, EXIT_OK if passed == len(rows) else EXIT_FAIL


def cmd_search(args):
    kwargs = dict(q=args.q, g=args.g, predicate=args.predicate, r=args.r, max_hits=args.max_hits,
                  h_zero=args.h_zero, start_index=args.start_index)
    if args.budget is not None:
        kwargs["budget"] = args.budget
    try:
        spec = SearchSpec(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = scan(spec, threads=args.threads, stream=sys.stdout)
    return {"summary": result.summary()}, EXIT_OK


COMMANDS = {"count": cmd_count, "zeta": cmd_zeta, "closed-points": cmd_closed_points, "bounds": cmd_bounds,
            "certify-rho": cmd_certify_rho, "verify-tables": cmd_verify_tables, "search": cmd_search}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    started = time.time()
    try:
        out, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(dumps({"error": "usage", "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except _VERIFICATION_ERRORS as exc:
        out, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_FAIL
    except (BudgetExceeded, CapExceeded, ValueError) as exc:
        print(dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except CurveAtlasError as exc:
        out, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_FAIL
    if not args.deterministic:
        out["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(started))
        out["elapsed_s"] = round(time.time() - started, 3)
    text = dumps(out)
    print(text)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(text + "\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
