"""The `hc` command line: Macdonald polynomials, quantum traces, verification suites."""

from __future__ import annotations

import argparse
import json
import shutil
import sys
from pathlib import Path

import sympy

from .laurent import format_weight, is_dominant, parse_weight
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _sym(text: str):
    return sympy.sympify(text.replace("^", "**"), locals={"q": sympy.Symbol("q"), "t": sympy.Symbol("t")})


def render_macdonald(P, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(P.to_json(), indent=2)
    if fmt == "latex":
        parts = []
        for mu in sorted(P.coeffs, reverse=True):
            c = P.coeffs[mu]
            m = f"m_{{({format_weight(mu)})}}"
            parts.append(m if c.is_one() else rf"\left({sympy.latex(sympy.factor(_sym(str(c))))}\right) {m}")
        return " + ".join(parts) if parts else "0"
    return str(P)


def cmd_macdonald(args) -> int:
    from .macdonald import MacdonaldCache, macdonald, specialize_mac

    try:
        lam = parse_weight(args.lam)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if len(lam) != args.n:
        raise UsageError(f"weight {args.lam} does not have {args.n} parts")
    if not is_dominant(lam):
        raise UsageError(f"weight {args.lam} is not dominant")
    P = macdonald(lam, args.n, cache=None if args.no_cache else MacdonaldCache())
    if args.t_power is not None:
        P = specialize_mac(P, args.t_power)
    print(render_macdonald(P, args.format))
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = run_suite(args.suite, jobs=args.jobs, n=args.n, k=args.k,
                    max_deg=args.max_deg, max_total_deg=args.max_total_deg)
    if args.report:
        Path(args.report).write_text(rep.to_json())
    if args.json:
        print(rep.to_json())
    else:
        print(rep.summary())
    return EXIT_OK if rep.passed else EXIT_FAIL


def classical_limit(pattern: str, n: int) -> str:
    """q -> 1 image of tr_q(pattern), named as a classical trace when it is one."""
    from .rewrite import classical_trace, degenerate, parse_pattern, quantum_trace

    letters = parse_pattern(pattern)
    d = degenerate(quantum_trace(letters, n))
    names = {"A": "X", "Binv": "Y", "P": "i*j"}
    if letters and all(l in names for l in letters):
        if sympy.expand(d - classical_trace(letters, n)) == 0:
            return "tr(" + "*".join(names[l] for l in letters) + ")"
    return str(d)


def cmd_trace(args) -> int:
    from .rewrite import quantum_trace

    try:
        t = quantum_trace(args.pattern, args.n)
        limit = classical_limit(args.pattern, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(t)
    print(f"q->1: {limit}")
    return EXIT_OK


def cmd_cache(args) -> int:
    from .macdonald import MacdonaldCache

    cache = MacdonaldCache()
    if args.action == "path":
        print(cache.directory)
    elif args.action == "clear":
        if cache.directory.exists():
            shutil.rmtree(cache.directory)
        print(f"cleared {cache.directory}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("macdonald", help="Macdonald polynomial in the monomial basis")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--lambda", dest="lam", required=True, help="dominant weight, e.g. 2,1,0")
    m.add_argument("--t-power", "--k", dest="t_power", type=int, help="specialize t = q^k")
    m.add_argument("--format", choices=("text", "json", "latex"), default="text")
    m.add_argument("--no-cache", action="store_true")
    m.set_defaults(func=cmd_macdonald)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=SUITES, required=True)
    v.add_argument("--n", type=int)
    v.add_argument("--k", type=int)
    v.add_argument("--max-deg", type=int)
    v.add_argument("--max-total-deg", type=int)
    v.add_argument("--jobs", type=int, default=1, help="worker processes")
    v.add_argument("--report", help="write the JSON report here")
    v.add_argument("--json", action="store_true", help="print the JSON report")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("trace", help="quantum trace normal form and its q->1 limit")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--pattern", default="", help='e.g. "A^2 B^-1 P"')
    t.set_defaults(func=cmd_trace)

    c = sub.add_parser("cache", help="inspect or clear the Macdonald cache")
    c.add_argument("action", choices=("path", "clear"))
    c.set_defaults(func=cmd_cache)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "n", None) is not None and args.n < 1:
        print("hc: error: --n must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
