"""Command-line front end.

Exit status: 0 on success or a passing verification, 1 when a verification
fails (a stage-2 maximum above 35/6 or a non-identifying pattern), 2 on
usage, parse and window errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import codeset, discharging, share, verifier
from .codeset import CodeWindow
from .errors import GridError
from .lattice import Region, as_point, square_ball
from .share import format_rational

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# Flags whose values may start with '-' (negative coordinates).
_VALUE_FLAGS = {"--codewords", "--center", "--n", "--r", "--rule", "--support-radius"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_point(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {text!r}")
    try:
        return as_point((int(parts[0]), int(parts[1])))
    except (ValueError, GridError) as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def parse_points(text: str):
    text = text.strip()
    if not text:
        return []
    return [parse_point(tok.strip()) for tok in text.split(";") if tok.strip()]


def _rule_arg(text: str):
    if text == "all":
        return "all"
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("rule must be 1..10 or 'all'") from None
    if k not in discharging.RULES:
        raise argparse.ArgumentTypeError("rule must be 1..10 or 'all'")
    return k


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gridid", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify-lemma33", help="run the exhaustive two-stage share-bound check")
    v.add_argument("--base", choices=["singleton", "axis-pair", "both"], default="both")
    v.add_argument("--jobs", type=int, default=None,
                   help=f"worker processes (default: ${verifier.JOBS_ENV} or 1)")
    v.add_argument("--out", help="write the JSON report here")
    v.add_argument("--resume", help="JSON-lines checkpoint file to read and append")

    e = sub.add_parser("estimate", help="subcode upper estimate of a share")
    e.add_argument("--codewords", type=parse_points, required=True)
    e.add_argument("--center", type=parse_point, default=as_point((0, 0)))
    e.add_argument("--out")

    s = sub.add_parser("share", help="exact share of a codeword")
    s.add_argument("--codewords", type=parse_points, required=True)
    s.add_argument("--support-radius", type=int, default=4)
    s.add_argument("--center", type=parse_point, default=as_point((0, 0)))
    s.add_argument("--out")

    o = sub.add_parser("outflow", help="share shifted away from a codeword by the rules")
    o.add_argument("--codewords", type=parse_points, required=True)
    o.add_argument("--center", type=parse_point, default=as_point((0, 0)))
    o.add_argument("--rule", type=_rule_arg, default="all")
    o.add_argument("--out")

    c = sub.add_parser("check-pattern", help="test whether a periodic pattern is r-identifying")
    c.add_argument("--file", required=True)
    c.add_argument("--r", type=int, default=2)
    c.add_argument("--out")

    d = sub.add_parser("density", help="density of a periodic pattern")
    d.add_argument("--file", required=True)
    d.add_argument("--out")

    b = sub.add_parser("bound", help="finite-window density lower bound")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--out")
    return p


def _normalise_argv(argv):
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _emit(args, payload: dict) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")


def _window(points, center, radius) -> CodeWindow:
    support = square_ball(radius, center) | Region.from_points(points)
    return CodeWindow(Region.from_points(points), support)


def cmd_verify(args) -> int:
    bases = (list(verifier.BaseIset) if args.base == "both"
             else [verifier.BaseIset.parse(args.base)])
    jobs = args.jobs if args.jobs is not None else verifier.default_jobs()
    if jobs < 1:
        raise GridError("--jobs must be positive")
    reports = verifier.verify_lemma33(jobs=jobs, bases=bases, checkpoint=args.resume)
    for rep in reports:
        worst = rep.max_share
        print(f"{rep.base.value}: {len(rep.problem_sets)} problem sets, "
              f"{rep.cases_examined} cases, max ms_2 = "
              f"{'vacuous' if worst is None else format_rational(worst)} "
              f"(bound {format_rational(verifier.BOUND)}), "
              f"{'pass' if rep.passed else 'FAIL'} in {rep.elapsed:.1f}s")
    ok = all(r.passed for r in reports)
    print("verdict:", "pass" if ok else "fail")
    _emit(args, {"schema": verifier.SCHEMA, "reports": [r.to_json() for r in reports]})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_estimate(args) -> int:
    win = _window(args.codewords, args.center, 4)
    value = share.share_estimate(win, args.center, 2)
    print(format_rational(value))
    _emit(args, {"schema": 1, "center": list(args.center), "estimate": format_rational(value)})
    return EXIT_OK


def cmd_share(args) -> int:
    support = square_ball(args.support_radius, args.center)
    win = CodeWindow(Region.from_points(args.codewords), support)
    value = share.share_exact(win, args.center, 2)
    print(format_rational(value))
    _emit(args, {"schema": 1, "center": list(args.center), "share": format_rational(value)})
    return EXIT_OK


def cmd_outflow(args) -> int:
    # Radius 6 covers B_2 of every candidate receiver of rules 1 and 10.
    win = _window(args.codewords, args.center, 6)
    rules = list(discharging.RULES) if args.rule == "all" else [args.rule]
    amounts = {k: discharging.rule_outflow(win, args.center, k) for k in rules}
    firings = [f for f in discharging.rule_firings(win, args.center) if f.rule in rules]
    for k in rules:
        if amounts[k]:
            print(f"rule {k}: {format_rational(amounts[k])}")
    total = sum(amounts.values(), Fraction(0))
    print(f"total: {format_rational(total)}")
    for f in firings:
        print(json.dumps(f.to_json(), sort_keys=True))
    _emit(args, {
        "schema": 1, "center": list(args.center),
        "outflow": {str(k): format_rational(q) for k, q in amounts.items()},
        "total": format_rational(total),
        "firings": [f.to_json() for f in firings],
    })
    return EXIT_OK


def cmd_check_pattern(args) -> int:
    code = codeset.read_pattern(args.file)
    verdict = codeset.verify_periodic(code, args.r)
    if verdict.ok:
        print(f"{code.width}x{code.height} pattern is {args.r}-identifying")
    elif verdict.uncovered is not None:
        print(f"not {args.r}-identifying: vertex {tuple(verdict.uncovered)} is uncovered")
    else:
        u, w = verdict.pair
        print(f"not {args.r}-identifying: {tuple(u)} and {tuple(w)} are not separated")
    _emit(args, {"schema": 1, "r": args.r, "density": format_rational(codeset.density(code)),
                 **verdict.to_json()})
    return EXIT_OK if verdict.ok else EXIT_FAIL


def cmd_density(args) -> int:
    value = codeset.density(codeset.read_pattern(args.file))
    print(format_rational(value))
    _emit(args, {"schema": 1, "density": format_rational(value)})
    return EXIT_OK


def cmd_bound(args) -> int:
    value = codeset.theorem34_lower_bound(args.n)
    print(f"{format_rational(value)} ~ {float(value):.6f}")
    _emit(args, {"schema": 1, "n": args.n, "bound": format_rational(value)})
    return EXIT_OK


COMMANDS = {
    "verify-lemma33": cmd_verify,
    "estimate": cmd_estimate,
    "share": cmd_share,
    "outflow": cmd_outflow,
    "check-pattern": cmd_check_pattern,
    "density": cmd_density,
    "bound": cmd_bound,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_normalise_argv(argv))
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (GridError, OSError) as e:
        print(f"gridid: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
