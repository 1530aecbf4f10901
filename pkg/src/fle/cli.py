"""Command-line entry point ``fle``.

Exit codes: 0 Yes or success, 1 No, 2 a precondition or input error,
64 bad usage.  Numbers are printed with 12 significant digits.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import List, Optional

from fle.bench import ALGORITHMS, run_bench, write_csv
from fle.curveio import CurveParseError, parse_curve, write_curve
from fle.freespace import decide_alt_godau, exact_frechet
from fle.generate import GenSpec, gen_long_edge_pair, random_walk
from fle.geometry import DomainError, PolygonalCurve
from fle.greedy import EdgeLengthMode, PreconditionError, decide_greedy
from fle.optimize import AssumptionViolated, Outcome, approximate, epsilon0_approx, optimize
from fle.query import QueryIndex, build_index, decide_query

EXIT_YES = 0
EXIT_NO = 1
EXIT_PRECONDITION = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def fmt(x: float) -> str:
    return format(float(x), "#.12g")


def _seed(args) -> int:
    env = os.environ.get("FLE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"FLE_SEED must be an integer, got {env!r}") from None
    return args.seed


def _verdict_exit(flag: bool) -> int:
    print("yes" if flag else "no")
    return EXIT_YES if flag else EXIT_NO


def cmd_decide(args) -> int:
    P, Q = parse_curve(args.p), parse_curve(args.q)
    dec = decide_greedy(P, Q, args.e, EdgeLengthMode.parse(args.mode))
    code = _verdict_exit(dec.verdict)
    if dec.witness is not None:
        print(" ".join(fmt(g) for g in dec.witness.gammas))
    return code


def cmd_compute(args) -> int:
    res = optimize(parse_curve(args.p), parse_curve(args.q))
    print(res if isinstance(res, Outcome) else fmt(res))
    return EXIT_YES


def cmd_approx(args) -> int:
    P, Q = parse_curve(args.p), parse_curve(args.q)
    res = approximate(P, Q)
    if isinstance(res, Outcome):
        print(res)
        return EXIT_YES
    print(fmt(res))
    if res > epsilon0_approx(P, Q):
        print("note: band-not-guaranteed (value above the approximation threshold)", file=sys.stderr)
    return EXIT_YES


def cmd_oracle(args) -> int:
    P, Q = parse_curve(args.p), parse_curve(args.q)
    if args.what == "decide":
        if args.e is None:
            raise UsageError("oracle decide needs -e")
        return _verdict_exit(decide_alt_godau(P, Q, args.e))
    print(fmt(exact_frechet(P, Q)))
    return EXIT_YES


def cmd_index(args) -> int:
    if args.what == "build":
        if args.p is None or args.o is None:
            raise UsageError("index build needs -p and -o")
        ix = build_index(parse_curve(args.p))
        with open(args.o, "wb") as fh:
            ix.save(fh)
        return EXIT_YES
    if args.i is None or args.q is None or args.e is None:
        raise UsageError("index query needs -i, -q and -e")
    with open(args.i, "rb") as fh:
        ix = QueryIndex.load(fh)
    dec = decide_query(ix, parse_curve(args.q), args.e)
    code = _verdict_exit(dec.verdict)
    if dec.witness is not None:
        print(" ".join(fmt(g) for g in dec.witness.gammas))
    return code


def cmd_gen(args) -> int:
    spec = GenSpec(n=args.n, d=args.d, min_edge=args.min_edge, max_edge=args.max_edge,
                   turn_cap=args.turn_cap, seed=_seed(args))
    if args.m is None:
        write_curve(PolygonalCurve(random_walk(spec)), args.o or sys.stdout)
        return EXIT_YES
    if args.q_out is None or args.o is None:
        raise UsageError("pair generation needs -o and --q-out")
    q_min = args.q_min_edge if args.q_min_edge is not None else args.min_edge
    spec_q = GenSpec(n=args.m, d=args.d, min_edge=q_min, max_edge=max(q_min, args.max_edge),
                     turn_cap=args.turn_cap, seed=spec.seed + 1)
    P, Q = gen_long_edge_pair(spec, spec_q, args.eps, EdgeLengthMode.parse(args.mode))
    write_curve(P, args.o)
    write_curve(Q, args.q_out)
    return EXIT_YES


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"--sizes must be comma-separated integers, got {args.sizes!r}") from None
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    for a in algos:
        if a not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {a!r}")
    write_csv(run_bench(sorted(sizes), args.reps, _seed(args), algos), sys.stdout)
    return EXIT_YES


def _eps(text: str) -> float:
    v = float(text)
    if not math.isfinite(v) or v <= 0:
        raise argparse.ArgumentTypeError(f"eps must be a positive number, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    root = _Parser(prog="fle", description="Frechet distance for curves with long edges.")
    sub = root.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def pair(p):
        p.add_argument("-p", required=True, metavar="P.txt")
        p.add_argument("-q", required=True, metavar="Q.txt")

    p = sub.add_parser("decide", help="greedy decision; exit 0 Yes, 1 No, 2 precondition failure")
    pair(p)
    p.add_argument("-e", required=True, type=_eps, metavar="EPS")
    p.add_argument("--mode", default="strict", choices=[m.value for m in EdgeLengthMode])
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("compute", help="exact distance below the optimization threshold")
    pair(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("approx", help="sqrt(d)-approximation in linear time")
    pair(p)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("oracle", help="quadratic free-space reference")
    p.add_argument("what", choices=["decide", "exact"])
    pair(p)
    p.add_argument("-e", type=_eps, metavar="EPS")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("index", help="planar prefix-query index")
    p.add_argument("what", choices=["build", "query"])
    p.add_argument("-p", metavar="P.txt")
    p.add_argument("-o", metavar="P.idx")
    p.add_argument("-i", metavar="P.idx")
    p.add_argument("-q", metavar="Q.txt")
    p.add_argument("-e", type=_eps, metavar="EPS")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("gen", help="seeded random walk, or a long-edge pair with --m")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--min-edge", type=float, default=3.0)
    p.add_argument("--max-edge", type=float, default=6.0)
    p.add_argument("--turn-cap", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m", type=int, help="vertex count of Q; switches to pair generation")
    p.add_argument("--q-min-edge", type=float)
    p.add_argument("--eps", type=_eps, default=1.0)
    p.add_argument("--mode", default="strict", choices=[m.value for m in EdgeLengthMode])
    p.add_argument("-o", metavar="OUT")
    p.add_argument("--q-out", metavar="Q_OUT")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="scaling benchmark, CSV on stdout")
    p.add_argument("--sizes", default="4096,8192,16384")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algos", default="greedy,oracle")
    p.set_defaults(func=cmd_bench)
    return root


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, AssumptionViolated, CurveParseError, DomainError, ValueError, OSError) as exc:
        print(f"fle: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
