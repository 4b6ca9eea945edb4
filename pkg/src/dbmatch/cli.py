"""Command-line workbench.

Exit codes: 0 success, 2 bad input, 3 precondition violated.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import approx, exact, gen, permute
from .core import Instance, Matching, weight
from .errors import DbMatchError, InstanceError, PreconditionError
from .netflow import max_weight_b_matching

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION = 0, 2, 3


class InputError(DbMatchError):
    """Unreadable or malformed input file."""


def _frac(prefix: str, x: Fraction | None) -> dict:
    if x is None:
        return {f"{prefix}_num": None, f"{prefix}_den": None}
    return {f"{prefix}_num": x.numerator, f"{prefix}_den": x.denominator}


def _load_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_instance(path: str) -> Instance:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return Instance.from_dict(data)


class Timer:
    def __init__(self, enabled: bool):
        self.enabled = enabled

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = round(time.perf_counter() - self.start, 6) if self.enabled else None


def _report(args, inst: Instance, method: str, value: Fraction, timer: Timer, **extra) -> dict:
    out = {"command": args.command, "digest": inst.digest(), "method": method, "seed": args.seed,
           **_frac("value", value), "wall_time": timer.elapsed}
    out.update(extra)
    return out


# --------------------------------------------------------------------------- commands


def cmd_solve(args) -> dict:
    inst = load_instance(args.instance)
    guarantee = None
    with Timer(args.timing) as tm:
        if args.method == "brute":
            M = exact.solve_bruteforce(inst, args.limit)
            guarantee = Fraction(1)
        elif args.method == "approx":
            res = approx.approximate(inst)
            M, guarantee = res.matching, res.guarantee
        else:
            M = Matching.of(inst, max_weight_b_matching(inst).edge_ids)
    extra = {"edges": [i + 1 for i in M.sorted_ids()], **_frac("guarantee", guarantee)}
    if args.method == "bmatching":
        extra["note"] = "degree bounds only; distance rule ignored"
    return _report(args, inst, args.method, weight(inst, M), tm, **extra)


def cmd_gap(args) -> dict:
    inst = load_instance(args.instance)
    return exact.integrality_gap(inst, args.limit).to_dict()


def cmd_permute(args) -> dict:
    inst = load_instance(args.instance)
    m = args.method
    if m == "optimal":
        res = permute.optimal_permutation_distance_matching(inst)
    elif m == "rand":
        res = permute.randomized_permutation(inst, args.seed)
    elif m == "derand":
        res = permute.derandomized_permutation(inst)
    elif m == "tgreedy":
        res = permute.t_greedy_permutation(inst, args.seed)
    else:
        res = permute.best_permutation_bruteforce(inst)
    return res.to_dict()


def cmd_expect(args) -> dict:
    inst = load_instance(args.instance)
    value = permute.expected_weight_enumeration(inst, args.alg)
    return {"alg": args.alg, "digest": inst.digest(), **_frac("expectation", value)}


def cmd_gen(args) -> dict:
    kind = args.kind
    if kind == "tight-gap":
        return gen.gen_tight_gap(args.d).to_dict()
    if kind == "star":
        return gen.star_instance(args.n, args.d, args.cyclic).to_dict()
    if kind == "fig3":
        return gen.fig3_instance().to_dict()
    if kind == "random":
        params = gen.RandomParams(
            n=args.n, t_count=args.t, d=args.d, cyclic=args.cyclic, edge_prob=args.edge_prob,
            weight_min=args.weight_min, weight_max=args.weight_max, weight_den=args.weight_den,
            b_s_min=args.b_s_min, b_s_max=args.b_s_max, b_t_min=args.b_t_min, b_t_max=args.b_t_max,
            max_edges=args.max_edges)
        return gen.gen_random(params, args.seed).to_dict()
    if kind == "3dm":
        return gen.random_two_regular_3dm(args.q, args.seed).to_dict()
    if kind == "double":
        h = gen.ThreeDimMatchingInstance.from_dict(_load_json(_need(args.source, kind)))
        return gen.gen_from_3dm(h).to_dict()
    if kind == "hampath":
        g = gen.SimpleGraph.from_dict(_load_json(_need(args.source, kind)))
        inst, profile = gen.gen_from_hampath(g)
        return {"instance": inst.to_dict(), "b_profile": list(profile)}
    raise InputError(f"unknown generator {kind!r}")


def _need(source: str | None, kind: str) -> str:
    if source is None:
        raise InputError(f"gen {kind} needs --from FILE")
    return source


BENCH_METHODS = ("brute", "approx", "bmatching", "optimal", "rand", "derand")


def cmd_bench(args) -> list[dict]:
    """Sweep seeded random instances; one row per (instance, method)."""
    methods = args.methods.split(",")
    for m in methods:
        if m not in BENCH_METHODS:
            raise InputError(f"unknown bench method {m!r}")
    params = gen.RandomParams(n=args.n, t_count=args.t, d=args.d, cyclic=args.cyclic,
                              edge_prob=args.edge_prob, max_edges=args.max_edges)
    rows = []
    for i in range(args.count):
        inst = gen.gen_random(params, args.seed + i)
        for m in methods:
            bound = None
            try:
                with Timer(args.timing) as tm:
                    if m == "brute":
                        value, bound = weight(inst, exact.solve_bruteforce(inst, args.limit)), Fraction(1)
                    elif m == "approx":
                        res = approx.approximate(inst)
                        value, bound = res.achieved_weight, res.guarantee
                    elif m == "bmatching":
                        value = max_weight_b_matching(inst).total_weight
                    else:
                        res = {"optimal": lambda: permute.optimal_permutation_distance_matching(inst),
                               "rand": lambda: permute.randomized_permutation(inst, args.seed + i),
                               "derand": lambda: permute.derandomized_permutation(inst)}[m]()
                        value, bound = res.value, res.bound
                status = "ok"
            except PreconditionError as exc:
                value, status, tm = None, f"skipped: {type(exc).__name__}", Timer(False)
                tm.elapsed = None
            rows.append({"digest": inst.digest(), "method": m, **_frac("value", value),
                         **_frac("bound", bound), "time": tm.elapsed, "status": status})
    rows.sort(key=lambda r: (r["digest"], r["method"]))
    return rows


# --------------------------------------------------------------------------- plumbing


def _emit(payload, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=None if isinstance(payload, dict) else 1) + "\n"
    rows = payload if isinstance(payload, list) else [payload]
    flat = [{k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()} for r in rows]
    fields = sorted({k for r in flat for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in flat:
        w.writerow(r)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="RNG seed (default 0)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="record wall time (makes output non-reproducible)")

    p = argparse.ArgumentParser(prog="dbmatch", parents=[common],
                                description="Solvers and experiments for distance-constrained b-matching.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="solve an instance")
    s.add_argument("instance")
    s.add_argument("--method", choices=("brute", "approx", "bmatching"), default="brute")
    s.add_argument("--limit", type=int, default=exact.DEFAULT_EDGE_LIMIT)

    s = sub.add_parser("gap", parents=[common], help="exact LP/IP integrality gap")
    s.add_argument("instance")
    s.add_argument("--limit", type=int, default=exact.DEFAULT_EDGE_LIMIT)

    s = sub.add_parser("permute", parents=[common], help="choose an order of S")
    s.add_argument("instance")
    s.add_argument("--method", choices=("optimal", "rand", "derand", "tgreedy", "brute"), default="optimal")

    s = sub.add_parser("expect", parents=[common], help="exact expectation by enumeration (n <= 8)")
    s.add_argument("instance")
    s.add_argument("--alg", choices=permute.ALGORITHMS, required=True)

    s = sub.add_parser("gen", parents=[common], help="generate instances")
    s.add_argument("kind", choices=("tight-gap", "star", "fig3", "random", "3dm", "double", "hampath"))
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--n", type=int, default=6)
    s.add_argument("--t", type=int, default=2)
    s.add_argument("--q", type=int, default=2, help="elements per class for 3dm")
    s.add_argument("--cyclic", action="store_true")
    s.add_argument("--edge-prob", type=float, default=0.5)
    s.add_argument("--weight-min", type=int, default=0)
    s.add_argument("--weight-max", type=int, default=10)
    s.add_argument("--weight-den", type=int, default=1)
    s.add_argument("--b-s-min", type=int, default=1)
    s.add_argument("--b-s-max", type=int, default=1)
    s.add_argument("--b-t-min", type=int, default=None)
    s.add_argument("--b-t-max", type=int, default=None)
    s.add_argument("--max-edges", type=int, default=None)
    s.add_argument("--from", dest="source", default=None, help="input file for double/hampath")

    s = sub.add_parser("bench", parents=[common], help="CSV sweep over random instances")
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--n", type=int, default=6)
    s.add_argument("--t", type=int, default=2)
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--cyclic", action="store_true")
    s.add_argument("--edge-prob", type=float, default=0.5)
    s.add_argument("--max-edges", type=int, default=16)
    s.add_argument("--methods", default="brute,approx,optimal")
    s.add_argument("--limit", type=int, default=exact.DEFAULT_EDGE_LIMIT)
    return p


COMMANDS = {"solve": cmd_solve, "gap": cmd_gap, "permute": cmd_permute,
            "expect": cmd_expect, "gen": cmd_gen, "bench": cmd_bench}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args.seed = getattr(args, "seed", 0)
    args.out = getattr(args, "out", None)
    args.timing = getattr(args, "timing", False)
    fmt = getattr(args, "format", None) or ("csv" if args.command == "bench" else "json")
    try:
        payload = COMMANDS[args.command](args)
    except PreconditionError as exc:
        print(f"dbmatch: precondition violated ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InstanceError, InputError, ValueError) as exc:
        print(f"dbmatch: bad input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = _emit(payload, fmt)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
