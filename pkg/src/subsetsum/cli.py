"""Command-line front end: parse instances, dispatch solvers, run benches.

Instance file format: first line "n t", then n whitespace-separated positive
integers (a multiset; duplicates allowed). Results go to stdout as a single
JSON object (CSV for bench); diagnostics go to stderr. Exit codes: 0 on
success, 1 for a "no" answer under --exit-status, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .core import Rng, decide, faster_subset_sum
from .oracle import bellman_all_sums
from .polyspace import polyspace_decide
from .preprocess import Instance, reduce_multiplicities, split_two_sets
from .convolve import capped_sumset
from .unbounded import unbounded_subset_sum

SCHEMA_VERSION = "1"
DEFAULT_DELTA = 0.01


class InstanceFormatError(ValueError):
    """Malformed instance input; message carries the offending line."""


def parse_instance(source) -> Instance:
    """Parse an instance from a path, '-' (stdin), or an open text stream."""
    if hasattr(source, "read"):
        text = source.read()
    elif source == "-":
        text = sys.stdin.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    lines = text.splitlines()
    if not lines or not lines[0].split():
        raise InstanceFormatError("line 1: expected header 'n t'")
    header = lines[0].split()
    if len(header) != 2:
        raise InstanceFormatError("line 1: expected exactly two fields 'n t'")
    n = _parse_int(header[0], 1)
    t = _parse_int(header[1], 1)
    if n < 0:
        raise InstanceFormatError("line 1: n must be non-negative")
    if t <= 0:
        raise InstanceFormatError("line 1: t missing or <= 0")
    items = []
    for lineno, line in enumerate(lines[1:], start=2):
        for tok in line.split():
            v = _parse_int(tok, lineno)
            if v < 0:
                raise InstanceFormatError(f"line {lineno}: items must be positive, got {v}")
            items.append(v)
    if len(items) != n:
        raise InstanceFormatError(f"expected {n} items, found {len(items)}")
    return Instance.from_items(items, t)


def _parse_int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InstanceFormatError(f"line {lineno}: invalid integer {tok!r}") from None


def serialize_instance(inst: Instance) -> str:
    """Inverse of parse_instance for valid instances."""
    items = inst.items_expanded()
    body = " ".join(str(z) for z in items)
    return f"{len(items)} {inst.target}\n{body}\n"


def _clamp_delta(delta: float):
    if delta <= 0:
        raise InstanceFormatError("delta must be positive")
    return (min(delta, 0.25), delta > 0.25)


def _emit(payload, args) -> int:
    print(json.dumps(payload))
    if getattr(args, "exit_status", False) and payload.get("answer") is False:
        return 1
    return 0


def _load(args) -> Instance:
    inst = parse_instance(args.instance)
    target = getattr(args, "target", None)
    if target is not None:
        inst = Instance.from_items(inst.items_expanded(), target)
    if inst.dropped:
        print(
            f"dropped {inst.dropped_zeros} zero item(s) and "
            f"{inst.dropped_over} item(s) above target",
            file=sys.stderr,
        )
    return inst


def _seed(args) -> int:
    return args.seed if args.seed is not None else secrets.randbits(63)


def cmd_solve(args) -> int:
    inst = _load(args)
    delta, clamped = _clamp_delta(args.delta)
    if clamped:
        print(f"delta clamped to {delta} (solver requires delta <= 1/4)", file=sys.stderr)
    seed = _seed(args)
    t0 = time.perf_counter()
    res = decide(inst, delta, seed)
    ms = (time.perf_counter() - t0) * 1000
    return _emit(
        {
            "schema": SCHEMA_VERSION,
            "algorithm": "faster_subset_sum",
            "answer": res.answer,
            "seed": seed,
            "delta": delta,
            "delta_clamped": clamped,
            "dropped_items": inst.dropped,
            "timings_ms": round(ms, 3),
            "note": res.note,
        },
        args,
    )


def cmd_solve_all_sums(args) -> int:
    inst = _load(args)
    delta, clamped = _clamp_delta(args.delta)
    if clamped:
        print(f"delta clamped to {delta} (solver requires delta <= 1/4)", file=sys.stderr)
    seed = _seed(args)
    t0 = time.perf_counter()
    t = inst.target
    z1, z2 = split_two_sets(reduce_multiplicities(inst))
    rng = Rng(seed)
    sums = faster_subset_sum(z1, t, delta / 2 if z2 else delta, rng)
    if z2:
        sums = capped_sumset(sums, faster_subset_sum(z2, t, delta / 2, rng), t)
    ms = (time.perf_counter() - t0) * 1000
    return _emit(
        {
            "schema": SCHEMA_VERSION,
            "algorithm": "faster_subset_sum",
            "answer": t in sums,
            "sums_count": sums.count(),
            "seed": seed,
            "delta": delta,
            "dropped_items": inst.dropped,
            "timings_ms": round(ms, 3),
        },
        args,
    )


def cmd_oracle(args) -> int:
    inst = _load(args)
    t0 = time.perf_counter()
    sums = bellman_all_sums(inst, inst.target)
    ms = (time.perf_counter() - t0) * 1000
    return _emit(
        {
            "schema": SCHEMA_VERSION,
            "algorithm": "bellman",
            "answer": inst.target in sums,
            "sums_count": sums.count(),
            "seed": None,
            "delta": 0.0,
            "dropped_items": inst.dropped,
            "timings_ms": round(ms, 3),
        },
        args,
    )


def cmd_unbounded(args) -> int:
    inst = _load(args)
    t0 = time.perf_counter()
    sums = unbounded_subset_sum(inst.values(), inst.target)
    ms = (time.perf_counter() - t0) * 1000
    return _emit(
        {
            "schema": SCHEMA_VERSION,
            "algorithm": "unbounded",
            "answer": inst.target in sums,
            "sums_count": sums.count(),
            "seed": None,
            "delta": 0.0,
            "dropped_items": inst.dropped,
            "timings_ms": round(ms, 3),
        },
        args,
    )


def cmd_polyspace(args) -> int:
    inst = _load(args)
    seed = _seed(args)
    t0 = time.perf_counter()
    answer = polyspace_decide(inst, seed, reps=args.reps, pool_size=args.pool_size)
    ms = (time.perf_counter() - t0) * 1000
    return _emit(
        {
            "schema": SCHEMA_VERSION,
            "algorithm": "polyspace",
            "answer": answer,
            "seed": seed,
            "delta": None,
            "reps": args.reps,
            "dropped_items": inst.dropped,
            "timings_ms": round(ms, 3),
        },
        args,
    )


def _parse_sweep(expr: str) -> list[int]:
    """Parse 't-sweep' values like '2^14..2^20' or '16384..1048576' (doubling)."""

    def one(tok: str) -> int:
        tok = tok.strip()
        if "^" in tok:
            base, exp = tok.split("^")
            return int(base) ** int(exp)
        return int(tok)

    parts = expr.split("..")
    if len(parts) == 1:
        return [one(parts[0])]
    lo, hi = one(parts[0]), one(parts[1])
    if lo <= 0 or hi < lo:
        raise InstanceFormatError(f"bad sweep range {expr!r}")
    out = []
    t = lo
    while t <= hi:
        out.append(t)
        t *= 2
    return out


def _bench_instance(t: int, n: int, seed: int) -> list[int]:
    import random as _random

    gen = _random.Random((seed << 20) ^ t ^ (n << 1))
    return sorted(gen.sample(range(1, t + 1), n))


def _bench_one(job) -> tuple[int, str, int, float]:
    t, n, algorithm, seed, delta = job
    items = _bench_instance(t, n, seed)
    t0 = time.perf_counter()
    if algorithm == "faster":
        faster_subset_sum(items, t, delta, Rng(seed))
    elif algorithm == "bellman":
        bellman_all_sums(Instance.from_items(items, t), t)
    elif algorithm == "unbounded":
        unbounded_subset_sum(items, t)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    ms = (time.perf_counter() - t0) * 1000
    return (t, algorithm, seed, ms)


def cmd_bench(args) -> int:
    ts = _parse_sweep(args.t_sweep)
    delta, _ = _clamp_delta(args.delta)
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    base_seed = _seed(args)
    jobs = [
        (t, args.n, alg, base_seed + rep, delta)
        for t in ts
        for alg in algorithms
        for rep in range(args.repeats)
    ]
    workers = int(os.environ.get("SUBSETSUM_THREADS", "1"))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_bench_one, jobs))
    else:
        rows = [_bench_one(j) for j in jobs]
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    print("t,algorithm,ms")
    for t, alg, seed, ms in rows:
        print(f"{t},{alg},{ms:.3f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="subsetsum",
        description="Exact SubsetSum solvers: randomized near-linear, "
        "deterministic unbounded, and a low-space circuit evaluator.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_delta=True):
        p.add_argument("instance", help="instance file, or '-' for stdin")
        p.add_argument("--target", type=int, default=None, help="override the file's target")
        p.add_argument(
            "--target-in-file",
            action="store_true",
            help="take the target from the file (the default)",
        )
        p.add_argument("--seed", type=int, default=None, help="rng seed (default: OS entropy)")
        p.add_argument(
            "--exit-status",
            action="store_true",
            help="exit 1 when the answer is no",
        )
        if with_delta:
            p.add_argument(
                "--delta",
                type=float,
                default=DEFAULT_DELTA,
                help=f"failure probability, clamped to (0, 1/4] (default {DEFAULT_DELTA})",
            )

    p = sub.add_parser("solve", help="randomized near-linear decision")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("solve-all-sums", help="all attainable sums up to the target")
    common(p)
    p.set_defaults(func=cmd_solve_all_sums)

    p = sub.add_parser("oracle", help="exact textbook dynamic program")
    common(p, with_delta=False)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("unbounded", help="deterministic unbounded solver")
    common(p, with_delta=False)
    p.set_defaults(func=cmd_unbounded)

    p = sub.add_parser("polyspace", help="low-space circuit evaluator decision")
    common(p, with_delta=False)
    p.add_argument("--reps", type=int, default=5, help="independent repetitions (default 5)")
    p.add_argument("--pool-size", type=int, default=None, help="prime pool size")
    p.set_defaults(func=cmd_polyspace)

    p = sub.add_parser("bench", help="timing sweep, CSV on stdout")
    p.add_argument("--t-sweep", required=True, help="e.g. 2^14..2^20 (doubling)")
    p.add_argument("--n", type=int, default=64, help="items per instance")
    p.add_argument("--algorithms", default="faster,bellman")
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
