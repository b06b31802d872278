"""Command-line surface: run, queries, enumerate-labelings, export, dense.

Exit codes: 0 on success, 1 on verification/cross-check failure, 2 on usage
errors.  Output ordering is deterministic (ascending x / y) regardless of
the parallelism degree; FPP_THREADS overrides the default worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from math import factorial
from typing import Sequence

from . import densesim
from .algorithms import (
    nlogn_query_bound,
    nlogn_query_count,
    phase_profile,
    reference_switch,
    sim_switch_circuit,
    six_query_n3,
    solve_profile,
    sqrt_bound_holds,
    sqrt_query_count,
    superperm_sim_switch,
    nlogn_circuit,
    sqrt_circuit,
)
from .circuit import export_circuit
from .errors import FppError
from .perms import (
    FactoradicLabeling,
    Labeling,
    enumerate_valid_labelings,
    labeling_from_text,
)

ALGORITHMS = (
    "switch",
    "sim-switch",
    "superperm",
    "six-query",
    "nlogn",
    "nlogn-reduced",
    "sqrt",
)


def _default_threads() -> int:
    env = os.environ.get("FPP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _load_labeling(spec: str, n: int) -> Labeling:
    if spec == "factoradic":
        return FactoradicLabeling(n)
    if spec.startswith("file:"):
        path = spec[len("file:") :]
        with open(path, "r", encoding="utf-8") as fh:
            labeling = labeling_from_text(fh.read(), name=spec)
        if labeling.n != n:
            raise FppError(f"labeling file has n={labeling.n}, expected n={n}")
        return labeling
    if spec.startswith("enumerate-index:"):
        if n != 3:
            raise FppError("enumerate-index labelings exist only for n=3")
        index = int(spec[len("enumerate-index:") :])
        labelings = enumerate_valid_labelings(3)
        if not 0 <= index < len(labelings):
            raise FppError(f"enumerate-index must be in [0, {len(labelings) - 1}]")
        return labelings[index]
    raise FppError(f"unknown labeling spec {spec!r}")


def _build(alg: str, n: int, labeling: Labeling):
    if alg == "switch":
        return reference_switch(n, labeling)
    if alg == "sim-switch":
        return sim_switch_circuit(n, labeling)
    if alg == "superperm":
        return superperm_sim_switch(n, labeling)
    if alg == "six-query":
        return six_query_n3(labeling)
    if alg == "nlogn":
        return nlogn_circuit(n)
    if alg == "nlogn-reduced":
        return nlogn_circuit(n, reduced=True)
    if alg == "sqrt":
        return sqrt_circuit(n, labeling)
    raise FppError(f"unknown algorithm {alg!r}")


def _check_compat(parser: argparse.ArgumentParser, alg: str, n: int) -> None:
    if alg == "six-query" and n != 3:
        parser.error("six-query requires --n 3")
    if alg == "superperm" and n not in (3, 4):
        parser.error("superperm requires --n 3 or --n 4")
    if alg == "nlogn-reduced" and n not in (4, 8):
        parser.error("nlogn-reduced requires --n 4 or --n 8")
    if n < 2:
        parser.error("--n must be at least 2")


def _parse_ys(spec: str, m: int, seed: int) -> list[int]:
    if spec == "all":
        return list(range(m))
    if spec.startswith("sample:"):
        count = int(spec[len("sample:") :])
        if count < 1:
            raise FppError("sample count must be positive")
        rng = random.Random(seed)
        return sorted(rng.sample(range(m), min(count, m)))
    y = int(spec)
    if not 0 <= y < m:
        raise FppError(f"y={y} outside [0, {m - 1}]")
    return [y]


def _cmd_run(args: argparse.Namespace) -> int:
    labeling = _load_labeling(args.labeling, args.n)
    target = _build(args.alg, args.n, labeling)
    m = factorial(args.n)
    ys = _parse_ys(args.y, m, args.seed)
    profile = phase_profile(target, labeling, processes=args.parallel)
    reports = [solve_profile(profile, y) for y in ys]
    all_pass = all(r.passed for r in reports)
    counts_ok = profile.counts_match

    if args.format == "structured":
        print(json.dumps(
            {
                "algorithm": args.alg,
                "n": args.n,
                "labeling": labeling.name,
                "query_count": profile.query_count,
                "expected_queries": profile.expected_queries,
                "counts_match": counts_ok,
                "reports": [json.loads(r.to_json()) for r in reports],
            },
            sort_keys=True,
        ))
    else:
        expected = profile.expected_queries
        suffix = f" (expected {expected})" if expected is not None else ""
        print(f"{args.alg} n={args.n} labeling={labeling.name} "
              f"queries={profile.query_count}{suffix}")
        print(f"residuals x-independent: {'yes' if profile.residuals_ok else 'no'}")
        if profile.failure:
            print(f"failure: {profile.failure}")
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            print(f"y={r.y}: solved={r.solved_y} {status}")
        print(f"RESULT: {'PASS' if all_pass and counts_ok else 'FAIL'} "
              f"({sum(r.passed for r in reports)}/{len(reports)})")
    return 0 if all_pass and counts_ok else 1


def _cmd_queries(args: argparse.Namespace) -> int:
    if not 2 <= args.n_max <= 10**6:
        raise FppError("--n-max must be between 2 and 1000000")
    header = ("n", "switch", "sim", "nlogn", "nlogn-bound", "sqrt", "sqrt-bound")
    rows = []
    ok = True
    for n in range(2, args.n_max + 1):
        nl = nlogn_query_count(n)
        nl_bound = nlogn_query_bound(n)
        sq = sqrt_query_count(n)
        sq_bound = (5 * n**0.5 + 1) * n
        if nl >= nl_bound or not sqrt_bound_holds(n):
            ok = False
        special = " six-query=6" if n == 3 else ""
        rows.append(
            f"{n} {n} {n * n} {nl} {nl_bound:.2f} {sq} {sq_bound:.2f}{special}"
        )
    print(" ".join(header))
    for row in rows:
        print(row)
    print(f"bounds hold for all n <= {args.n_max}: {'yes' if ok else 'NO'}")
    return 0 if ok else 1


def _cmd_enumerate(args: argparse.Namespace) -> int:
    labelings = enumerate_valid_labelings(3)
    if args.dump is not None:
        if not 0 <= args.dump < len(labelings):
            raise FppError(f"--dump index must be in [0, {len(labelings) - 1}]")
        from .perms import labeling_to_text

        sys.stdout.write(labeling_to_text(labelings[args.dump]))
        return 0
    print(f"{len(labelings)} valid labelings")
    if args.verbose:
        for idx, labeling in enumerate(labelings):
            words = " | ".join(
                ",".join(map(str, labeling.word(x).order)) for x in range(6)
            )
            print(f"[{idx}] {words}")
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    labeling = _load_labeling(args.labeling, args.n)
    target = _build(args.alg, args.n, labeling)
    if args.alg == "switch":
        raise FppError("the reference switch is not a gate-list circuit; nothing to export")
    sys.stdout.write(export_circuit(target))
    return 0


def _cmd_dense(args: argparse.Namespace) -> int:
    labeling = _load_labeling(args.labeling, args.n)
    validation = labeling.validate()
    if not validation.consistent:
        raise FppError(f"labeling {labeling.name!r} is inconsistent")
    circuit = _build(args.alg, args.n, labeling)
    m = factorial(args.n)
    ys = _parse_ys(args.y, m, args.seed)
    profile = phase_profile(circuit, labeling)
    failures = 0
    for y in ys:
        units = densesim.build_promise_unitaries(args.n, y, validation.table)
        result = densesim.run_dense(circuit, units, seed=args.state_seed)
        symbolic = solve_profile(profile, y).solved_y
        ok = (
            result.measured_y == symbolic == y
            and result.peak_probability >= 1 - densesim.PROBABILITY_TOL
        )
        failures += not ok
        print(
            f"y={y}: measured={result.measured_y} symbolic={symbolic} "
            f"peak={result.peak_probability:.12f} {'PASS' if ok else 'FAIL'}"
        )
    print(f"RESULT: {'PASS' if failures == 0 else 'FAIL'}")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpp",
        description="Exact verification of causal circuits for Fourier promise problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="build a circuit and verify it for chosen y values")
    run.add_argument("--alg", required=True, choices=ALGORITHMS)
    run.add_argument("--n", required=True, type=int)
    run.add_argument("--labeling", default="factoradic")
    run.add_argument("--y", default="all")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--parallel", type=int, default=_default_threads())
    run.add_argument("--format", choices=("text", "structured"), default="text")
    run.set_defaults(func=_cmd_run)

    queries = sub.add_parser("queries", help="query-count table and bound checks")
    queries.add_argument("--n-max", type=int, default=16)
    queries.set_defaults(func=_cmd_queries)

    enum = sub.add_parser("enumerate-labelings", help="count consistent n=3 labelings")
    enum.add_argument("--verbose", action="store_true")
    enum.add_argument("--dump", type=int, default=None,
                      help="print labeling #INDEX in the labeling-file format")
    enum.set_defaults(func=_cmd_enumerate)

    export = sub.add_parser("export", help="print the stable circuit description")
    export.add_argument("--alg", required=True, choices=ALGORITHMS)
    export.add_argument("--n", required=True, type=int)
    export.add_argument("--labeling", default="factoradic")
    export.set_defaults(func=_cmd_export)

    dense = sub.add_parser("dense", help="dense numerical cross-check (n <= 3)")
    dense.add_argument("--alg", required=True, choices=("sim-switch", "six-query", "superperm"))
    dense.add_argument("--n", required=True, type=int)
    dense.add_argument("--labeling", default="factoradic")
    dense.add_argument("--y", default="all")
    dense.add_argument("--seed", type=int, default=0)
    dense.add_argument("--state-seed", type=int, default=None,
                       help="seed for random initial states (default: |0> states)")
    dense.set_defaults(func=_cmd_dense)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "alg") and hasattr(args, "n"):
        _check_compat(parser, args.alg, args.n)
    try:
        return args.func(args)
    except FppError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
