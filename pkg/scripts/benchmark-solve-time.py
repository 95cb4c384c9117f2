#!/usr/bin/env python3
"""
Solver Timing Benchmark Script

This script measures the wall time of the box-constrained minimizers behind
the approximators: the convex PCM solve (PLSE+), the DCA solve (DLSE) and the
multistart solve (FNN). Networks are randomly initialized with the Case-2
dimensions by default. Results go to the console and optionally to a JSON file.

Usage:
    python benchmark-solve-time.py [--solves N] [--x-dim N] [--u-dim N] \
        [--num-terms N] [--multistart N] [--seed N] [--output OUTPUT_FILE]

Example:
    python scripts/benchmark-solve-time.py \
        --solves 200 \
        --u-dim 5 \
        --output solve_times.json
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

# Add the package directory to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "pcm_amortized"))

from pcm_amortized.approximators import ModelKind, NetworkShape, init_network
from pcm_amortized.numerics import NumericsError, RngSeed
from pcm_amortized.solvers import Box, SolverError, SolverOpts, solve_dca, solve_multistart, solve_pcm


@dataclass
class SolveSummary:
    """Timing statistics of one solver."""
    solver: str
    model_kind: str
    solves: int
    converged: int
    failed: int
    mean_ms: float
    median_ms: float
    p95_ms: float
    max_ms: float
    mean_iterations: float


def percentile(data: list[float], p: float) -> float:
    """Calculate the p-th percentile of a list of values."""
    if not data:
        return 0.0
    sorted_data = sorted(data)
    index = int(len(sorted_data) * p / 100)
    return sorted_data[min(index, len(sorted_data) - 1)]


def benchmark(
    solver: str,
    kind: ModelKind,
    solve: Callable[[np.ndarray], object],
    X: np.ndarray,
) -> SolveSummary:
    """Time ``solve`` on every row of ``X``."""
    durations, iterations = [], []
    converged = failed = 0
    print(f"\nBenchmarking {solver} ({kind.value})")
    print(f"  Solves: {X.shape[0]}")
    for i, x in enumerate(X):
        try:
            result = solve(x)
        except (SolverError, NumericsError) as e:
            failed += 1
            print(f"  Solve {i} failed: {e}")
            continue
        durations.append(result.wall_seconds * 1000)
        iterations.append(result.iterations)
        converged += int(result.converged)
        if (i + 1) % 50 == 0:
            print(f"  Progress: {i + 1}/{X.shape[0]}")

    return SolveSummary(
        solver=solver,
        model_kind=kind.value,
        solves=X.shape[0],
        converged=converged,
        failed=failed,
        mean_ms=statistics.mean(durations) if durations else 0.0,
        median_ms=statistics.median(durations) if durations else 0.0,
        p95_ms=percentile(durations, 95),
        max_ms=max(durations) if durations else 0.0,
        mean_iterations=statistics.mean(iterations) if iterations else 0.0,
    )


def print_summary(summary: SolveSummary) -> None:
    print(f"\n{summary.solver} ({summary.model_kind})")
    print(f"  Converged: {summary.converged}/{summary.solves}, failed: {summary.failed}")
    print(f"  Mean: {summary.mean_ms:.3f} ms, median: {summary.median_ms:.3f} ms")
    print(f"  P95: {summary.p95_ms:.3f} ms, max: {summary.max_ms:.3f} ms")
    print(f"  Mean iterations: {summary.mean_iterations:.1f}")


def main() -> int:
    parser = argparse.ArgumentParser(
        description="Benchmark solve times of the approximator minimizers",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    # Case-2 sized problems
    python scripts/benchmark-solve-time.py --solves 200

    # Scalar problems with more multistart runs
    python scripts/benchmark-solve-time.py --x-dim 1 --u-dim 1 --multistart 16
        """
    )
    parser.add_argument("--solves", type=int, default=100, help="Solves per solver")
    parser.add_argument("--x-dim", type=int, default=4, help="Dimension of x")
    parser.add_argument("--u-dim", type=int, default=5, help="Dimension of u")
    parser.add_argument("--num-terms", type=int, default=20, help="Affine terms per network")
    parser.add_argument("--multistart", type=int, default=8, help="Multistart count for the FNN solve")
    parser.add_argument("--seed", type=int, default=0, help="Root seed")
    parser.add_argument("--output", "-o", help="Write the summaries to this JSON file")
    args = parser.parse_args()

    seed = RngSeed(args.seed)
    shape = NetworkShape(x_dim=args.x_dim, u_dim=args.u_dim, num_terms=args.num_terms)
    box = Box.uniform(-1.0, 1.0, args.u_dim)
    opts = SolverOpts(multistart_count=args.multistart)
    X = seed.stream("benchmark/x").uniform(-1.0, 1.0, size=(args.solves, args.x_dim))

    plse = init_network(ModelKind.PLSE_PLUS, shape, seed)
    dlse = init_network(ModelKind.DLSE, shape, seed)
    fnn = init_network(ModelKind.FNN, shape, seed)

    summaries = [
        benchmark("solve_pcm", ModelKind.PLSE_PLUS, lambda x: solve_pcm(plse, x, box, opts), X),
        benchmark("solve_dca", ModelKind.DLSE, lambda x: solve_dca(dlse, box, x, opts), X),
        benchmark("solve_multistart", ModelKind.FNN, lambda x: solve_multistart(fnn, x, box, opts), X),
    ]

    print("\n" + "=" * 60)
    print("SOLVE TIME SUMMARY")
    print("=" * 60)
    for summary in summaries:
        print_summary(summary)

    if args.output:
        with open(args.output, "w") as f:
            json.dump([asdict(s) for s in summaries], f, indent=2)
        print(f"\nResults written to {args.output}")

    return 0 if all(s.failed == 0 for s in summaries) else 1


if __name__ == "__main__":
    sys.exit(main())
