#!/usr/bin/env python3
"""Benchmark the Monte Carlo sampling kernel: numba JIT versus pure numpy.

Both paths consume the same uniform draws, so the timing comparison is
apples to apples and the results must agree. Run directly:

    python3 benchmarks/bench_mc.py [--samples N] [--repeats R]
"""

import argparse
import time

import numpy as np

from emrcache._kernels import numba_sample_sums, numpy_sample_sums
from emrcache.delay import DelayCase, MonteCarloConfig, monte_carlo_delay
from emrcache.placement import PlacementMode, plan_scenario
from emrcache.scenario import reference_scenario


def time_kernel(fn, u, cum, values, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(u, cum, values)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=2_000_000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    scenario = reference_scenario()
    weights = np.array([loc.probability for loc in scenario.locations])
    cum = np.cumsum(weights / weights.sum())
    values = np.array([10.24, 12.135, 12.135, 0.341, 0.341])
    u = np.random.default_rng(0).random(args.samples)

    rows = []
    np_time, np_result = time_kernel(numpy_sample_sums, u, cum, values, args.repeats)
    rows.append(("numpy", np_time, np_result[0]))

    if numba_sample_sums is not None:
        numba_sample_sums(u[:64], cum, values)  # trigger the JIT compile
        nb_time, nb_result = time_kernel(numba_sample_sums, u, cum, values, args.repeats)
        rows.append(("numba", nb_time, nb_result[0]))
        rel = abs(nb_result[0] - np_result[0]) / abs(np_result[0])
        assert rel < 1e-9, f"backends disagree: {rel}"
    else:
        print("numba unavailable (or disabled via EMRCACHE_NO_NUMBA); numpy only")

    print(f"\nkernel timing, {args.samples:,} samples (best of {args.repeats}):")
    for name, seconds, total in rows:
        rate = args.samples / seconds / 1e6
        print(f"  {name:6s} {seconds * 1e3:9.2f} ms   {rate:8.1f} Msamples/s   sum={total:.6f}")
    if len(rows) == 2:
        print(f"  speedup: {rows[0][1] / rows[1][1]:.2f}x")

    plan = plan_scenario(scenario, PlacementMode.REFERENCE)
    config = MonteCarloConfig(samples=args.samples, seed=42)
    t0 = time.perf_counter()
    result = monte_carlo_delay(plan, config, scenario.locations, scenario.rates,
                               DelayCase.BEST)
    elapsed = time.perf_counter() - t0
    print(f"\nend-to-end estimate: {result.minutes:.3f} min "
          f"(se {result.std_error:.5f}) in {elapsed * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
