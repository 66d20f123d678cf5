#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-numpy fallback.

Runs the per-seed recurrence over a sample of seeds on one transition
table and reports edge-relaxations per second for each backend, after
checking that both produce identical results.

    python benchmarks/bench_kernel.py --height 8 --variant interior --seeds 48
"""
import argparse
import time

import numpy as np

from cyldom.kernels import available_backends, get_backend
from cyldom.states import enumerate_valid_states
from cyldom.transitions import Variant, build_transition_table


def bench(kernel, tt, cost32, seeds, n_max, p_max, window):
    t0 = time.perf_counter()
    results = [kernel.run_seed(tt.indptr, tt.src, cost32, s, n_max, p_max,
                               window, False) for s in seeds]
    return time.perf_counter() - t0, results


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--height", type=int, default=8)
    parser.add_argument("--variant", choices=[v.value for v in Variant],
                        default="interior")
    parser.add_argument("--seeds", type=int, default=48)
    parser.add_argument("--n-max", type=int, default=40)
    parser.add_argument("--p-max", type=int, default=16)
    parser.add_argument("--window", type=int, default=10)
    args = parser.parse_args()

    variant = Variant(args.variant)
    stable = enumerate_valid_states(args.height)
    tt = build_transition_table(stable, variant)
    cost32 = np.ascontiguousarray(tt.cost, dtype=np.int32)
    rng = np.random.default_rng(0)
    seeds = sorted(rng.choice(tt.n_states, size=min(args.seeds, tt.n_states),
                              replace=False).tolist())
    work = len(seeds) * args.n_max * tt.n_transitions
    print(f"h={args.height} {variant.value}: {tt.n_states} states, "
          f"{tt.n_transitions} transitions, {len(seeds)} seeds x {args.n_max} columns")

    timings, outputs = {}, {}
    for name in available_backends():
        kernel = get_backend(name)
        elapsed, results = bench(kernel, tt, cost32, seeds, args.n_max,
                                 args.p_max, args.window)
        timings[name], outputs[name] = elapsed, results
        print(f"  {name:7s} {elapsed:8.3f} s   {work / elapsed / 1e6:10.1f} M relax/s")

    if len(outputs) == 2:
        for rc, rp in zip(outputs["c"], outputs["python"]):
            assert np.array_equal(rc[0], rp[0]) and rc[1:] == rp[1:], \
                "backends disagree"
        print(f"  outputs identical; speedup x{timings['python'] / timings['c']:.1f}")
    else:
        print("  (compiled backend unavailable; nothing to compare)")


if __name__ == "__main__":
    main()
