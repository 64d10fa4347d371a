#!/usr/bin/env python3
"""Compare the pure-NumPy and compiled kernel backends.

Runs the full partitioner on a ladder of generated instances under each
backend, checks the outputs are bit-identical, and prints wall times with the
speedup.  Usage:

    python3 benchmarks/compare_backends.py [--repeats 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

import dhgpart as dp
from dhgpart import kernels


def run_once(g, cfg):
    t = time.perf_counter()
    part, _ = dp.partition(g, cfg)
    return time.perf_counter() - t, part


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=3, help="timed repeats per cell")
    args = ap.parse_args()

    if "compiled" not in kernels.available_backends():
        print("compiled backend not built; nothing to compare")
        return 1

    ladder = [
        (500, 750, 5, 8),
        (2000, 2500, 6, 16),
        (4000, 5000, 6, 16),
        (8000, 10000, 6, 16),
    ]
    print(f"{'nodes':>6} {'edges':>6} {'pins':>7} {'pure':>10} {'compiled':>10} {'speedup':>8}")
    for nodes, edges, max_pins, omega in ladder:
        g = dp.parse_dhg(dp.generate_dhg(nodes, edges, max_pins, seed=7))
        delta = max(int(g.node_in.lengths().max()), 4 * omega)
        cfg = dp.Config(dp.Constraints(omega, delta))
        times = {}
        parts = {}
        for backend in ("pure", "compiled"):
            kernels.set_backend(backend)
            samples = []
            for _ in range(args.repeats):
                dt, part = run_once(g, cfg)
                samples.append(dt)
            times[backend] = min(samples)
            parts[backend] = part
        kernels.set_backend("compiled")
        if not np.array_equal(parts["pure"].assign, parts["compiled"].assign):
            print("BACKEND MISMATCH — outputs differ, benchmark aborted")
            return 1
        print(
            f"{nodes:>6} {edges:>6} {g.num_pins():>7} "
            f"{times['pure'] * 1e3:>8.1f}ms {times['compiled'] * 1e3:>8.1f}ms "
            f"{times['pure'] / times['compiled']:>7.2f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
