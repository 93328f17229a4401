"""Timing comparison of the pure and compiled kernel backends.

Runs the two hot loops (swarm tick, grid search) on growing problem sizes
against every importable backend and prints a table with the speedup of
the compiled extension over the reference implementation.

Usage:
    python3 benchmarks/bench_kernels.py [--quick] [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from singling.kernels import available_backends


def bench_step(backend, n: int, repeats: int) -> float:
    rng = np.random.default_rng(42)
    pos = rng.uniform(-3.0, 3.0, size=(n, 2))
    shepherd = np.array([-4.0, -4.0])
    out_pos = np.empty_like(pos)
    out_vel = np.empty_like(pos)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        backend.step_positions(pos, shepherd, 1.0, 4.0, 0.5, 1.0, 0.5,
                               True, False, out_pos, out_vel)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_astar(backend, side: int, repeats: int) -> float:
    rng = np.random.default_rng(42)
    cells = rng.random(side * side) < 0.25
    cells[0] = False
    cells[-1] = False
    blocked = bytes(cells.astype(np.uint8).tobytes())
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        backend.astar_grid(blocked, side, side, 0, side * side - 1)
        best = min(best, time.perf_counter() - t0)
    return best


def fmt(seconds: float) -> str:
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    if seconds < 1.0:
        return f"{seconds * 1e3:8.2f} ms"
    return f"{seconds:8.2f} s "


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--quick", action="store_true",
                        help="smallest sizes and fewer repeats")
    parser.add_argument("--repeats", type=int, default=None,
                        help="timing repeats per case (best-of)")
    args = parser.parse_args()

    backends = available_backends()
    repeats = args.repeats or (3 if args.quick else 7)
    swarm_sizes = [25, 100] if args.quick else [25, 100, 400, 1000]
    grid_sides = [64] if args.quick else [64, 128, 256]

    print(f"backends: {', '.join(backends)}  (best of {repeats} runs)")
    header = f"{'case':<24}" + "".join(f"{name:>14}" for name in backends)
    if "pure" in backends and "compiled" in backends:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    cases = [(f"step n={n}", bench_step, n) for n in swarm_sizes]
    cases += [(f"astar {s}x{s}", bench_astar, s) for s in grid_sides]
    for label, fn, size in cases:
        times = {name: fn(mod, size, repeats) for name, mod in backends.items()}
        row = f"{label:<24}" + "".join(f"{fmt(times[n]):>14}" for n in backends)
        if "pure" in times and "compiled" in times:
            row += f"{times['pure'] / times['compiled']:>9.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
