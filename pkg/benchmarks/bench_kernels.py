"""Benchmark the numba kernels against their pure-numpy twins.

Run: python benchmarks/bench_kernels.py

Measures the coverage-grid kernels on a realistic workload (the 500x650 m
hexagon layout at r_l = 70 with a footprint-sized validation grid) and the
pairwise-separation kernel on a synthetic transition timeline.
"""

import math
import time

import numpy as np

from loiterpack import kernels
from loiterpack.geometry import AreaSpec, PackingKind
from loiterpack.packing import grid_points, pack

if not kernels.USING_NUMBA:
    raise SystemExit(
        "numba backend is disabled (LOITERPACK_BACKEND=numpy?); "
        "nothing to compare"
    )


def bench(label, fn, n_runs):
    fn()  # warm-up (first numba call compiles)
    tic = time.perf_counter()
    for _ in range(n_runs):
        result = fn()
    toc = time.perf_counter()
    per_run = (toc - tic) / n_runs
    print(f"{label:<44s} {per_run * 1e3:10.2f} ms/run")
    return per_run, result


def main():
    area = AreaSpec(500.0, 650.0)
    r_l, r_c = 70.0, 70.0
    layout = pack(area, r_l, PackingKind.HEXAGON)
    px, py = grid_points(area, r_c / 20.0)
    cx, cy = layout.center_arrays()
    phases = np.arange(90) * (2.0 * math.pi / 90)
    print(f"grid: {px.size} points, {cx.size} circles, {phases.size} phases\n")

    t_nb, r_nb = bench(
        "cycle_cover_count [numba]",
        lambda: kernels._cycle_cover_count_nb(px, py, cx, cy, r_l, r_c, 1e-9),
        20,
    )
    t_np, r_np = bench(
        "cycle_cover_count [numpy]",
        lambda: kernels.cycle_cover_count_np(px, py, cx, cy, r_l, r_c, 1e-9),
        20,
    )
    assert r_nb == r_np
    print(f"{'':<44s} numba speedup {t_np / t_nb:6.1f}x\n")

    t_nb, r_nb = bench(
        "min_instant_fraction [numba]",
        lambda: kernels._min_instant_fraction_nb(px, py, cx, cy, r_l, r_c, phases, 1e-9),
        3,
    )
    t_np, r_np = bench(
        "min_instant_fraction [numpy]",
        lambda: kernels.min_instant_fraction_np(px, py, cx, cy, r_l, r_c, phases, 1e-9),
        3,
    )
    assert r_nb == r_np
    print(f"{'':<44s} numba speedup {t_np / t_nb:6.1f}x\n")

    rng = np.random.default_rng(0)
    xs = rng.uniform(0, 650, size=(35, 4000))
    ys = rng.uniform(0, 650, size=(35, 4000))
    t_nb, r_nb = bench(
        "min_pairwise_distance [numba]",
        lambda: kernels._min_pairwise_distance_nb(xs, ys),
        10,
    )
    t_np, r_np = bench(
        "min_pairwise_distance [numpy]",
        lambda: kernels.min_pairwise_distance_np(xs, ys),
        10,
    )
    assert abs(r_nb - r_np) < 1e-12
    print(f"{'':<44s} numba speedup {t_np / t_nb:6.1f}x")


if __name__ == "__main__":
    main()
