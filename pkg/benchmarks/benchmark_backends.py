#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Covers the hot paths: the point-at-infinity sweep over a grid block, the
writhe pair sum, the crossing counter and the distance field.

Usage:
    python benchmarks/benchmark_backends.py
    python benchmarks/benchmark_backends.py --sizes 256 512 1024 --block 4096
    python benchmarks/benchmark_backends.py --output results.json
"""

import argparse
import json
import time

import numpy as np

from knotfields import EvalConfig, knots
from knotfields import _kernels_numpy as kp

try:
    from knotfields import _kernels_numba as kn
    NUMBA_AVAILABLE = True
except ImportError:
    kn = None
    NUMBA_AVAILABLE = False


def timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_omega_block(n_seg, n_nodes, results):
    pts = np.ascontiguousarray(knots.trefoil(n_seg))
    offs = np.array([0, n_seg], dtype=np.int64)
    rng = np.random.default_rng(0)
    xs = rng.normal(size=(n_nodes, 3)) * 4.0
    ninf = np.array([0.0, 0.0, 1.0])
    rnd = EvalConfig().fallback_axis
    out = np.empty(n_nodes)
    st = np.empty(n_nodes, dtype=np.int8)

    def run(impl):
        impl.omega_inf_block(pts, offs, xs, ninf, rnd, 1e-6, False, out, st)

    if NUMBA_AVAILABLE:
        run(kn)  # compile
        t_nb = timeit(lambda: run(kn))
    else:
        t_nb = float("inf")
    t_np = timeit(lambda: run(kp))
    row = {"kernel": "omega_inf_block", "segments": n_seg, "nodes": n_nodes,
           "numba_s": t_nb, "numpy_s": t_np,
           "speedup": t_np / t_nb if t_nb > 0 else 0.0}
    results.append(row)
    print(f"omega_inf_block  n={n_seg:5d} nodes={n_nodes:6d}  "
          f"numba {t_nb:8.4f}s  numpy {t_np:8.4f}s  x{row['speedup']:.1f}")


def bench_writhe(n_seg, results):
    pts = np.ascontiguousarray(knots.trefoil(n_seg))
    if NUMBA_AVAILABLE:
        kn.writhe_sum(pts)
        t_nb = timeit(lambda: kn.writhe_sum(pts))
    else:
        t_nb = float("inf")
    t_np = timeit(lambda: kp.writhe_sum(pts))
    row = {"kernel": "writhe_sum", "segments": n_seg,
           "numba_s": t_nb, "numpy_s": t_np,
           "speedup": t_np / t_nb if t_nb > 0 else 0.0}
    results.append(row)
    print(f"writhe_sum       n={n_seg:5d}               "
          f"numba {t_nb:8.4f}s  numpy {t_np:8.4f}s  x{row['speedup']:.1f}")


def bench_crossings(n_seg, results):
    pts = knots.trefoil(n_seg)
    x = np.array([1.0, 2.0, 12.0])
    nv = pts - x
    nv = np.ascontiguousarray(nv / np.linalg.norm(nv, axis=1, keepdims=True))
    if NUMBA_AVAILABLE:
        assert kn.arc_crossings(nv) == kp.arc_crossings(nv)
        t_nb = timeit(lambda: kn.arc_crossings(nv))
    else:
        t_nb = float("inf")
    t_np = timeit(lambda: kp.arc_crossings(nv))
    row = {"kernel": "arc_crossings", "segments": n_seg,
           "numba_s": t_nb, "numpy_s": t_np,
           "speedup": t_np / t_nb if t_nb > 0 else 0.0}
    results.append(row)
    print(f"arc_crossings    n={n_seg:5d}               "
          f"numba {t_nb:8.4f}s  numpy {t_np:8.4f}s  x{row['speedup']:.1f}")


def bench_distance(n_seg, n_nodes, results):
    pts = np.ascontiguousarray(knots.trefoil(n_seg))
    offs = np.array([0, n_seg], dtype=np.int64)
    seg = np.roll(pts, -1, axis=0) - pts
    seg_len = np.ascontiguousarray(np.linalg.norm(seg, axis=1))
    local_s = np.ascontiguousarray(
        np.concatenate([[0.0], np.cumsum(seg_len[:-1])]))
    xs = np.random.default_rng(1).normal(size=(n_nodes, 3)) * 4.0
    d = np.empty(n_nodes)
    s = np.empty(n_nodes)
    c = np.empty(n_nodes, dtype=np.int64)

    def run(impl):
        impl.distance_block(pts, offs, local_s, seg_len, xs, d, s, c)

    if NUMBA_AVAILABLE:
        run(kn)
        t_nb = timeit(lambda: run(kn))
    else:
        t_nb = float("inf")
    t_np = timeit(lambda: run(kp))
    row = {"kernel": "distance_block", "segments": n_seg, "nodes": n_nodes,
           "numba_s": t_nb, "numpy_s": t_np,
           "speedup": t_np / t_nb if t_nb > 0 else 0.0}
    results.append(row)
    print(f"distance_block   n={n_seg:5d} nodes={n_nodes:6d}  "
          f"numba {t_nb:8.4f}s  numpy {t_np:8.4f}s  x{row['speedup']:.1f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[256, 512, 1024])
    ap.add_argument("--block", type=int, default=8192,
                    help="evaluation points per grid block")
    ap.add_argument("--output", help="write results as JSON")
    args = ap.parse_args()

    print(f"numba available: {NUMBA_AVAILABLE}")
    results = []
    for n in args.sizes:
        bench_omega_block(n, args.block, results)
    for n in args.sizes:
        bench_writhe(n, results)
    for n in args.sizes:
        bench_crossings(n, results)
    bench_distance(args.sizes[-1], args.block, results)

    if NUMBA_AVAILABLE:
        speedups = [r["speedup"] for r in results if np.isfinite(r["speedup"])]
        print(f"geometric-mean speedup: "
              f"{np.exp(np.mean(np.log(speedups))):.1f}x")
    if args.output:
        with open(args.output, "w") as f:
            json.dump({"numba_available": NUMBA_AVAILABLE,
                       "results": results}, f, indent=2)
        print(f"results written to {args.output}")


if __name__ == "__main__":
    main()
