"""Brute-force path enumeration against transfer-matrix propagation.

Run:  python demos/evaluators.py
"""
import time

from ctprob import LatticeConfig, path_sum_fast, path_sum_naive
from ctprob.lattice import count_paths

for sites, steps in [(6, 4), (8, 5), (10, 6)]:
    cfg = LatticeConfig(sites, steps, alpha=0.5, masks={steps // 2: {1, sites - 2}})
    src, x = sites // 2, sites // 2
    t0 = time.perf_counter()
    slow = path_sum_naive(cfg, src, x)
    t1 = time.perf_counter()
    fast = path_sum_fast(cfg, src, x)
    t2 = time.perf_counter()
    print(f"S={sites:2d} T={steps}  paths={count_paths(cfg, src, x):7d}  "
          f"naive {t1 - t0:7.4f}s  fast {t2 - t1:7.5f}s  |diff|={abs(slow - fast):.1e}")
