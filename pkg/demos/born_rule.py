"""Detection frequencies converge to the normalized pattern.

Run:  python demos/born_rule.py
"""
import numpy as np

from ctprob import born_check, normalize, pattern, preset, sample

exp = preset("exp1")
dist = normalize(pattern(exp))
print(f"Z = {dist.Z:.4e}, most likely site {int(np.argmax(dist.probs))}")

for n in (10**3, 10**4, 10**5, 10**6):
    rep = sample(dist, n, seed=0)
    print(f"N={n:>8d}  max|p - P| = {rep.deviations.max():.2e}  "
          f"all bins within 4 sigma: {bool(np.all(rep.passed))}")

rep = born_check(exp, 10**5, seed=1)
print("\npattern route vs density route:", f"{rep.route_gap:.1e}", " passed:", rep.passed)
