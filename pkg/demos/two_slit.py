"""Two slits on the default lattice: no measurement, one measured slit, and the
additive baseline.

Run:  python demos/two_slit.py
"""
import numpy as np

from ctprob import classical_baseline, event_decomposition, find_null_events, pattern, preset

exp1 = preset("exp1")          # S=64, T=8, alpha=0.5, slits at 28 and 36, nothing measured
exp2 = preset("exp2")          # same geometry, slit 2 measured

p1 = pattern(exp1)
p2 = pattern(exp2)
base = classical_baseline(exp1)

# Scale everything by the Exp.1 screen total so the columns are readable.
Z = p1.total.real.sum()
print(" x   Exp.1     Exp.2     classical  interference")
for x in range(16, 48, 2):
    print(f"{x:2d}  {p1.total[x].real / Z:.5f}  {p2.total[x].real / Z:.5f}  "
          f"{base.total[x].real / Z:.5f}    {p1.interference[x].real / Z:+.5f}")

# Measuring a slit removes exactly the two cross classes E_12 and E_21.
phi = p1.slit_amps
cross = 2 * (phi[0] * np.conj(phi[1])).real
print("\nmax |Exp.1 - Exp.2 - 2Re(phi1 phi2*)| / direct:",
      np.max(np.abs((p1.total - p2.total).real - cross) / p1.direct))

# The four classes at one screen site.  E_12 and E_21 are complex conjugates.
x = 30
print(f"\nclasses at x={x}:")
for (k, l), val in event_decomposition(exp1, x):
    print(f"  E_{k}{l}: {val / Z:.6f}")

# Sites where the whole event is (nearly) null though a single-slit class is not.
for x in find_null_events(p1, rel_tol=1e-3):
    print(f"\nnull witness x={x}: Phi(E)/max = {abs(p1.total[x]) / p1.max_total():.2e}, "
          f"Phi(E_11)/max = {p1.slit_probs[0, x] / p1.max_total():.2e}, "
          f"Phi(E_22)/max = {p1.slit_probs[1, x] / p1.max_total():.2e}")
