"""Density matrices behind the slits and their evolution to the screen.

Run:  python demos/density_matrix.py
"""
import numpy as np

from ctprob import assemble_density, diagonal_pattern, evolve_density, pattern, preset, slit_wavefunctions

for name in ("exp1", "exp2", "nslit3m1"):
    exp = preset(name)
    psis = slit_wavefunctions(exp, exp.barrier_t + 1)
    rho = assemble_density(psis, exp.measured)
    rep = rho.report()
    print(f"{name:9s} t={rho.time}  rank={rep['rank']}  "
          f"min eig/trace={rep['min_eigenvalue'] / rep['trace']:+.1e}")

    # Evolve to the screen and compare with building rho there directly.
    at_screen = evolve_density(rho, exp, exp.screen_t - rho.time)
    direct = assemble_density(slit_wavefunctions(exp, exp.screen_t), exp.measured)
    gap = np.max(np.abs(at_screen.entries - direct.entries)) / np.max(np.abs(direct.entries))
    diag_gap = np.max(np.abs(diagonal_pattern(direct) - pattern(exp).total.real)) / direct.trace
    print(f"          evolve-vs-assemble {gap:.1e}   diag-vs-pattern {diag_gap:.1e}")
