"""Trajectory pairs, adjoints and the complex measure on a tiny lattice.

Run:  python demos/event_algebra.py
"""
import numpy as np

from ctprob import (
    ExplicitEvent,
    LatticeConfig,
    MeasureContext,
    SymbolicEvent,
    adjoint,
    classify,
    expand_symbolic,
    measure,
    verify_axioms,
)
from ctprob.core import pure_event, rectangle

# Five sites, two steps, the middle slice open only at sites 1 and 3.
lattice = LatticeConfig(sites=5, steps=2, alpha=0.7, masks={1: {1, 3}})
ctx = MeasureContext.from_lattice(lattice, source=2)
print(f"|Omega_plus| = {len(ctx)}, |Omega| = {ctx.size}")

# An elementary event pairs a forward path with a backward one.
pair = ctx.pair(0, 3)
print("pair:   ", pair.plus.sites, pair.minus.sites, pair.minus.orientation)
print("adjoint:", adjoint(pair).plus.sites, adjoint(pair).minus.sites)
print("Phi(pair) =", measure(ExplicitEvent({pair}), ctx))

# A rectangle with different legs is not hermitian and may have a complex value.
A, B = ctx.omega_plus[:3], ctx.omega_plus[3:6]
rect = rectangle(ctx, A, B)
print("\nA x rev(B):", classify(rect, ctx), measure(rect, ctx))

# A x rev(A) is pure; its value is |sum phi|^2.
pure = pure_event(ctx, A)
print("A x rev(A):", classify(pure, ctx), measure(pure, ctx),
      abs(sum(ctx.amplitude[:3])) ** 2)

# Seeing the particle at slit 3 (t=1) and at screen site 4 (t=2).
seen = SymbolicEvent(confirm={(0, 2), (1, 3), (2, 4)})
print("\nE_x:", len(expand_symbolic(seen, ctx)), "pairs,", classify(seen, ctx),
      measure(seen, ctx))

# Random-event axiom check on a larger random context.
rep = verify_axioms(MeasureContext.random(100, seed=1), trials=300, seed=1)
print("\naxioms passed:", rep.passed, " Phi(Omega) =", rep.phi_omega)
print("worst residuals:", {k: f"{getattr(rep, k):.1e}" for k in
                           ("additivity", "conjugation", "factorization", "pure_relative")})
