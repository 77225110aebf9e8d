"""Per-slit wave functions and the non-normalized density matrix.

The wave function of slit ``k`` at slice ``t`` is the path sum from the
source through slit ``k`` to each site at ``t``.  Measured slits contribute
one rank-1 term each; the unmeasured slits form a single pure preparation
event, so their wave functions are summed before taking the outer product.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .experiments import SlitExperiment
from .lattice import delta, kernel, propagate


@dataclass(frozen=True)
class WaveFunction:
    values: np.ndarray
    time: int
    label: int


@dataclass(frozen=True)
class DensityMatrix:
    """``rho[x_plus, x_minus]`` at slice ``time``."""

    entries: np.ndarray
    time: int
    rank_bound: int

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def report(self) -> dict:
        """Hermiticity residual, smallest eigenvalue and numerical rank."""
        rho = self.entries
        herm = float(np.max(np.abs(rho - rho.conj().T), initial=0.0))
        ev = self.eigenvalues()
        top = float(max(np.max(np.abs(ev), initial=0.0), 0.0))
        rank = int(np.sum(ev > 1e-10 * top)) if top > 0 else 0
        return {
            "time": self.time,
            "trace": self.trace,
            "hermiticity_residual": herm,
            "min_eigenvalue": float(ev.min()) if ev.size else 0.0,
            "rank": rank,
            "rank_bound": self.rank_bound,
        }


def slit_wavefunctions(exp: SlitExperiment, t: int) -> list[WaveFunction]:
    """``psi_k`` at slice ``t`` for every slit, in slit order."""
    if not exp.barrier_t <= t <= exp.screen_t:
        raise DomainError(f"t must lie in [{exp.barrier_t}, {exp.screen_t}], got {t}")
    out = []
    for k in range(1, exp.n + 1):
        cfg = exp.slit_lattice(k)
        psi = propagate(delta(cfg, exp.source), cfg, 0, t)
        out.append(WaveFunction(psi, t, k))
    return out


def _rank_one(v):
    m = np.outer(v, np.conj(v))
    # fused multiply-adds can break conj symmetry in the last bit
    return 0.5 * (m + m.conj().T)


def assemble_density(components, measured=frozenset()) -> DensityMatrix:
    """``sum_{k measured} psi_k psi_k* + Psi Psi*`` with ``Psi`` the unmeasured sum."""
    components = list(components)
    if not components:
        raise DomainError("no components")
    times = {c.time for c in components}
    if len(times) != 1:
        raise DomainError(f"components live at different slices: {sorted(times)}")
    measured = frozenset(measured)
    terms = [c.values for c in components if c.label in measured]
    free = [c.values for c in components if c.label not in measured]
    if free:
        psi = np.zeros_like(free[0])
        for v in free:
            psi = psi + v
        terms.append(psi)
    rho = np.zeros((terms[0].size, terms[0].size), dtype=complex)
    for v in terms:
        rho = rho + _rank_one(v)
    return DensityMatrix(rho, times.pop(), len(terms))


def density_for(exp: SlitExperiment, t: int | None = None) -> DensityMatrix:
    t = exp.screen_t if t is None else t
    return assemble_density(slit_wavefunctions(exp, t), exp.measured)


def diagonal_pattern(rho: DensityMatrix) -> np.ndarray:
    """Real diagonal of ``rho``; raises if the imaginary part is not negligible."""
    d = np.diagonal(rho.entries)
    scale = max(1.0, float(np.max(np.abs(d), initial=0.0)))
    if np.max(np.abs(d.imag), initial=0.0) > 1e-12 * scale:
        raise DomainError("density diagonal is not real")
    return d.real.copy()


def evolve_density(rho: DensityMatrix, exp: SlitExperiment, steps: int) -> DensityMatrix:
    """Evolve by ``steps`` slices: ``rho -> (M K) rho (M K)^H`` per slice."""
    target = rho.time + steps
    if steps < 0 or target > exp.screen_t:
        raise DomainError(f"cannot evolve from slice {rho.time} by {steps}")
    cfg = exp.lattice()
    K = kernel(cfg)
    out = rho.entries
    for t in range(rho.time + 1, target + 1):
        step = K * cfg.projector(t)[:, None]
        out = step @ out @ step.conj().T
        out = 0.5 * (out + out.conj().T)
    return DensityMatrix(out, target, rho.rank_bound)


def check_density(rho: DensityMatrix) -> dict[str, float]:
    """Residuals of hermiticity and positivity relative to the trace."""
    rep = rho.report()
    tr = max(rho.trace, np.finfo(float).tiny)
    return {
        "hermitian": rep["hermiticity_residual"],
        "psd": max(0.0, -rep["min_eigenvalue"] / tr),
        "rank_excess": max(0, rep["rank"] - rho.rank_bound),
    }
