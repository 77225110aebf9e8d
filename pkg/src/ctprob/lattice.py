"""One-dimensional space-time lattice, kinetic phase amplitudes and path sums.

A path picks one site per time slice ``t = 0..T``.  Its amplitude is
``exp(i * alpha * sum_t (x_{t+1} - x_t)**2)``, the discretised free action
without a normalization constant.  Path sums are evaluated two ways:

* :func:`path_sum_naive` enumerates every admissible path (exponential),
* :func:`path_sum_fast` multiplies masked one-step transfer matrices
  ``M_t K`` (polynomial).

Walls are hard: paths never leave ``[0, S)``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from .core import Path
from .errors import CapacityError, DomainError, InvalidPathError

#: Largest number of paths :func:`enumerate_paths` will materialise.
PATH_GUARD = 10**7


@dataclass(frozen=True)
class LatticeConfig:
    """Lattice geometry.

    ``hop_range=None`` means unrestricted hops.  ``masks`` maps a time slice
    to its open sites; slices not listed are fully open.
    """

    sites: int
    steps: int
    alpha: float = 0.5
    hop_range: int | None = None
    masks: Mapping[int, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        if int(self.sites) != self.sites or self.sites < 2:
            raise DomainError("need at least two sites")
        if int(self.steps) != self.steps or self.steps < 1:
            raise DomainError("need at least one time step")
        if not np.isfinite(self.alpha):
            raise DomainError("alpha must be finite")
        if self.hop_range is not None and not 1 <= self.hop_range <= self.sites - 1:
            raise DomainError(f"hop_range must lie in [1, {self.sites - 1}] or be None")
        masks = {}
        for t, opened in dict(self.masks).items():
            t = int(t)
            opened = frozenset(int(x) for x in opened)
            if not 0 <= t <= self.steps:
                raise DomainError(f"mask at slice {t} outside [0, {self.steps}]")
            if not opened:
                raise DomainError(f"mask at slice {t} has no open site")
            if min(opened) < 0 or max(opened) >= self.sites:
                raise DomainError(f"mask at slice {t} references sites off the lattice")
            masks[t] = opened
        object.__setattr__(self, "sites", int(self.sites))
        object.__setattr__(self, "steps", int(self.steps))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "masks", masks)

    def with_mask(self, t: int, opened) -> "LatticeConfig":
        masks = dict(self.masks)
        masks[t] = frozenset(opened)
        return replace(self, masks=masks)

    def open_sites(self, t: int) -> frozenset[int]:
        return self.masks.get(t, frozenset(range(self.sites)))

    def projector(self, t: int) -> np.ndarray:
        """Boolean vector of open sites at slice ``t``."""
        p = np.zeros(self.sites, dtype=bool)
        p[list(self.open_sites(t))] = True
        return p

    def reach(self) -> int:
        return self.sites - 1 if self.hop_range is None else self.hop_range


def kernel(config: LatticeConfig) -> np.ndarray:
    """One-step kernel ``K[x', x] = exp(i alpha (x' - x)^2)`` within hop range."""
    x = np.arange(config.sites)
    d = np.subtract.outer(x, x)
    K = np.exp(1j * config.alpha * d.astype(float) ** 2)
    K[np.abs(d) > config.reach()] = 0
    return K


def _check_path(path: Path, config: LatticeConfig) -> tuple[int, ...]:
    sites = path.in_time_order()
    if len(sites) != config.steps + 1:
        raise InvalidPathError(f"path has {len(sites) - 1} steps, lattice has {config.steps}")
    for t, x in enumerate(sites):
        if not 0 <= x < config.sites:
            raise InvalidPathError(f"site {x} at t={t} is off the lattice")
        if x not in config.open_sites(t):
            raise InvalidPathError(f"site {x} is closed at t={t}")
    for t in range(config.steps):
        if abs(sites[t + 1] - sites[t]) > config.reach():
            raise InvalidPathError(f"hop at t={t} exceeds range {config.reach()}")
    return sites


def path_amplitude(path: Path, config: LatticeConfig) -> complex:
    """``phi(path) = exp(i * alpha * sum of squared hops)``.

    Backward paths are scored on their forward-time site sequence.
    """
    sites = _check_path(path, config)
    action = sum((b - a) ** 2 for a, b in zip(sites, sites[1:]))
    return cmath.exp(1j * config.alpha * action)


def count_paths(config: LatticeConfig, source: int, target: int | None = None) -> int:
    """Exact number of admissible paths, by integer dynamic programming."""
    reach = config.reach()
    counts = [0] * config.sites
    if source in config.open_sites(0):
        counts[source] = 1
    for t in range(1, config.steps + 1):
        opened = config.open_sites(t)
        nxt = [0] * config.sites
        for y in opened:
            lo, hi = max(0, y - reach), min(config.sites, y + reach + 1)
            nxt[y] = sum(counts[lo:hi])
        counts = nxt
    return sum(counts) if target is None else counts[target]


def enumerate_paths(
    config: LatticeConfig,
    source: int,
    target: int | None = None,
    guard: int = PATH_GUARD,
) -> list[Path]:
    """All admissible forward paths from ``source`` (to ``target``, if given).

    Paths come out in lexicographic order of their site sequences.
    """
    _check_site(config, source)
    if target is not None:
        _check_site(config, target)
    n = count_paths(config, source, target)
    if n > guard:
        raise CapacityError(
            f"{n} paths exceed the enumeration guard of {guard}; "
            "use path_sum_fast or a smaller lattice"
        )
    T = config.steps
    reach = config.reach()
    opened = [sorted(config.open_sites(t)) for t in range(T + 1)]
    out: list[Path] = []
    if source not in config.open_sites(0):
        return out

    def feasible(t, x):
        # can still reach the target in the remaining steps
        return target is None or abs(target - x) <= reach * (T - t)

    prefix = [source]

    def walk(t):
        if t == T:
            if target is None or prefix[-1] == target:
                out.append(Path(tuple(prefix)))
            return
        here = prefix[-1]
        for y in opened[t + 1]:
            if abs(y - here) <= reach and feasible(t + 1, y):
                prefix.append(y)
                walk(t + 1)
                prefix.pop()

    walk(0)
    return out


def path_sum_naive(config: LatticeConfig, source: int, target: int) -> complex:
    """Sum of amplitudes over every enumerated path."""
    total = 0j
    for p in enumerate_paths(config, source, target):
        total += path_amplitude(p, config)
    return total


def propagate(state, config: LatticeConfig, from_t: int, to_t: int) -> np.ndarray:
    """Apply ``M_t K`` for ``t = from_t + 1 .. to_t`` to a site vector."""
    if not 0 <= from_t <= to_t <= config.steps:
        raise DomainError(f"need 0 <= from_t <= to_t <= {config.steps}, got {from_t}, {to_t}")
    v = np.array(state, dtype=complex)
    if v.shape != (config.sites,):
        raise DomainError(f"state must have {config.sites} entries")
    K = kernel(config)
    for t in range(from_t + 1, to_t + 1):
        v = K @ v
        v[~config.projector(t)] = 0
    return v


def delta(config: LatticeConfig, site: int, t: int = 0) -> np.ndarray:
    """Unit amplitude at ``site``, zero if the site is closed at slice ``t``."""
    _check_site(config, site)
    v = np.zeros(config.sites, dtype=complex)
    if site in config.open_sites(t):
        v[site] = 1
    return v


def path_sums_fast(config: LatticeConfig, source: int) -> np.ndarray:
    """``path_sum_fast`` for every target at once."""
    return propagate(delta(config, source), config, 0, config.steps)


def path_sum_fast(config: LatticeConfig, source: int, target: int) -> complex:
    """Transfer-matrix evaluation of the same sum as :func:`path_sum_naive`."""
    _check_site(config, target)
    return complex(path_sums_fast(config, source)[target])


def _check_site(config, x):
    if not 0 <= x < config.sites:
        raise DomainError(f"site {x} outside [0, {config.sites})")
