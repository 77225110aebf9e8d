"""Normalization over the screen, repeated detection and frequency checks."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .density import density_for, diagonal_pattern
from .errors import DegenerateExperimentError, DomainError, InvariantViolation
from .experiments import ScreenPattern, SlitExperiment, pattern

#: Negative or imaginary parts of a total up to this fraction of the
#: largest total are treated as round-off.
CLAMP_TOL = 1e-10
ROUTE_TOL = 1e-10
SIGMAS = 4.0


@dataclass(frozen=True)
class NormalizedDistribution:
    bins: np.ndarray
    probs: np.ndarray
    Z: float


@dataclass(frozen=True)
class FrequencyReport:
    n: int
    seed: int
    bins: np.ndarray
    counts: np.ndarray
    probs: np.ndarray

    @property
    def p(self) -> np.ndarray:
        return self.counts / self.n

    @property
    def deviations(self) -> np.ndarray:
        return np.abs(self.p - self.probs)

    @property
    def bounds(self) -> np.ndarray:
        return lln_bounds(self.probs, self.n)

    @property
    def passed(self) -> np.ndarray:
        return lln_check(self)

    def to_dict(self) -> dict:
        return {
            "n": int(self.n),
            "seed": int(self.seed),
            "bins": [int(b) for b in self.bins],
            "counts": [int(c) for c in self.counts],
            "probs": [float(p) for p in self.probs],
            "deviations": [float(d) for d in self.deviations],
            "bounds": [float(b) for b in self.bounds],
            "pass": bool(np.all(self.passed)),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def normalize_totals(totals, bins=None) -> NormalizedDistribution:
    totals = np.asarray(totals, dtype=complex)
    top = float(np.max(np.abs(totals), initial=0.0))
    slack = CLAMP_TOL * max(top, 1.0)
    if np.any(np.abs(totals.imag) > slack):
        raise DomainError("screen totals are not real")
    re = totals.real
    if np.any(re < -slack):
        raise DomainError("screen totals are negative beyond round-off")
    re = np.where(re < 0, 0.0, re)
    Z = float(re.sum())
    if not Z > 0:
        raise DegenerateExperimentError("screen carries no weight (Z <= 0)")
    probs = re / Z
    probs = probs / probs.sum()
    if bins is None:
        bins = np.arange(re.size)
    return NormalizedDistribution(np.asarray(bins), probs, Z)


def normalize(pat: ScreenPattern) -> NormalizedDistribution:
    """Divide each screen total by ``Z``, the total over the whole screen."""
    return normalize_totals(pat.total, pat.sites)


def _cdf(probs: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(probs)
    last = int(np.flatnonzero(probs > 0)[-1])
    # bins past the last positive one are unreachable; pin the edge at 1
    cdf[last:] = 1.0
    return cdf


def sample(dist: NormalizedDistribution, n: int, seed: int) -> FrequencyReport:
    """``n`` independent detections by inverse CDF on a seeded PCG64 stream.

    A zero-probability bin occupies an empty CDF interval and is never hit.
    """
    if n < 1:
        raise DomainError("need at least one sample")
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    idx = np.searchsorted(_cdf(dist.probs), u, side="right")
    counts = np.bincount(idx, minlength=dist.probs.size)
    return FrequencyReport(n, seed, dist.bins, counts, dist.probs)


def lln_bounds(probs, n) -> np.ndarray:
    probs = np.asarray(probs, dtype=float)
    return SIGMAS * np.sqrt(probs * (1 - probs) / n)


def lln_check(report: FrequencyReport, dist: NormalizedDistribution | None = None) -> np.ndarray:
    """Per-bin pass flags: ``|p - P| <= 4 sqrt(P(1-P)/N)``; null bins need zero counts."""
    probs = report.probs if dist is None else dist.probs
    p = report.counts / report.n
    ok = np.abs(p - probs) <= lln_bounds(probs, report.n)
    null = probs == 0
    ok[null] = report.counts[null] == 0
    return ok


@dataclass(frozen=True)
class BornReport:
    pattern_route: NormalizedDistribution
    density_route: np.ndarray
    route_gap: float
    frequencies: FrequencyReport
    passed: bool


def born_check(exp: SlitExperiment, n: int, seed: int) -> BornReport:
    """Detection frequencies against the normalized pattern.

    The distribution is computed twice, from the pattern and from the
    diagonal of the density matrix at the screen (for an unmeasured
    experiment this is ``|Psi|^2 / ||Psi||^2``).  The two must agree before
    any sampling happens.
    """
    dist = normalize(pattern(exp))
    rho = density_for(exp)
    diag = diagonal_pattern(rho)
    via_rho = normalize_totals(diag).probs
    gap = float(np.max(np.abs(via_rho - dist.probs)))
    if gap > ROUTE_TOL:
        raise InvariantViolation("pattern and density routes disagree", gap)
    rep = sample(dist, n, seed)
    return BornReport(dist, via_rho, gap, rep, bool(np.all(lln_check(rep))))
