"""Slit experiments on the lattice.

An :class:`SlitExperiment` places a barrier at slice ``barrier_t`` whose only
open sites are the slits.  The observed event at screen site ``x`` keeps,
for every measured slit ``k``, the class ``E_kk`` (both legs through ``k``)
and, among the unmeasured slits, every class ``E_kl``.  Its complex
probability is

    sum_{k measured} |phi_k|^2 + sum_{k, l unmeasured} phi_k conj(phi_l)

where ``phi_k`` is the path sum from the source to ``x`` through slit ``k``
alone.  With two slits and nothing measured this is the four-way split into
classes (i)-(iv); measuring a slit removes the two interference classes.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .core import SymbolicEvent
from .errors import DomainError
from .lattice import LatticeConfig, delta, propagate

# relative per-site tolerance for identities between pattern columns
PATTERN_TOL = 1e-12


@dataclass(frozen=True)
class SlitExperiment:
    """n-slit setup; ``measured`` holds 1-based slit indices."""

    config: LatticeConfig
    source: int
    barrier_t: int
    slits: tuple[int, ...]
    measured: frozenset[int] = frozenset()

    def __post_init__(self):
        slits = tuple(int(s) for s in self.slits)
        measured = frozenset(int(k) for k in self.measured)
        cfg = self.config
        if not slits:
            raise DomainError("at least one slit is required")
        if len(set(slits)) != len(slits):
            raise DomainError("slits must be pairwise distinct")
        if any(not 0 <= s < cfg.sites for s in slits):
            raise DomainError("slit outside the lattice")
        if not measured <= set(range(1, len(slits) + 1)):
            raise DomainError(f"measured indices must lie in 1..{len(slits)}")
        if not 0 < self.barrier_t < cfg.steps:
            raise DomainError(f"barrier slice must lie strictly inside (0, {cfg.steps})")
        if not 0 <= self.source < cfg.sites:
            raise DomainError("source outside the lattice")
        object.__setattr__(self, "slits", slits)
        object.__setattr__(self, "measured", measured)

    @property
    def n(self) -> int:
        return len(self.slits)

    @property
    def screen_t(self) -> int:
        return self.config.steps

    @property
    def unmeasured(self) -> tuple[int, ...]:
        return tuple(k for k in range(1, self.n + 1) if k not in self.measured)

    def lattice(self) -> LatticeConfig:
        """Config with every slit open at the barrier."""
        return self.config.with_mask(self.barrier_t, self.slits)

    def slit_lattice(self, k: int) -> LatticeConfig:
        """Config with only slit ``k`` (1-based) open."""
        return self.config.with_mask(self.barrier_t, {self.slits[k - 1]})

    def with_measured(self, measured) -> "SlitExperiment":
        return replace(self, measured=frozenset(measured))

    def class_event(self, x: int, k: int, l: int) -> SymbolicEvent:
        """``E_kl``: both legs join source and ``x``, plus via slit k, minus via slit l."""
        return SymbolicEvent(
            confirm=frozenset({(0, self.source), (self.screen_t, x)}),
            plus_through=frozenset({(self.barrier_t, self.slits[k - 1])}),
            minus_through=frozenset({(self.barrier_t, self.slits[l - 1])}),
        )

    def observed_classes(self) -> list[tuple[int, int]]:
        """Slit classes ``(k, l)`` making up the observed event, in canonical order."""
        diag = [(k, k) for k in sorted(self.measured)]
        block = [(k, l) for k in self.unmeasured for l in self.unmeasured]
        return diag + block


@dataclass(frozen=True)
class ScreenPattern:
    """Per-screen-site complex probabilities and their decomposition.

    ``slit_amps`` has shape ``(n, S)``; row ``k - 1`` holds ``phi_k(x)``.
    ``direct`` sums ``|phi_k|^2`` over all slits, ``interference`` sums the
    cross terms between distinct unmeasured slits.
    """

    slits: tuple[int, ...]
    measured: frozenset[int]
    slit_amps: np.ndarray
    slit_probs: np.ndarray
    direct: np.ndarray
    interference: np.ndarray
    total: np.ndarray = field(repr=False)

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.total.shape[0])

    def max_total(self) -> float:
        return float(np.max(self.total.real))


def slit_amplitude_table(exp: SlitExperiment) -> np.ndarray:
    """``phi_k(x)`` for every slit ``k`` and screen site ``x``, shape ``(n, S)``."""
    rows = []
    for k in range(1, exp.n + 1):
        cfg = exp.slit_lattice(k)
        rows.append(propagate(delta(cfg, exp.source), cfg, 0, cfg.steps))
    return np.array(rows)


def slit_amplitudes(exp: SlitExperiment, x: int) -> np.ndarray:
    """Vector ``(phi_1, ..., phi_n)`` at screen site ``x``."""
    if not 0 <= x < exp.config.sites:
        raise DomainError(f"screen site {x} off the lattice")
    return slit_amplitude_table(exp)[:, x]


def _sequential_sum(rows):
    acc = np.zeros_like(rows[0])
    for r in rows:
        acc = acc + r
    return acc


def pattern_from_amplitudes(amps: np.ndarray, measured=frozenset(), slits=None) -> ScreenPattern:
    """Screen pattern for given slit amplitudes (rows are slits).

    This is the event-level entry point: it accepts synthetic amplitudes as
    well as the lattice values from :func:`slit_amplitude_table`.
    """
    amps = np.atleast_2d(np.asarray(amps, dtype=complex))
    n = amps.shape[0]
    measured = frozenset(measured)
    if slits is None:
        slits = tuple(range(1, n + 1))
    unmeasured = [k for k in range(n) if k + 1 not in measured]
    probs = amps.real**2 + amps.imag**2
    direct = _sequential_sum(list(probs))
    interference = np.zeros(amps.shape[1], dtype=complex)
    for a, k in enumerate(unmeasured):
        for l in unmeasured[a + 1:]:
            c = amps[k] * np.conj(amps[l])
            # E_kl and E_lk together: exactly real
            interference = interference + (c + np.conj(c))
    total = direct + interference
    return ScreenPattern(
        slits=tuple(slits),
        measured=measured,
        slit_amps=amps,
        slit_probs=probs,
        direct=direct,
        interference=interference,
        total=total,
    )


def pattern(exp: SlitExperiment) -> ScreenPattern:
    """Observed screen pattern for the experiment's measured set."""
    return pattern_from_amplitudes(slit_amplitude_table(exp), exp.measured, exp.slits)


def classical_baseline(exp: SlitExperiment) -> ScreenPattern:
    """Additive pattern, identical to measuring every slit."""
    return pattern(exp.with_measured(range(1, exp.n + 1)))


def event_decomposition(exp: SlitExperiment, x: int) -> list[tuple[tuple[int, int], complex]]:
    """``[((k, l), Phi(E_kl)), ...]`` over the observed classes at site ``x``."""
    phi = slit_amplitudes(exp, x)
    return [((k, l), complex(phi[k - 1] * np.conj(phi[l - 1]))) for k, l in exp.observed_classes()]


def find_null_events(exp_or_pattern, rel_tol: float = 1e-3) -> list[int]:
    """Screen sites where the total vanishes although a diagonal class does not.

    Accepts an experiment or an already computed :class:`ScreenPattern`.
    """
    pat = exp_or_pattern
    if isinstance(exp_or_pattern, SlitExperiment):
        pat = pattern(exp_or_pattern)
    top = pat.max_total()
    if top <= 0:
        top = float(np.max(pat.direct))
    if top <= 0:
        return []
    small = np.abs(pat.total) <= rel_tol * top
    witnessed = np.any(pat.slit_probs >= rel_tol * top, axis=0)
    return [int(x) for x in np.flatnonzero(small & witnessed)]


def check_pattern(pat: ScreenPattern, tol: float = PATTERN_TOL) -> dict[str, float]:
    """Worst relative residuals of the pattern invariants.

    Residuals are measured per site against the site's ``direct`` weight,
    which bounds every term of the decomposition.
    """
    scale = np.maximum(pat.direct, 1.0)
    split = np.abs(pat.total - (pat.direct + pat.interference)) / scale
    imag = np.abs(pat.total.imag) / scale
    unmeasured = [k for k in range(pat.slit_amps.shape[0]) if k + 1 not in pat.measured]
    block = np.abs(pat.slit_amps[unmeasured].sum(axis=0)) ** 2 if unmeasured else 0.0
    measured = [k for k in range(pat.slit_amps.shape[0]) if k + 1 in pat.measured]
    regroup = pat.slit_probs[measured].sum(axis=0) + block
    nonneg = np.abs(pat.total.real - regroup) / scale
    return {
        "decomposition": float(split.max()),
        "hermitian": float(imag.max()),
        "regrouping": float(nonneg.max()),
        "negative": float(np.max(-pat.total.real / scale, initial=0.0)),
    }


# presets ---------------------------------------------------------------

DEFAULT_SITES = 64
DEFAULT_STEPS = 8
DEFAULT_ALPHA = 0.5


def default_lattice(**overrides) -> LatticeConfig:
    kw = dict(sites=DEFAULT_SITES, steps=DEFAULT_STEPS, alpha=DEFAULT_ALPHA, hop_range=None)
    kw.update(overrides)
    return LatticeConfig(**kw)


PRESETS = {
    "exp1": dict(source=32, barrier_t=4, slits=(28, 36), measured=()),
    "exp2": dict(source=32, barrier_t=4, slits=(28, 36), measured=(2,)),
    "nslit3m1": dict(source=32, barrier_t=4, slits=(26, 32, 38), measured=(1,)),
    "oneslit": dict(source=32, barrier_t=4, slits=(32,), measured=()),
}


def preset(name: str) -> SlitExperiment:
    try:
        entry = PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return SlitExperiment(default_lattice(), entry["source"], entry["barrier_t"],
                          entry["slits"], frozenset(entry["measured"]))
