import itertools

import numpy as np
import pytest

from ctprob.core import MeasureContext
from ctprob.lattice import LatticeConfig


def brute_force_paths(config, source, target=None):
    """Every site sequence of the right length, filtered by masks and hops."""
    out = []
    for tail in itertools.product(range(config.sites), repeat=config.steps):
        seq = (source,) + tail
        if target is not None and seq[-1] != target:
            continue
        if any(x not in config.open_sites(t) for t, x in enumerate(seq)):
            continue
        if any(abs(b - a) > config.reach() for a, b in zip(seq, seq[1:])):
            continue
        out.append(seq)
    return out


def brute_amplitude(seq, alpha):
    phase = 1 + 0j
    for a, b in zip(seq, seq[1:]):
        phase *= np.exp(1j * alpha * (b - a) ** 2)
    return phase


def close_rel(a, b, tol, scale=None):
    """``|a - b| <= tol * max(1, scale)`` elementwise."""
    a, b = np.asarray(a), np.asarray(b)
    if scale is None:
        scale = np.maximum(np.abs(a), np.abs(b))
    return np.all(np.abs(a - b) <= tol * np.maximum(1.0, scale))


@pytest.fixture
def small_lattice():
    # two slits at t=1, screen at t=2
    return LatticeConfig(sites=5, steps=2, alpha=0.7, masks={1: {1, 3}})


@pytest.fixture
def small_ctx(small_lattice):
    return MeasureContext.from_lattice(small_lattice, source=2)


@pytest.fixture(scope="session")
def random_ctx():
    return MeasureContext.random(40, seed=3, sites=5, steps=3)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
