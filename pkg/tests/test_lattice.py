import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctprob.core import Path
from ctprob.errors import CapacityError, DomainError, InvalidPathError
from ctprob.lattice import (
    LatticeConfig,
    count_paths,
    delta,
    enumerate_paths,
    kernel,
    path_amplitude,
    path_sum_fast,
    path_sum_naive,
    path_sums_fast,
    propagate,
)

from conftest import brute_amplitude, brute_force_paths


def recursive_count(config, t, x, target):
    if x not in config.open_sites(t):
        return 0
    if t == config.steps:
        return int(x == target)
    return sum(
        recursive_count(config, t + 1, y, target)
        for y in range(config.sites)
        if abs(y - x) <= config.reach()
    )


def test_stationary_path_has_zero_action():
    cfg = LatticeConfig(sites=4, steps=3)
    assert path_amplitude(Path((2, 2, 2, 2)), cfg) == 1


def test_single_unit_hop_at_alpha_pi():
    cfg = LatticeConfig(sites=3, steps=1, alpha=math.pi)
    assert abs(path_amplitude(Path((0, 1)), cfg) - (-1)) <= 1e-15


def test_two_unit_hops():
    cfg = LatticeConfig(sites=3, steps=2, alpha=0.7)
    # (1)^2 + (1)^2 = 2 -> phase 1.4
    assert abs(path_amplitude(Path((0, 1, 2)), cfg) - cmath.exp(1.4j)) <= 1e-15


def test_amplitude_rejects_invalid_paths():
    cfg = LatticeConfig(sites=5, steps=2, hop_range=1, masks={1: {1}})
    with pytest.raises(InvalidPathError):
        path_amplitude(Path((0, 2, 2)), cfg)
    with pytest.raises(InvalidPathError):
        path_amplitude(Path((1, 1, 3)), cfg)
    with pytest.raises(InvalidPathError):
        path_amplitude(Path((1, 1)), cfg)


@settings(max_examples=50)
@given(st.lists(st.integers(0, 9), min_size=2, max_size=8), st.floats(-10, 10))
def test_amplitude_has_unit_modulus(seq, alpha):
    cfg = LatticeConfig(sites=10, steps=len(seq) - 1, alpha=alpha)
    assert abs(abs(path_amplitude(Path(tuple(seq)), cfg)) - 1) <= 4 * np.finfo(float).eps


def test_kernel_symmetric_and_translation_invariant():
    cfg = LatticeConfig(sites=7, steps=1, alpha=0.3, hop_range=3)
    K = kernel(cfg)
    assert np.array_equal(K, K.T)
    for d in range(-3, 4):
        diag = np.diagonal(K, d)
        assert np.all(diag == diag[0])
    assert np.all(np.diagonal(K, 4) == 0)


# enumeration ---------------------------------------------------------------

def test_single_step_to_fixed_target():
    cfg = LatticeConfig(sites=3, steps=1)
    assert enumerate_paths(cfg, 0, 2) == [Path((0, 2))]


def test_free_intermediate_site():
    cfg = LatticeConfig(sites=3, steps=2)
    assert enumerate_paths(cfg, 0, 0) == [Path((0, x, 0)) for x in range(3)]


def test_barrier_count_matches_recursion():
    cfg = LatticeConfig(sites=5, steps=3, masks={1: {1, 3}})
    for target in range(5):
        n = recursive_count(cfg, 0, 0, target)
        assert len(enumerate_paths(cfg, 0, target)) == n == count_paths(cfg, 0, target)


@pytest.mark.parametrize("hop", [None, 1, 2])
def test_enumeration_is_lexicographic_and_exact(hop):
    cfg = LatticeConfig(sites=4, steps=3, hop_range=hop, masks={2: {0, 3}})
    got = [p.sites for p in enumerate_paths(cfg, 1)]
    assert got == sorted(got)
    assert got == brute_force_paths(cfg, 1)


def test_capacity_guard():
    cfg = LatticeConfig(sites=64, steps=8)
    with pytest.raises(CapacityError, match="path_sum_fast"):
        enumerate_paths(cfg, 0, 5)


# path sums -----------------------------------------------------------------

def test_direct_hop_sum():
    cfg = LatticeConfig(sites=4, steps=1, alpha=0.4)
    assert abs(path_sum_naive(cfg, 0, 3) - cmath.exp(0.4j * 9)) <= 1e-15


def test_blocked_slice_gives_zero():
    # masks must keep an open site, so block by isolating an unreachable one
    cfg = LatticeConfig(sites=6, steps=2, hop_range=1, masks={1: {5}})
    assert path_sum_naive(cfg, 0, 0) == 0
    assert path_sum_fast(cfg, 0, 0) == 0


def test_naive_equals_fast_two_slit():
    cfg = LatticeConfig(sites=5, steps=4, alpha=0.5, masks={2: {1, 3}})
    for s in range(5):
        for x in range(5):
            assert abs(path_sum_naive(cfg, s, x) - path_sum_fast(cfg, s, x)) <= 1e-10


def test_naive_equals_brute_force():
    cfg = LatticeConfig(sites=4, steps=3, alpha=1.1, hop_range=2, masks={1: {0, 2}})
    for x in range(4):
        expect = sum(brute_amplitude(p, cfg.alpha) for p in brute_force_paths(cfg, 1, x))
        assert abs(path_sum_naive(cfg, 1, x) - expect) <= 1e-12


def test_unmasked_sum_is_matrix_power_entry():
    cfg = LatticeConfig(sites=5, steps=3, alpha=0.9)
    KT = np.linalg.matrix_power(kernel(cfg), 3)
    assert np.allclose(path_sums_fast(cfg, 1), KT[:, 1], rtol=0, atol=1e-12)


def test_fully_open_mask_changes_nothing():
    cfg = LatticeConfig(sites=6, steps=4, masks={2: {1, 4}})
    opened = cfg.with_mask(3, range(6))
    assert np.array_equal(path_sums_fast(cfg, 2), path_sums_fast(opened, 2))


def test_slit_decomposition_is_additive():
    cfg = LatticeConfig(sites=8, steps=5, alpha=0.6)
    slits = [1, 3, 6]
    whole = path_sums_fast(cfg.with_mask(2, slits), 4)
    parts = sum(path_sums_fast(cfg.with_mask(2, [s]), 4) for s in slits)
    assert np.allclose(whole, parts, rtol=1e-13, atol=1e-12)


def test_closing_an_avoided_site_changes_nothing():
    cfg = LatticeConfig(sites=6, steps=3, masks={1: {0, 1, 2}})
    narrowed = cfg.with_mask(1, {1, 2})
    # paths through site 0 at t=1 are the only ones lost
    lost = path_sum_fast(cfg.with_mask(1, {0}), 3, 4)
    assert abs(path_sum_fast(cfg, 3, 4) - lost - path_sum_fast(narrowed, 3, 4)) <= 1e-12


def test_translation_symmetry_away_from_walls():
    cfg = LatticeConfig(sites=20, steps=3, alpha=0.8, hop_range=2, masks={1: {5, 7}})
    shifted = LatticeConfig(sites=20, steps=3, alpha=0.8, hop_range=2, masks={1: {9, 11}})
    assert abs(path_sum_fast(cfg, 6, 8) - path_sum_fast(shifted, 10, 12)) <= 1e-12


# propagate -----------------------------------------------------------------

def test_propagate_delta_reads_path_sum():
    cfg = LatticeConfig(sites=6, steps=4, masks={2: {2, 3}})
    v = propagate(delta(cfg, 1), cfg, 0, 4)
    for x in range(6):
        assert v[x] == path_sum_fast(cfg, 1, x)


@settings(max_examples=30)
@given(st.integers(0, 5), st.integers(0, 5), st.complex_numbers(max_magnitude=10),
       st.complex_numbers(max_magnitude=10))
def test_propagate_is_linear(a, b, ca, cb):
    cfg = LatticeConfig(sites=6, steps=3, alpha=0.5, masks={1: {1, 4}})
    both = propagate(ca * delta(cfg, a) + cb * delta(cfg, b), cfg, 0, 3)
    sep = ca * propagate(delta(cfg, a), cfg, 0, 3) + cb * propagate(delta(cfg, b), cfg, 0, 3)
    assert np.allclose(both, sep, rtol=1e-12, atol=1e-9)


def test_propagate_zero_and_bounds():
    cfg = LatticeConfig(sites=4, steps=2)
    assert not propagate(np.zeros(4), cfg, 0, 2).any()
    with pytest.raises(DomainError):
        propagate(np.zeros(4), cfg, 1, 3)
    with pytest.raises(DomainError):
        propagate(np.zeros(4), cfg, 2, 1)


@pytest.mark.parametrize("kw", [
    dict(sites=1, steps=1),
    dict(sites=4, steps=0),
    dict(sites=4, steps=2, alpha=float("nan")),
    dict(sites=4, steps=2, hop_range=4),
    dict(sites=4, steps=2, masks={1: set()}),
    dict(sites=4, steps=2, masks={3: {1}}),
])
def test_config_validation(kw):
    with pytest.raises(DomainError):
        LatticeConfig(**kw)
