import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctprob.core import (
    ExplicitEvent,
    MeasureContext,
    Path,
    SymbolicEvent,
    TrajectoryPair,
    adjoint,
    adjoint_event,
    all_pairs,
    classify,
    expand_symbolic,
    measure,
    pure_event,
    rectangle,
    verify_axioms,
)
from ctprob.errors import CapacityError, ConstraintError, DomainError
from ctprob.lattice import path_amplitude

from conftest import brute_amplitude


def brute_measure(event, ctx):
    """Sum over the explicit pairs, one amplitude lookup per leg."""
    lookup = dict(zip((p.sites for p in ctx.omega_plus), ctx.amplitude))
    total = 0j
    for pr in event.pairs:
        total += lookup[pr.plus.sites] * np.conj(lookup[pr.minus.reversed().sites])
    return total


def two_path_ctx(a1, a2):
    return MeasureContext((Path((0, 0)), Path((0, 1))), np.array([a1, a2]))


# adjoint -------------------------------------------------------------------

def test_adjoint_of_diagonal_pair_is_itself():
    p = Path((0, 1, 1))
    pair = TrajectoryPair(p, p.reversed())
    assert adjoint(pair) == pair


def test_adjoint_forced_by_definition():
    pair = TrajectoryPair(Path((0, 1)), Path((2, 1), "backward"))
    adj = adjoint(pair)
    assert adj.plus == Path((1, 2))
    assert adj.minus == Path((1, 0), "backward")


sites = st.lists(st.integers(0, 4), min_size=4, max_size=4)


@given(sites, sites)
def test_adjoint_is_an_involution(a, b):
    pair = TrajectoryPair.from_forward(a, b)
    assert adjoint(adjoint(pair)) == pair


def test_backward_leg_keeps_its_space_time_points():
    p = Path((0, 1, 3))
    assert p.reversed().points() == p.points()
    assert p.reversed().site_at(0) == 0


def test_pair_orientation_is_enforced():
    with pytest.raises(ValueError):
        TrajectoryPair(Path((0, 1)), Path((0, 1)))


# measure -------------------------------------------------------------------

def test_unit_amplitude_against_own_conjugate():
    ctx = MeasureContext((Path((0, 1)),), np.array([cmath.exp(1j * math.pi / 3)]))
    p = ctx.omega_plus[0]
    val = measure(ExplicitEvent({TrajectoryPair(p, p.reversed())}), ctx)
    assert abs(val - 1) <= 1e-12


def test_pure_event_is_squared_sum():
    ctx = two_path_ctx(1, 1j)
    val = measure(pure_event(ctx, ctx.omega_plus), ctx)
    assert abs(val - 2) <= 1e-12


def test_rectangle_can_be_non_real():
    ctx = two_path_ctx(1, 1j)
    a, b = ctx.omega_plus
    ev = rectangle(ctx, [a], [b])
    assert ev.pairs == {TrajectoryPair(a, b.reversed())}
    # brute force: 1 * conj(i)
    assert brute_measure(ev, ctx) == -1j
    assert abs(measure(ev, ctx) - (-1j)) <= 1e-12
    assert not classify(ev, ctx).hermitian


def test_measure_matches_brute_force_on_random_events(random_ctx):
    rng = np.random.default_rng(0)
    pairs = list(all_pairs(random_ctx))
    for _ in range(20):
        keep = rng.random(len(pairs)) < 0.3
        ev = ExplicitEvent({p for p, k in zip(pairs, keep) if k})
        assert abs(measure(ev, random_ctx) - brute_measure(ev, random_ctx)) <= 1e-12


def test_empty_event(random_ctx):
    ev = ExplicitEvent()
    assert measure(ev, random_ctx) == 0
    c = classify(ev, random_ctx)
    assert c.hermitian and c.pure and c.mixed


def test_lattice_context_amplitudes(small_lattice, small_ctx):
    for p, a in zip(small_ctx.omega_plus, small_ctx.amplitude):
        assert a == path_amplitude(p, small_lattice)
        assert abs(a - brute_amplitude(p.sites, small_lattice.alpha)) <= 1e-12


def test_empty_omega_is_a_domain_error():
    with pytest.raises(DomainError):
        MeasureContext((), np.array([]))


# A2 and taxonomy ------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.data())
def test_conjugation_on_random_explicit_events(data):
    ctx = MeasureContext.random(12, seed=data.draw(st.integers(0, 1000)), sites=3, steps=2)
    pairs = list(all_pairs(ctx))
    picks = data.draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    ev = ExplicitEvent({p for p, k in zip(pairs, picks) if k})
    val = measure(ev, ctx)
    adj = measure(adjoint_event(ev), ctx)
    assert abs(adj - np.conj(val)) <= 1e-12
    flags = classify(ev, ctx)
    if flags.hermitian:
        assert abs(val.imag) <= 1e-12
    if flags.pure:
        a = [p.plus for p in ev.pairs]
        expect = abs(sum(ctx.amplitude[ctx.index_of(q)] for q in set(a))) ** 2
        assert abs(val - expect) <= 1e-12 * max(1.0, expect)
    if flags.pure or flags.mixed:
        assert flags.hermitian
        assert val.real >= -1e-12


def test_pure_event_classification(random_ctx):
    A = random_ctx.omega_plus[::3]
    c = classify(pure_event(random_ctx, A), random_ctx)
    assert c.pure and c.hermitian and c.mixed


def test_single_off_diagonal_pair_not_hermitian(random_ctx):
    ev = ExplicitEvent({random_ctx.pair(0, 1)})
    assert not classify(ev, random_ctx).hermitian


def test_disjoint_union_of_pure_events_is_mixed(random_ctx):
    paths = random_ctx.omega_plus
    A, B = paths[:4], paths[4:9]
    ev = pure_event(random_ctx, A).union(pure_event(random_ctx, B))
    # brute force: every pair has both legs in A or both legs in B
    inA = {p.sites for p in A}
    inB = {p.sites for p in B}
    for pr in ev.pairs:
        legs = {pr.plus.sites, pr.minus.reversed().sites}
        assert legs <= inA or legs <= inB
    assert len(ev) == len(A) ** 2 + len(B) ** 2
    c = classify(ev, random_ctx)
    assert c.mixed and not c.pure and c.hermitian


def test_hermitian_but_not_mixed(random_ctx):
    ev = ExplicitEvent({random_ctx.pair(0, 1), random_ctx.pair(1, 0)})
    c = classify(ev, random_ctx)
    assert c.hermitian and not c.pure and not c.mixed


def test_nonreal_witness_exists(random_ctx):
    vals = [measure(ExplicitEvent({random_ctx.pair(0, j)}), random_ctx) for j in range(1, 5)]
    assert any(abs(v.imag) > 1e-3 for v in vals)


# symbolic events -----------------------------------------------------------

def test_empty_constraints_expand_to_omega(small_ctx):
    ev = expand_symbolic(SymbolicEvent(), small_ctx)
    assert ev.pairs == set(all_pairs(small_ctx))


def test_confirm_points_lie_on_both_legs(small_ctx):
    sym = SymbolicEvent(confirm={(0, 2), (2, 4)})
    ev = expand_symbolic(sym, small_ctx)
    brute = {pr for pr in all_pairs(small_ctx)
             if pr.plus.passes(2, 4) and pr.minus.passes(2, 4)}
    assert ev.pairs == brute and ev.pairs
    assert classify(sym, small_ctx).pure


def test_exp2_event_keeps_only_same_slit_classes(small_ctx):
    s, x, bt = 2, 3, 1
    seen = SymbolicEvent(confirm={(0, s), (2, x), (bt, 3)})
    unseen = SymbolicEvent(confirm={(0, s), (2, x)}, exclude={(bt, 3)})
    exp2 = expand_symbolic(seen, small_ctx).union(expand_symbolic(unseen, small_ctx))
    classes = {}
    for pr in all_pairs(small_ctx):
        if pr.plus.site_at(2) != x or pr.minus.site_at(2) != x:
            continue
        key = (pr.plus.site_at(bt), pr.minus.site_at(bt))
        classes.setdefault(key, set()).add(pr)
    assert len(classes) == 4
    assert exp2.pairs == classes[(1, 1)] | classes[(3, 3)]
    assert classify(exp2, small_ctx).mixed


def test_ip_prime_equivalence(small_lattice, small_ctx):
    for x in range(small_lattice.sites):
        sym = SymbolicEvent(confirm={(2, x)})
        through = [a for p, a in zip(small_ctx.omega_plus, small_ctx.amplitude) if p.passes(2, x)]
        s = sum(through)
        assert abs(measure(sym, small_ctx) - s * np.conj(s)) <= 1e-12


def test_contradictory_constraints(small_ctx):
    with pytest.raises(ConstraintError):
        expand_symbolic(SymbolicEvent(confirm={(1, 1)}, exclude={(1, 1)}), small_ctx)


def test_point_off_lattice(small_ctx):
    with pytest.raises(ConstraintError):
        classify(SymbolicEvent(confirm={(7, 1)}), small_ctx)
    with pytest.raises(ConstraintError):
        classify(SymbolicEvent(exclude={(1, 5)}), small_ctx)


# axiom suite ---------------------------------------------------------------

def test_verify_axioms_passes_on_random_context():
    rep = verify_axioms(MeasureContext.random(60, seed=5), trials=200, seed=5)
    assert rep.passed, rep.failures
    assert abs(rep.phi_omega - 1) <= 1e-12
    assert rep.nonreal_witness is not None


def test_verify_axioms_reports_instead_of_raising():
    ctx = MeasureContext((Path((0, 0)), Path((0, 1))), np.array([1, -1]))
    rep = verify_axioms(ctx, trials=5, seed=0)
    assert not rep.passed


def test_axiom_guard():
    ctx = MeasureContext.random(1001, seed=0, sites=8, steps=4)
    with pytest.raises(CapacityError):
        verify_axioms(ctx, trials=1)


def test_batched_measure_matches_single(random_ctx):
    n = len(random_ctx)
    masks = np.random.default_rng(5).random((4, n, n)) < 0.3
    batch = random_ctx.measure_masks(masks)
    for m, v in zip(masks, batch):
        assert abs(v - random_ctx.measure_mask(m)) <= 1e-12 * max(1.0, abs(v))
