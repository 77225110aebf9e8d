"""Finite complex probability spaces of forward/backward trajectory pairs.

The sample space is ``Omega = Omega_plus x reversed(Omega_plus)``: every
elementary event pairs a forward path ``p_i`` with the time reversal of a
forward path ``p_j``.  Internally a pair is addressed by its index ``(i, j)``
and an event by a boolean ``n x n`` mask, so that

* the adjoint of ``(i, j)`` is ``(j, i)`` (mask transpose),
* a pure event ``A x reversed(A)`` is the mask ``outer(a, a)``,
* ``Phi(i, j) = phi_i * conj(phi_j)``.

The public surface speaks in :class:`Path`, :class:`TrajectoryPair` and the
two event representations; masks are an implementation detail exposed for
the bulk property checks.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import CapacityError, ConstraintError, DomainError

FORWARD = "forward"
BACKWARD = "backward"

#: Largest |Omega| accepted by exhaustive expansion and axiom checks.
OMEGA_GUARD = 10**6


@dataclass(frozen=True, order=True)
class Path:
    """A lattice path with one site per time slice.

    ``sites`` is listed in traversal order.  For a forward path that is
    ``t = 0..T``; a backward path is traversed from ``t = T`` down to ``0``,
    so its ``k``-th entry sits at time ``T - k``.  Reversal is therefore a
    pure index reversal that flips the orientation and keeps the set of
    space-time points the curve passes through.
    """

    sites: tuple[int, ...]
    orientation: str = FORWARD

    def __post_init__(self):
        object.__setattr__(self, "sites", tuple(int(s) for s in self.sites))
        if self.orientation not in (FORWARD, BACKWARD):
            raise ValueError(f"unknown orientation {self.orientation!r}")
        if len(self.sites) < 2:
            raise ValueError("a path needs at least one time step")

    @property
    def steps(self) -> int:
        return len(self.sites) - 1

    def reversed(self) -> "Path":
        flipped = BACKWARD if self.orientation == FORWARD else FORWARD
        return Path(self.sites[::-1], flipped)

    def site_at(self, t: int) -> int:
        """Site occupied at time slice ``t``."""
        if self.orientation == FORWARD:
            return self.sites[t]
        return self.sites[self.steps - t]

    def in_time_order(self) -> tuple[int, ...]:
        if self.orientation == FORWARD:
            return self.sites
        return self.sites[::-1]

    def points(self) -> frozenset[tuple[int, int]]:
        """Space-time points ``(t, x)`` the path passes through."""
        return frozenset(enumerate(self.in_time_order()))

    def passes(self, t: int, x: int) -> bool:
        return 0 <= t <= self.steps and self.site_at(t) == x


@dataclass(frozen=True, order=True)
class TrajectoryPair:
    """Elementary event ``(gamma_plus, gamma_minus)``."""

    plus: Path
    minus: Path

    def __post_init__(self):
        if self.plus.orientation != FORWARD or self.minus.orientation != BACKWARD:
            raise ValueError("plus leg must be forward and minus leg backward")
        if self.plus.steps != self.minus.steps:
            raise ValueError("both legs must span the same number of steps")

    @classmethod
    def from_forward(cls, plus: Sequence[int], minus_forward: Sequence[int]):
        """Pair ``plus`` with the backward traversal of ``minus_forward``."""
        return cls(Path(tuple(plus)), Path(tuple(minus_forward)).reversed())


def adjoint(pair: TrajectoryPair) -> TrajectoryPair:
    """Swap the legs and reverse each: ``(g+, g-) -> (rev g-, rev g+)``."""
    return TrajectoryPair(pair.minus.reversed(), pair.plus.reversed())


Point = tuple[int, int]


@dataclass(frozen=True)
class ExplicitEvent:
    """An event given as a finite set of trajectory pairs."""

    pairs: frozenset[TrajectoryPair] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.canonical())

    def canonical(self) -> list[TrajectoryPair]:
        """Pairs in lexicographic order of their site sequences."""
        return sorted(self.pairs)

    def union(self, other: "ExplicitEvent") -> "ExplicitEvent":
        return ExplicitEvent(self.pairs | other.pairs)


@dataclass(frozen=True)
class SymbolicEvent:
    """Constraint record over space-time points ``(t, x)``.

    ``confirm`` points must lie on both legs, ``exclude`` points on neither.
    ``plus_through`` / ``minus_through`` constrain a single leg, which is how
    slit classes ``E_kl`` (plus through slit k, minus through slit l) are
    written.
    """

    confirm: frozenset[Point] = frozenset()
    exclude: frozenset[Point] = frozenset()
    plus_through: frozenset[Point] = frozenset()
    minus_through: frozenset[Point] = frozenset()

    def __post_init__(self):
        for name in ("confirm", "exclude", "plus_through", "minus_through"):
            pts = frozenset((int(t), int(x)) for t, x in getattr(self, name))
            object.__setattr__(self, name, pts)

    def points(self) -> frozenset[Point]:
        return self.confirm | self.exclude | self.plus_through | self.minus_through


Event = Union[ExplicitEvent, SymbolicEvent]


def adjoint_event(event: Event) -> Event:
    """``E+ = {adjoint(g) | g in E}``."""
    if isinstance(event, SymbolicEvent):
        return SymbolicEvent(
            event.confirm, event.exclude, event.minus_through, event.plus_through
        )
    return ExplicitEvent(frozenset(adjoint(p) for p in event.pairs))


@dataclass(frozen=True)
class MeasureContext:
    """Finite ``Omega_plus`` together with the forward amplitudes ``phi``.

    The backward leg set is the reversal of ``omega_plus``; backward
    amplitudes are never stored, they enter as ``conj(phi)``.
    """

    omega_plus: tuple[Path, ...]
    amplitude: np.ndarray
    sites: int | None = None
    _index: Mapping[tuple[int, ...], int] = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        paths = tuple(self.omega_plus)
        if not paths:
            raise DomainError("empty Omega")
        if any(p.orientation != FORWARD for p in paths):
            raise ValueError("omega_plus must hold forward paths")
        steps = {p.steps for p in paths}
        if len(steps) != 1:
            raise ValueError("all paths must share the same number of steps")
        amp = np.array(self.amplitude, dtype=complex).reshape(-1)
        if amp.shape != (len(paths),):
            raise ValueError("one amplitude per forward path is required")
        if not np.all(np.isfinite(amp)):
            raise ValueError("amplitudes must be finite")
        amp.setflags(write=False)
        index = {p.sites: i for i, p in enumerate(paths)}
        if len(index) != len(paths):
            raise ValueError("omega_plus contains duplicate paths")
        sites = self.sites
        if sites is None:
            sites = 1 + max(max(p.sites) for p in paths)
        object.__setattr__(self, "omega_plus", paths)
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "sites", int(sites))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_split", np.column_stack([amp.real, amp.imag]))

    # construction -------------------------------------------------------

    @classmethod
    def from_lattice(cls, config, source: int, target: int | None = None):
        """Context over every admissible path of ``config`` leaving ``source``."""
        from .lattice import enumerate_paths, path_amplitude

        paths = enumerate_paths(config, source, target)
        amps = [path_amplitude(p, config) for p in paths]
        return cls(tuple(paths), np.array(amps), sites=config.sites)

    @classmethod
    def random(cls, size: int, seed: int, sites: int = 8, steps: int = 4):
        """``size`` distinct random paths with random unit-modulus amplitudes."""
        total = sites ** (steps + 1)
        if size > total:
            raise DomainError(f"only {total} distinct paths exist")
        rng = np.random.default_rng(seed)
        codes = np.sort(rng.choice(total, size=size, replace=False))
        paths = []
        for code in codes:
            digits = []
            for _ in range(steps + 1):
                code, r = divmod(int(code), sites)
                digits.append(r)
            paths.append(Path(tuple(reversed(digits))))
        phases = rng.uniform(0.0, 2 * np.pi, size=size)
        return cls(tuple(paths), np.exp(1j * phases), sites=sites)

    def normalized(self) -> "MeasureContext":
        """Rescale amplitudes so that ``sum(phi) == 1`` and hence ``Phi(Omega) == 1``."""
        s = self.amplitude.sum()
        if s == 0:
            raise DomainError("sum of amplitudes vanishes; Phi(Omega) = 0")
        return MeasureContext(self.omega_plus, self.amplitude / s, self.sites)

    # geometry -----------------------------------------------------------

    @property
    def steps(self) -> int:
        return self.omega_plus[0].steps

    def __len__(self):
        return len(self.omega_plus)

    @property
    def size(self) -> int:
        """``|Omega|``."""
        return len(self.omega_plus) ** 2

    def index_of(self, path: Path) -> int:
        if path.orientation != FORWARD:
            path = path.reversed()
        try:
            return self._index[path.sites]
        except KeyError:
            raise DomainError(f"path {path.sites} is not in Omega_plus") from None

    def pair(self, i: int, j: int) -> TrajectoryPair:
        return TrajectoryPair(self.omega_plus[i], self.omega_plus[j].reversed())

    def _check_point(self, point: Point):
        t, x = point
        if not (0 <= t <= self.steps and 0 <= x < self.sites):
            raise ConstraintError(f"point {point} lies outside the lattice")

    def passing(self, point: Point) -> np.ndarray:
        """Indicator over ``omega_plus`` of paths through ``point``."""
        self._check_point(point)
        t, x = point
        return np.array([p.sites[t] == x for p in self.omega_plus], dtype=bool)

    def subset(self, paths: Iterable[Path]) -> np.ndarray:
        ind = np.zeros(len(self), dtype=bool)
        for p in paths:
            ind[self.index_of(p)] = True
        return ind

    # events <-> masks ---------------------------------------------------

    def leg_indicators(self, event: SymbolicEvent) -> tuple[np.ndarray, np.ndarray]:
        """Per-leg indicators: a symbolic event is always a rectangle."""
        clash = event.confirm & event.exclude
        clash |= (event.plus_through | event.minus_through) & event.exclude
        if clash:
            raise ConstraintError(f"points both required and excluded: {sorted(clash)}")
        for pt in event.points():
            self._check_point(pt)
        plus = np.ones(len(self), dtype=bool)
        minus = np.ones(len(self), dtype=bool)
        for pt in event.confirm:
            ind = self.passing(pt)
            plus &= ind
            minus &= ind
        for pt in event.exclude:
            ind = self.passing(pt)
            plus &= ~ind
            minus &= ~ind
        for pt in event.plus_through:
            plus &= self.passing(pt)
        for pt in event.minus_through:
            minus &= self.passing(pt)
        return plus, minus

    def mask(self, event: Event) -> np.ndarray:
        """Boolean ``n x n`` mask; entry ``(i, j)`` is the pair ``(p_i, rev p_j)``."""
        if self.size > OMEGA_GUARD:
            raise CapacityError(f"|Omega| = {self.size} exceeds guard {OMEGA_GUARD}")
        if isinstance(event, SymbolicEvent):
            plus, minus = self.leg_indicators(event)
            return np.outer(plus, minus)
        m = np.zeros((len(self), len(self)), dtype=bool)
        for pr in event.pairs:
            if pr.plus.steps != self.steps:
                raise DomainError("pair has the wrong number of steps")
            m[self.index_of(pr.plus), self.index_of(pr.minus)] = True
        return m

    def event_from_mask(self, mask: np.ndarray) -> ExplicitEvent:
        ii, jj = np.nonzero(mask)
        return ExplicitEvent(frozenset(self.pair(i, j) for i, j in zip(ii, jj)))

    # measure ------------------------------------------------------------

    def measure_mask(self, mask: np.ndarray) -> complex:
        """``sum over (i, j) in mask of phi_i conj(phi_j)``.

        Evaluated row by row as ``sum_i phi_i conj(sum_j m_ij phi_j)``; for a
        pure mask every row sum is the same forward sum, which keeps pure
        events accurate even when that sum nearly cancels.
        """
        m = np.asarray(mask, dtype=np.float64)
        rows = m @ self._split
        rowsum = rows[:, 0] + 1j * rows[:, 1]
        return complex(np.vdot(rowsum, self.amplitude))

    def measure_masks(self, masks: np.ndarray) -> np.ndarray:
        """``measure_mask`` over a ``(k, n, n)`` stack, in one pass."""
        rows = np.asarray(masks, dtype=np.float64) @ self._split
        rowsum = rows[..., 0] + 1j * rows[..., 1]
        return rowsum.conj() @ self.amplitude

    def measure(self, event: Event) -> complex:
        return self.measure_mask(self.mask(event))


def expand_symbolic(event: Event, ctx: MeasureContext) -> ExplicitEvent:
    """Explicit set of pairs satisfying a symbolic event's constraints."""
    if isinstance(event, ExplicitEvent):
        return event
    return ctx.event_from_mask(ctx.mask(event))


def measure(event: Event, ctx: MeasureContext) -> complex:
    """Complex probability ``Phi(E) = sum_{g in E} phi(g+) conj(phi(rev g-))``."""
    return ctx.measure(event)


# taxonomy ---------------------------------------------------------------


def is_hermitian_mask(mask: np.ndarray) -> bool:
    return bool(np.array_equal(mask, mask.T))


def pure_factor(mask: np.ndarray) -> np.ndarray | None:
    """Return ``a`` with ``mask == outer(a, a)``, or ``None`` if not pure."""
    a = np.any(mask, axis=1)
    if np.array_equal(mask, np.outer(a, a)):
        return a
    return None


def mixed_blocks(mask: np.ndarray) -> list[np.ndarray] | None:
    """Disjoint sets ``A_k`` with ``mask == sum_k outer(A_k, A_k)``, else ``None``.

    A disjoint union of pure rectangles ``A_k x rev(A_k)`` forces the ``A_k``
    to be pairwise disjoint, so the mask must be the relation matrix of an
    equivalence relation on its support.
    """
    n = mask.shape[0]
    seen = np.zeros(n, dtype=bool)
    blocks = []
    for i in range(n):
        if seen[i] or not mask[i].any():
            continue
        block = mask[i]
        if not block[i]:
            return None
        members = np.flatnonzero(block)
        if not np.all(mask[members] == block) or not np.all(mask[:, members].T == block):
            return None
        seen |= block
        blocks.append(block.copy())
    covered = np.zeros_like(mask)
    for b in blocks:
        covered |= np.outer(b, b)
    if not np.array_equal(covered, mask):
        return None
    return blocks


@dataclass(frozen=True)
class Classification:
    hermitian: bool
    pure: bool
    mixed: bool


def classify_mask(mask: np.ndarray) -> Classification:
    return Classification(
        hermitian=is_hermitian_mask(mask),
        pure=pure_factor(mask) is not None,
        mixed=mixed_blocks(mask) is not None,
    )


def classify(event: Event, ctx: MeasureContext) -> Classification:
    """Hermitian / pure / mixed flags, decided by set comparison after expansion."""
    return classify_mask(ctx.mask(event))


def pure_event(ctx: MeasureContext, paths: Iterable[Path]) -> ExplicitEvent:
    """``A x reversed(A)``."""
    a = ctx.subset(paths)
    return ctx.event_from_mask(np.outer(a, a))


def rectangle(ctx: MeasureContext, plus: Iterable[Path], minus_forward: Iterable[Path]):
    """``A x reversed(B)``."""
    return ctx.event_from_mask(np.outer(ctx.subset(plus), ctx.subset(minus_forward)))


# axiom verification -----------------------------------------------------

ALGEBRAIC_TOL = 1e-12
ACCUMULATED_TOL = 1e-10


@dataclass
class AxiomReport:
    """Worst residual per property over all sampled events."""

    trials: int
    seed: int
    omega_size: int
    phi_omega: complex
    additivity: float = 0.0
    conjugation: float = 0.0
    factorization: float = 0.0
    hermitian_imag: float = 0.0
    pure_relative: float = 0.0
    positivity: float = 0.0
    nonreal_witness: complex | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        out = {k: v for k, v in self.__dict__.items() if k not in ("phi_omega", "nonreal_witness")}
        out["phi_omega"] = [self.phi_omega.real, self.phi_omega.imag]
        w = self.nonreal_witness
        out["nonreal_witness"] = None if w is None else [w.real, w.imag]
        out["passed"] = self.passed
        return out


def _random_split(rng, n):
    """Random event together with a random disjoint split of it."""
    cut = int(rng.integers(4, 150))
    r = rng.integers(0, 256, size=(n, n), dtype=np.uint8)
    e1 = r < cut // 2
    e2 = (r >= cut // 2) & (r < cut)
    return e1 | e2, e1, e2


def _random_mixed(rng, n):
    """Disjoint union of up to four pure blocks over a random subset."""
    labels = rng.integers(-1, 4, size=n)
    return (labels[:, None] == labels[None, :]) & (labels >= 0)[:, None]


def verify_axioms(ctx: MeasureContext, trials: int = 1000, seed: int = 0) -> AxiomReport:
    """Check (A1)-(A3), hermitian reality and pure/mixed positivity on random events.

    Additivity, conjugation and factorization are checked on the normalized
    context (``sum(phi) == 1``), since factorization of rectangles with
    ``Omega`` presupposes ``Phi(Omega) = 1``.  Failures are collected, never
    raised.
    """
    if ctx.size > OMEGA_GUARD:
        raise CapacityError(f"|Omega| = {ctx.size} exceeds guard {OMEGA_GUARD}")
    rng = np.random.default_rng(seed)
    report = AxiomReport(trials=trials, seed=seed, omega_size=ctx.size, phi_omega=0j)
    try:
        nctx = ctx.normalized()
    except DomainError as exc:
        report.failures.append(f"normalization: {exc}")
        return report
    n = len(nctx)
    phi = nctx.amplitude
    full = np.ones((n, n), dtype=bool)
    report.phi_omega = nctx.measure_mask(full)
    if abs(report.phi_omega - 1) > ALGEBRAIC_TOL:
        report.failures.append(f"Phi(Omega) = {report.phi_omega}")

    ones = np.ones(n, dtype=bool)
    stack = np.empty((9, n, n), dtype=bool)
    for _ in range(trials):
        m, e1, e2 = _random_split(rng, n)
        a = rng.random(n) < rng.uniform(0.05, 0.9)
        b = rng.random(n) < rng.uniform(0.05, 0.9)
        stack[0], stack[1], stack[2], stack[3] = m, e1, e2, e1.T
        stack[4] = a[:, None] & b
        stack[5] = a[:, None] & ones
        stack[6] = ones[:, None] & b
        np.logical_or(m, m.T, out=stack[7])
        stack[8] = a[:, None] & a
        v = nctx.measure_masks(stack)

        # (A1) additivity on a random disjoint split
        report.additivity = max(report.additivity, abs(v[0] - (v[1] + v[2])))

        # (A2) conjugation
        report.conjugation = max(report.conjugation, abs(v[3] - np.conj(v[1])))
        if report.nonreal_witness is None and abs(v[1].imag) > 1e-6:
            report.nonreal_witness = complex(v[1])

        # (A3) factorization of a rectangle
        report.factorization = max(report.factorization, abs(v[4] - v[5] * v[6]))

        # hermitian events are real
        report.hermitian_imag = max(report.hermitian_imag, abs(v[7].imag))

        # pure events equal |sum phi|^2; mixed events are sums of those
        expect = abs(phi[a].sum()) ** 2
        rel = abs(v[8] - expect) / expect if expect > 0 else abs(v[8])
        report.pure_relative = max(report.pure_relative, rel)
        report.positivity = max(report.positivity, -v[8].real)
        mixed = _random_mixed(rng, n)
        report.positivity = max(report.positivity, -nctx.measure_mask(mixed).real)

    checks = [
        ("additivity", report.additivity, ACCUMULATED_TOL),
        ("conjugation", report.conjugation, ACCUMULATED_TOL),
        ("factorization", report.factorization, ACCUMULATED_TOL),
        ("hermitian_imag", report.hermitian_imag, ALGEBRAIC_TOL),
        ("pure_relative", report.pure_relative, ALGEBRAIC_TOL),
        ("positivity", report.positivity, ALGEBRAIC_TOL),
    ]
    for name, res, tol in checks:
        if not res <= tol:
            report.failures.append(f"{name}: residual {res:.3e} > {tol:.0e}")
    return report


def all_pairs(ctx: MeasureContext):
    """Iterate over every elementary event of ``ctx`` in canonical order."""
    for i, j in itertools.product(range(len(ctx)), repeat=2):
        yield ctx.pair(i, j)
