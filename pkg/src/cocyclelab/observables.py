"""Observables, the cohomological operator and the norms on them.

Observables are exact: a value vector on a finite system, or on the
circle a finite sum of tent bumps plus a constant.  The circle class is
closed under rotation, so ``u o f - u`` is computed symbolically.

The sup norm of a circle observable is read off its knots, the sorted
breakpoints together with the function values there.  Knots are produced
by a single sweep over slope changes, independently of ``evaluate``,
which sums the bumps directly.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import UnsupportedSystem, VariantMismatch
from .systems import (
    HALF,
    CircleRotation,
    FinitePermutation,
    FinitePoint,
    Point,
    SystemDescriptor,
    apply,
    check_point,
    circle_distance,
)

ZERO = Fraction(0)


@dataclass(frozen=True)
class TentBump:
    """``weight * max(0, 1 - d(x, center) / radius)``, supported on B(center, radius)."""

    center: Fraction
    radius: Fraction
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", Fraction(self.center) % 1)
        object.__setattr__(self, "radius", Fraction(self.radius))
        object.__setattr__(self, "weight", Fraction(self.weight))
        if not 0 < self.radius <= HALF:
            raise ValueError(f"bump radius must lie in (0, 1/2], got {self.radius}")

    def __call__(self, x: Fraction) -> Fraction:
        d = circle_distance(x, self.center)
        if d >= self.radius:
            return ZERO
        return self.weight * (self.radius - d) / self.radius

    def shifted(self, delta: Fraction) -> TentBump:
        return TentBump(self.center + delta, self.radius, self.weight)

    def breakpoints(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.center, (self.center - self.radius) % 1, (self.center + self.radius) % 1)


@dataclass(frozen=True)
class FiniteObservable:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    def __add__(self, other):
        if not isinstance(other, FiniteObservable) or len(other.values) != len(self.values):
            return NotImplemented
        return FiniteObservable(tuple(a + b for a, b in zip(self.values, other.values)))

    def __neg__(self):
        return FiniteObservable(tuple(-v for v in self.values))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> FiniteObservable:
        c = Fraction(c)
        return FiniteObservable(tuple(c * v for v in self.values))


@dataclass(frozen=True)
class PiecewiseLinearCircle:
    bumps: tuple[TentBump, ...] = ()
    offset: Fraction = ZERO

    def __post_init__(self):
        object.__setattr__(self, "bumps", tuple(self.bumps))
        object.__setattr__(self, "offset", Fraction(self.offset))

    def __add__(self, other):
        if not isinstance(other, PiecewiseLinearCircle):
            return NotImplemented
        return PiecewiseLinearCircle(self.bumps + other.bumps, self.offset + other.offset)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> PiecewiseLinearCircle:
        c = Fraction(c)
        return PiecewiseLinearCircle(
            tuple(TentBump(b.center, b.radius, c * b.weight) for b in self.bumps),
            c * self.offset,
        )

    def shifted(self, delta: Fraction) -> PiecewiseLinearCircle:
        """The function x -> self(x + delta)."""
        return PiecewiseLinearCircle(tuple(b.shifted(-delta) for b in self.bumps), self.offset)

    def simplified(self) -> PiecewiseLinearCircle:
        """Merge bumps sharing center and radius; drop zero weights."""
        merged: dict[tuple[Fraction, Fraction], Fraction] = {}
        for b in self.bumps:
            key = (b.center, b.radius)
            merged[key] = merged.get(key, ZERO) + b.weight
        bumps = tuple(TentBump(c, r, w) for (c, r), w in sorted(merged.items()) if w)
        return PiecewiseLinearCircle(bumps, self.offset)

    def breakpoints(self) -> list[Fraction]:
        """Sorted distinct kinks; empty for a constant function."""
        return sorted({p for b in self.bumps for p in b.breakpoints()})

    @cached_property
    def _centers(self) -> tuple[list[Fraction], list[TentBump], Fraction]:
        order = sorted(self.bumps, key=lambda b: b.center)
        reach = max((b.radius for b in order), default=ZERO)
        return [b.center for b in order], order, reach

    def __call__(self, x) -> Fraction:
        x = Fraction(x) % 1
        centers, order, reach = self._centers
        if not order:
            return self.offset
        # only bumps whose center lies within the largest radius can be nonzero at x
        if reach >= HALF:
            candidates: Iterable[TentBump] = order
        else:
            lo, hi = x - reach, x + reach
            if lo < 0:
                spans = [(lo + 1, Fraction(1)), (ZERO, hi)]
            elif hi >= 1:
                spans = [(lo, Fraction(1)), (ZERO, hi - 1)]
            else:
                spans = [(lo, hi)]
            candidates = [
                order[i]
                for a, b in spans
                for i in range(bisect_left(centers, a), bisect_right(centers, b))
            ]
        return self.offset + sum((b(x) for b in candidates), ZERO)

    @cached_property
    def knots(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        """Sorted breakpoints and the exact function values there.

        Computed by sweeping slope changes: each bump adds ``w/r`` to the
        slope at ``c - r``, ``-2w/r`` at ``c`` and ``w/r`` at ``c + r``.
        """
        pts = self.breakpoints()
        if not pts:
            return (ZERO,), (self.offset,)
        delta: dict[Fraction, Fraction] = {}
        for b in self.bumps:
            s = b.weight / b.radius
            c, lo, hi = b.breakpoints()
            delta[lo] = delta.get(lo, ZERO) + s
            delta[c] = delta.get(c, ZERO) - 2 * s
            delta[hi] = delta.get(hi, ZERO) + s
        x0 = pts[0]
        value = self(x0)
        slope = ZERO
        for b in self.bumps:
            t = (x0 - b.center + b.radius) % 1
            if t < b.radius:
                slope += b.weight / b.radius
            elif t < 2 * b.radius:
                slope -= b.weight / b.radius
        values = [value]
        for prev, cur in zip(pts, pts[1:]):
            value += slope * (cur - prev)
            slope += delta[cur]
            values.append(value)
        return tuple(pts), tuple(values)

    def interpolate(self, x) -> Fraction:
        """Evaluate through the knot table (linear between breakpoints)."""
        pts, vals = self.knots
        x = Fraction(x) % 1
        if not self.bumps:
            return self.offset
        i = bisect_right(pts, x)
        if i == 0 or i == len(pts):
            a, va = pts[-1], vals[-1]
            b, vb = pts[0] + 1, vals[0]
            t = x if x >= a else x + 1
        else:
            a, va = pts[i - 1], vals[i - 1]
            b, vb = pts[i], vals[i]
            t = x
        if t == a:
            return va
        return va + (vb - va) * (t - a) / (b - a)


Observable = Union[FiniteObservable, PiecewiseLinearCircle]


def zero_observable(sys: SystemDescriptor) -> Observable:
    if isinstance(sys, FinitePermutation):
        return FiniteObservable((ZERO,) * sys.size)
    return PiecewiseLinearCircle()


def check_observable(sys: SystemDescriptor, obs: Observable) -> None:
    if isinstance(sys, FinitePermutation):
        if not isinstance(obs, FiniteObservable):
            raise VariantMismatch("finite systems need a FiniteObservable")
        if len(obs.values) != sys.size:
            raise VariantMismatch(
                f"observable has {len(obs.values)} values for a system of size {sys.size}"
            )
    elif isinstance(sys, CircleRotation):
        if not isinstance(obs, PiecewiseLinearCircle):
            raise VariantMismatch("circle rotations need a PiecewiseLinearCircle observable")
    else:
        raise VariantMismatch(f"unknown system {sys!r}")


def evaluate(sys: SystemDescriptor, obs: Observable, x: Point) -> Fraction:
    check_observable(sys, obs)
    check_point(sys, x)
    if isinstance(obs, FiniteObservable):
        return obs.values[x.index]
    return obs(x.coord)


def birkhoff_sum(sys: SystemDescriptor, obs: Observable, q: int, x: Point) -> Fraction:
    """sum_{i=0}^{q-1} obs(f^i(x)); the empty sum (q = 0) is 0."""
    if q < 0:
        raise ValueError("Birkhoff sums are defined for q >= 0")
    total = ZERO
    for i in range(q):
        total += evaluate(sys, obs, apply(sys, x, i))
    return total


def compose_power(sys: SystemDescriptor, obs: Observable, k: int) -> Observable:
    """The observable obs o f^k."""
    check_observable(sys, obs)
    if isinstance(sys, FinitePermutation):
        return FiniteObservable(
            tuple(obs.values[apply(sys, FinitePoint(i), k).index] for i in range(sys.size))
        )
    return obs.shifted(k * sys.alpha)


def birkhoff_observable(sys: SystemDescriptor, obs: Observable, q: int) -> Observable:
    """The function x -> B^q obs(x), in closed form."""
    check_observable(sys, obs)
    if isinstance(obs, FiniteObservable):
        return FiniteObservable(
            tuple(birkhoff_sum(sys, obs, q, FinitePoint(i)) for i in range(sys.size))
        )
    bumps = tuple(b.shifted(-i * sys.alpha) for i in range(q) for b in obs.bumps)
    return PiecewiseLinearCircle(bumps, q * obs.offset)


def cohomological_operator(sys: SystemDescriptor, u: Observable) -> Observable:
    """L_f(u) = u o f - u."""
    check_observable(sys, u)
    if isinstance(u, FiniteObservable):
        return FiniteObservable(tuple(u.values[j] - u.values[i] for i, j in enumerate(sys.map)))
    bumps = tuple(b.shifted(-sys.alpha) for b in u.bumps)
    bumps += tuple(TentBump(b.center, b.radius, -b.weight) for b in u.bumps)
    return PiecewiseLinearCircle(bumps, ZERO)


def sup_norm(sys: SystemDescriptor, obs: Observable) -> Fraction:
    check_observable(sys, obs)
    if isinstance(obs, FiniteObservable):
        return max(abs(v) for v in obs.values)
    return max(abs(v) for v in obs.knots[1])


def _orbit_oscillation(values: Sequence[Fraction]) -> Fraction:
    return (max(values) - min(values)) / 2


def quotient_norm_exact(sys: SystemDescriptor, obs: Observable) -> Fraction:
    """Distance in sup norm from obs to the f-invariant continuous functions.

    On each orbit the best invariant correction is the constant
    -(max + min)/2, leaving half the oscillation of obs along the orbit.
    For a rotation by p/q the orbit of x is x + j/q, and the oscillation
    is a maximum of piecewise-linear functions whose kinks are translates
    of the breakpoints of obs, so scanning those points is exact.
    """
    check_observable(sys, obs)
    if isinstance(sys, FinitePermutation):
        return max(_orbit_oscillation([obs.values[i] for i in c]) for c in sys.cycles)
    if not isinstance(sys, CircleRotation):
        raise UnsupportedSystem(f"no quotient norm for {sys!r}")
    q = sys.alpha.denominator
    step = Fraction(1, q)
    reps = sorted({b % step for b in obs.breakpoints()}) or [ZERO]
    best = ZERO
    for x in reps:
        best = max(best, _orbit_oscillation([obs.interpolate(x + j * step) for j in range(q)]))
    return best


def quotient_norm_lower_bound(sys: SystemDescriptor, obs: Observable, x: Point, k: int) -> Fraction:
    """|obs(x) - obs(f^k x)| / 2: every invariant function agrees at x and f^k(x)."""
    return abs(evaluate(sys, obs, x) - evaluate(sys, obs, apply(sys, x, k))) / 2


def all_breakpoints(*observables: PiecewiseLinearCircle) -> list[Fraction]:
    return sorted({p for obs in observables for p in obs.breakpoints()})


def grid_sup_norm(sys: SystemDescriptor, obs: Observable, grid: int = 100_000) -> float:
    """Floating-point sup over a uniform grid; a cross-check, never exact."""
    check_observable(sys, obs)
    if isinstance(obs, FiniteObservable):
        return float(max(abs(v) for v in obs.values))
    xs = np.arange(grid, dtype=float) / grid
    total = np.full(grid, float(obs.offset))
    for b in obs.bumps:
        t = np.abs(xs - float(b.center)) % 1.0
        d = np.minimum(t, 1.0 - t)
        r = float(b.radius)
        total += float(b.weight) * np.maximum(0.0, (r - d) / r)
    return float(np.max(np.abs(total)))
