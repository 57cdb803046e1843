"""Exact dynamical systems on compact metric spaces.

Two families are supported, both periodic homeomorphisms acting by
isometries:

* ``FinitePermutation``: a bijection of ``{0, ..., size-1}`` with the
  discrete metric.
* ``CircleRotation``: ``x -> x + alpha (mod 1)`` on the circle ``[0, 1)``
  with the arc-length metric, ``alpha`` an exact rational.

A rotation whose period exceeds every horizon a computation inspects is
what the witness construction treats as "non-periodic".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Union

from .errors import PeriodicAtHorizon, VariantMismatch

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class FinitePoint:
    index: int

    def __post_init__(self):
        if isinstance(self.index, bool) or not isinstance(self.index, int):
            raise TypeError(f"FinitePoint index must be an int, got {self.index!r}")
        if self.index < 0:
            raise ValueError(f"FinitePoint index must be non-negative, got {self.index}")

    def __str__(self):
        return str(self.index)


@dataclass(frozen=True)
class CirclePoint:
    """Point of the circle R/Z; the coordinate is reduced into [0, 1)."""

    coord: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coord", Fraction(self.coord) % 1)

    def __str__(self):
        return str(self.coord)


Point = Union[FinitePoint, CirclePoint]


@dataclass(frozen=True)
class FinitePermutation:
    map: tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.map)
        if not images:
            raise ValueError("permutation must act on at least one point")
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection on 0..{len(images) - 1}: {list(images)}")
        object.__setattr__(self, "map", images)

    @property
    def size(self) -> int:
        return len(self.map)

    @cached_property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Cycles in order of their smallest element, each starting there."""
        seen = [False] * self.size
        out = []
        for start in range(self.size):
            if seen[start]:
                continue
            cycle = []
            i = start
            while not seen[i]:
                seen[i] = True
                cycle.append(i)
                i = self.map[i]
            out.append(tuple(cycle))
        return tuple(out)

    @cached_property
    def _position(self) -> dict[int, tuple[int, int]]:
        # state -> (cycle number, position within that cycle)
        return {s: (c, k) for c, cyc in enumerate(self.cycles) for k, s in enumerate(cyc)}

    def cycle_of(self, index: int) -> tuple[int, ...]:
        return self.cycles[self._position[index][0]]

    def points(self) -> list[FinitePoint]:
        return [FinitePoint(i) for i in range(self.size)]


@dataclass(frozen=True)
class CircleRotation:
    alpha: Fraction

    def __post_init__(self):
        # Fraction is always in lowest terms
        object.__setattr__(self, "alpha", Fraction(self.alpha) % 1)


SystemDescriptor = Union[FinitePermutation, CircleRotation]


@dataclass(frozen=True)
class OrbitSegment:
    base: Point
    start: int
    stop: int
    points: tuple


def check_point(sys: SystemDescriptor, x: Point) -> None:
    if isinstance(sys, FinitePermutation):
        if not isinstance(x, FinitePoint):
            raise VariantMismatch(f"{x!r} is not a point of a finite system")
        if x.index >= sys.size:
            raise VariantMismatch(f"index {x.index} out of range for size {sys.size}")
    elif isinstance(sys, CircleRotation):
        if not isinstance(x, CirclePoint):
            raise VariantMismatch(f"{x!r} is not a circle point")
    else:
        raise VariantMismatch(f"unknown system {sys!r}")


def apply(sys: SystemDescriptor, x: Point, k: int = 1) -> Point:
    """Return f^k(x); ``k`` may be negative."""
    check_point(sys, x)
    if isinstance(sys, CircleRotation):
        return CirclePoint(x.coord + k * sys.alpha)
    c, pos = sys._position[x.index]
    cycle = sys.cycles[c]
    return FinitePoint(cycle[(pos + k) % len(cycle)])


def orbit_segment(sys: SystemDescriptor, x: Point, start: int, stop: int) -> OrbitSegment:
    """Points f^j(x) for j in [start, stop] inclusive."""
    pts = tuple(apply(sys, x, j) for j in range(start, stop + 1))
    return OrbitSegment(x, start, stop, pts)


def circle_distance(a: Fraction, b: Fraction) -> Fraction:
    t = abs(a - b) % 1
    return min(t, 1 - t)


def metric(sys: SystemDescriptor, x: Point, y: Point) -> Fraction:
    check_point(sys, x)
    check_point(sys, y)
    if isinstance(sys, FinitePermutation):
        return Fraction(0) if x.index == y.index else Fraction(1)
    return circle_distance(x.coord, y.coord)


def period(sys: SystemDescriptor) -> int:
    """Minimal q >= 1 with f^q = id."""
    if isinstance(sys, FinitePermutation):
        return lcm(*(len(c) for c in sys.cycles))
    return sys.alpha.denominator


def orbit_length(sys: SystemDescriptor, x: Point) -> int:
    """Minimal m >= 1 with f^m(x) = x."""
    check_point(sys, x)
    if isinstance(sys, FinitePermutation):
        return len(sys.cycle_of(x.index))
    # rotations are free: every orbit has the full period
    return sys.alpha.denominator


def injective_horizon(sys: SystemDescriptor, x: Point, horizon: int) -> bool:
    """True iff f^j(x) != x for every j in 1..horizon."""
    return orbit_length(sys, x) > horizon


def separation_radius(sys: SystemDescriptor, x: Point, horizon: int) -> Fraction:
    """Half the closest return distance of x over iterates 1..horizon.

    Since both system families are isometries, the ball of this radius
    around x is disjoint from each of its first ``horizon`` images.
    """
    if not injective_horizon(sys, x, horizon):
        raise PeriodicAtHorizon(
            f"{x} returns to itself within {horizon} iterates "
            f"(orbit length {orbit_length(sys, x)})",
            period=period(sys),
            horizon=horizon,
        )
    closest = min(metric(sys, apply(sys, x, j), x) for j in range(1, horizon + 1))
    return closest * HALF
