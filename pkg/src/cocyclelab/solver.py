"""Solving u o f - u = phi for periodic systems, or certifying why not.

For a system of period q, phi is a coboundary exactly when its Birkhoff
sum over q iterates vanishes everywhere; then

    v(x) = -(1/q) * sum_{j=1}^{q} B^j phi(x)

solves the equation.  When the test fails, the orbit average at a
violating point is the integral of phi against an invariant measure, and
serves as the certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import UnsupportedSystem
from .observables import (
    ZERO,
    FiniteObservable,
    Observable,
    PiecewiseLinearCircle,
    birkhoff_observable,
    birkhoff_sum,
    check_observable,
    cohomological_operator,
    compose_power,
    sup_norm,
)
from .systems import (
    CirclePoint,
    FinitePermutation,
    FinitePoint,
    Point,
    SystemDescriptor,
    orbit_length,
    period,
)


@dataclass(frozen=True)
class ObstructionCertificate:
    witness_point: Point
    orbit_length: int
    birkhoff_value: Fraction
    measure_integral: Fraction


@dataclass(frozen=True)
class Solution:
    u: Observable
    residual: Fraction


@dataclass(frozen=True)
class Obstruction:
    cert: ObstructionCertificate


SolveOutcome = Union[Solution, Obstruction]


def _certificate(sys, phi, x: Point) -> ObstructionCertificate:
    m = orbit_length(sys, x)
    value = birkhoff_sum(sys, phi, m, x)
    return ObstructionCertificate(x, m, value, value / m)


def obstruction_test(sys: SystemDescriptor, phi: Observable) -> Optional[ObstructionCertificate]:
    """None if phi is a coboundary, else a certificate at a violating point.

    Finite systems are checked cycle by cycle (the sum over one cycle
    vanishes iff the sum over q iterates does).  For a rotation the
    function B^q phi is itself a bump sum, and it is identically zero iff
    it vanishes at each of its breakpoints.
    """
    check_observable(sys, phi)
    if isinstance(sys, FinitePermutation):
        for cycle in sys.cycles:
            if sum(phi.values[i] for i in cycle) != 0:
                return _certificate(sys, phi, FinitePoint(cycle[0]))
        return None
    total = birkhoff_observable(sys, phi, period(sys))
    pts, vals = total.knots
    for x, v in zip(pts, vals):
        if v != 0:
            return _certificate(sys, phi, CirclePoint(x))
    return None


def _solve_cycle(phi: FiniteObservable, cycle: tuple[int, ...]) -> dict[int, Fraction]:
    L = len(cycle)
    vals = [phi.values[i] for i in cycle]
    u = {}
    for k, state in enumerate(cycle):
        # B^j phi at f^k(x0) is the sum of j consecutive values starting at k
        acc = ZERO
        total = ZERO
        for j in range(L):
            acc += vals[(k + j) % L]
            total += acc
        u[state] = -total / L
    lowest = min(u.values())
    return {s: v - lowest for s, v in u.items()}


def periodic_solve(sys: SystemDescriptor, phi: Observable) -> SolveOutcome:
    cert = obstruction_test(sys, phi)
    if cert is not None:
        return Obstruction(cert)
    if isinstance(sys, FinitePermutation):
        u_vals = [ZERO] * sys.size
        for cycle in sys.cycles:
            for state, v in _solve_cycle(phi, cycle).items():
                u_vals[state] = v
        u: Observable = FiniteObservable(tuple(u_vals))
    else:
        q = period(sys)
        # sum_{j=1}^q B^j phi = sum_{i=0}^{q-1} (q - i) phi o f^i
        bumps = []
        for i in range(q):
            bumps.extend(compose_power(sys, phi, i).scale(Fraction(i - q, q)).bumps)
        u = PiecewiseLinearCircle(tuple(bumps), -phi.offset * (q + 1) / 2).simplified()
    residual = sup_norm(sys, cohomological_operator(sys, u) - phi)
    return Solution(u, residual)


def invariant_measure_integrals(
    sys: SystemDescriptor, phi: Observable, samples: Iterable[Point] = ()
) -> list[tuple[Point, Fraction]]:
    """Integral of phi against the uniform measure on each listed orbit.

    Finite systems: one entry per cycle.  Rotations: one entry per orbit
    through a breakpoint of phi or one of ``samples``, each orbit listed
    once under its smallest representative.
    """
    check_observable(sys, phi)
    if isinstance(sys, FinitePermutation):
        return [
            (FinitePoint(c[0]), sum((phi.values[i] for i in c), ZERO) / len(c))
            for c in sys.cycles
        ]
    q = period(sys)
    step = Fraction(1, q)
    reps = {b % step for b in phi.breakpoints()}
    reps |= {Fraction(p.coord) % step for p in samples}
    if not reps:
        reps = {ZERO}
    return [
        (CirclePoint(r), birkhoff_sum(sys, phi, q, CirclePoint(r)) / q) for r in sorted(reps)
    ]


def cohomology_dimension(sys: SystemDescriptor) -> int:
    """Dimension of functions modulo coboundaries: one per cycle."""
    if not isinstance(sys, FinitePermutation):
        raise UnsupportedSystem("first cohomology is infinite-dimensional on the circle")
    return len(sys.cycles)
