"""Instability witnesses for systems that look non-periodic up to a horizon.

At level n a point x_n and radius r_n are chosen so the balls
f^j(B(x_n, r_n)) are pairwise disjoint for |j| <= 2^n.  The observable

    u_n = sum_{|j| < 2^n} (1 - |j|/2^n) * tent(f^j(x_n), r_n)

has sup norm 1, vanishes at f^{2^n}(x_n) and so stays at quotient
distance >= 1/2 from the invariant functions, while its coboundary
phi_n = u_n o f - u_n has sup norm exactly 2^-n.  The ratio between the
two is unbounded in n, so the inverse of the cohomological operator is
not bounded and the coboundary space is not closed.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InvalidRadius, PeriodicAtHorizon
from .observables import (
    ZERO,
    FiniteObservable,
    Observable,
    PiecewiseLinearCircle,
    TentBump,
    all_breakpoints,
    cohomological_operator,
    evaluate,
    quotient_norm_lower_bound,
    sup_norm,
)
from .systems import (
    CirclePoint,
    CircleRotation,
    FinitePermutation,
    FinitePoint,
    Point,
    SystemDescriptor,
    apply,
    check_point,
    injective_horizon,
    metric,
    orbit_length,
    period,
    separation_radius,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class WitnessParams:
    n: int
    seed_point: Optional[Point] = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"witness level must be >= 1, got {self.n}")


@dataclass(frozen=True)
class WitnessReport:
    n: int
    x_n: Point
    r_n: Fraction
    horizon_used: int
    sup_u: Fraction
    u_at_far_point: Fraction
    sup_phi: Fraction
    quotient_lb: Fraction
    amplification: Fraction
    support_disjoint: bool
    expanded_matches_direct: bool
    phi_at_orbit: tuple[Fraction, ...] = ()

    @property
    def identities_hold(self) -> bool:
        scale = Fraction(1, 2**self.n)
        return (
            self.sup_u == 1
            and self.u_at_far_point == 0
            and self.sup_phi == scale
            and all(abs(v) == scale for v in self.phi_at_orbit)
            and self.quotient_lb >= Fraction(1, 2)
            and self.amplification >= 2 ** (self.n - 1)
            and self.support_disjoint
            and self.expanded_matches_direct
        )


def witness_horizon(n: int) -> int:
    # u_n o f - u_n touches f^j(B_n) for j in [-2^n, 2^n - 1]; all lags up
    # to 2^{n+1} - 1 must separate
    return 2 ** (n + 1) - 1


def _default_seed(sys: SystemDescriptor) -> Point:
    if isinstance(sys, CircleRotation):
        return CirclePoint(ZERO)
    return FinitePoint(0)


def find_witness_point(
    sys: SystemDescriptor, n: int, seed: Optional[Point] = None
) -> tuple[Point, int]:
    """A point whose first 2^{n+1} - 1 iterates avoid it, and that horizon."""
    H = witness_horizon(n)
    candidates: list[Point]
    if seed is not None:
        check_point(sys, seed)
        candidates = [seed]
    elif isinstance(sys, FinitePermutation):
        candidates = [FinitePoint(c[0]) for c in sys.cycles]
    else:
        candidates = [_default_seed(sys)]
    for x in candidates:
        if injective_horizon(sys, x, H):
            return x, H
    longest = max(orbit_length(sys, x) for x in candidates)
    raise PeriodicAtHorizon(
        f"level {n} needs an orbit longer than {H}, longest available is {longest} "
        f"(period {period(sys)})",
        period=period(sys),
        horizon=H,
    )


def _bump_sum(
    sys: SystemDescriptor, x_n: Point, r_n: Fraction, weights: dict[int, Fraction]
) -> Observable:
    """sum_j w_j * chi_{f^j(B)}(y) * (r - d(f^{-j}(y), x_n)) / r."""
    if isinstance(sys, CircleRotation):
        return PiecewiseLinearCircle(
            tuple(TentBump(apply(sys, x_n, j).coord, r_n, w) for j, w in weights.items())
        )
    values = []
    for y in sys.points():
        total = ZERO
        for j, w in weights.items():
            d = metric(sys, apply(sys, y, -j), x_n)
            if d < r_n:
                total += w * (r_n - d) / r_n
        values.append(total)
    return FiniteObservable(tuple(values))


def supports_disjoint(sys: SystemDescriptor, centers: list[Point], r: Fraction) -> bool:
    """Open balls of radius r around the centers are pairwise disjoint."""
    if isinstance(sys, FinitePermutation):
        return len({c.index for c in centers}) == len(centers) and r <= 1
    coords = sorted(c.coord for c in centers)
    if len(coords) < 2:
        return True
    gaps = [b - a for a, b in zip(coords, coords[1:])]
    gaps.append(coords[0] + 1 - coords[-1])
    return min(gaps) >= 2 * r


def build_un(sys: SystemDescriptor, x_n: Point, r_n: Fraction, n: int) -> Observable:
    half = 2**n
    centers = [apply(sys, x_n, j) for j in range(-half + 1, half)]
    if not supports_disjoint(sys, centers, r_n):
        raise InvalidRadius(f"radius {r_n} makes the level-{n} bump supports overlap")
    weights = {j: 1 - Fraction(abs(j), half) for j in range(-half + 1, half)}
    return _bump_sum(sys, x_n, r_n, weights)


def build_phin_direct(sys: SystemDescriptor, u_n: Observable) -> Observable:
    return cohomological_operator(sys, u_n)


def expanded_weights(n: int) -> dict[int, Fraction]:
    """Tent weights of phi_n indexed by j, the bump centred at f^j(x_n).

    Two boundary blocks at j = -2^n (+2^-n) and j = 2^n - 1 (-2^-n), and
    interior weights (|j| - |j+1|)/2^n for j in [-2^n + 1, 2^n - 2].
    """
    half = 2**n
    weights = {-half: Fraction(1, half)}
    for j in range(-half + 1, half - 1):
        weights[j] = Fraction(abs(j) - abs(j + 1), half)
    weights[half - 1] = Fraction(-1, half)
    return weights


def build_phin_expanded(sys: SystemDescriptor, x_n: Point, r_n: Fraction, n: int) -> Observable:
    return _bump_sum(sys, x_n, r_n, expanded_weights(n))


def same_function(sys: SystemDescriptor, a: Observable, b: Observable) -> bool:
    """Exact equality of two observables as functions."""
    if isinstance(a, FiniteObservable):
        return a.values == b.values
    pts = all_breakpoints(a, b)
    if not pts:
        return a.offset == b.offset
    return all(a(x) == b(x) for x in pts)


def witness_report(sys: SystemDescriptor, params: WitnessParams) -> WitnessReport:
    n = params.n
    x_n, H = find_witness_point(sys, n, params.seed_point)
    r_n = separation_radius(sys, x_n, H)
    u_n = build_un(sys, x_n, r_n, n)
    phi = build_phin_direct(sys, u_n)
    phi_exp = build_phin_expanded(sys, x_n, r_n, n)
    half = 2**n

    centers = [apply(sys, x_n, j) for j in range(-half + 1, half)]
    sup_u = sup_norm(sys, u_n)
    sup_phi = sup_norm(sys, phi)
    lb = quotient_norm_lower_bound(sys, u_n, x_n, half)
    report = WitnessReport(
        n=n,
        x_n=x_n,
        r_n=r_n,
        horizon_used=H,
        sup_u=sup_u,
        u_at_far_point=evaluate(sys, u_n, apply(sys, x_n, half)),
        sup_phi=sup_phi,
        quotient_lb=lb,
        amplification=lb / sup_phi,
        support_disjoint=supports_disjoint(sys, centers, r_n),
        expanded_matches_direct=same_function(sys, phi, phi_exp),
        phi_at_orbit=tuple(evaluate(sys, phi, apply(sys, x_n, j)) for j in range(-half, half)),
    )
    if evaluate(sys, u_n, x_n) != sup_u:
        log.warning("level %d: sup of u_n not attained at x_n", n)
    return report


def _report_for_level(args):
    sys, n, seed = args
    return witness_report(sys, WitnessParams(n, seed))


def instability_sweep(
    sys: SystemDescriptor,
    n_max: int,
    seed: Optional[Point] = None,
    parallel: bool = False,
    workers: Optional[int] = None,
) -> list[WitnessReport]:
    """Witness reports for levels 1..n_max, in level order."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    # fail before doing any work if the deepest level is out of reach
    find_witness_point(sys, n_max, seed)
    jobs = [(sys, n, seed) for n in range(1, n_max + 1)]
    if parallel and n_max > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_report_for_level, jobs))
    return [_report_for_level(job) for job in jobs]
