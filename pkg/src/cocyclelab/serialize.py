"""JSON-ready records for systems, observables, outcomes and reports.

Rationals always travel as strings ("p/q" or an integer); floats are
rejected on input so that nothing inexact enters the core.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .errors import ParseError
from .observables import FiniteObservable, Observable, PiecewiseLinearCircle, TentBump
from .solver import Obstruction, SolveOutcome, Solution
from .systems import CirclePoint, CircleRotation, FinitePermutation, FinitePoint, Point, SystemDescriptor
from .witness import WitnessReport


def parse_rational(value: Any) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise ParseError(f"rationals must be strings like '3/7', got {value!r}")
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"malformed rational {value!r}") from None


def fmt(q: Fraction) -> str:
    return str(Fraction(q))


def decimal(q: Fraction, digits: int = 12) -> str:
    return f"{float(q):.{digits}f}"


def _require(record: Any, key: str):
    if not isinstance(record, dict):
        raise ParseError(f"expected a JSON object, got {type(record).__name__}")
    if key not in record:
        raise ParseError(f"missing field {key!r}")
    return record[key]


def system_from_record(record: Any) -> SystemDescriptor:
    kind = _require(record, "type")
    if kind == "perm":
        images = _require(record, "map")
        if not isinstance(images, list) or not all(
            isinstance(i, int) and not isinstance(i, bool) for i in images
        ):
            raise ParseError(f"permutation map must be a list of integers: {images!r}")
        try:
            return FinitePermutation(tuple(images))
        except ValueError as exc:
            raise ParseError(f"malformed permutation: {exc}") from None
    if kind == "rotation":
        alpha = parse_rational(_require(record, "alpha"))
        if not 0 <= alpha < 1:
            raise ParseError(f"rotation angle must lie in [0, 1), got {alpha}")
        return CircleRotation(alpha)
    raise ParseError(f"unknown system type {kind!r}")


def system_to_record(sys: SystemDescriptor) -> dict:
    if isinstance(sys, FinitePermutation):
        return {"type": "perm", "map": list(sys.map)}
    return {"type": "rotation", "alpha": fmt(sys.alpha)}


def observable_from_record(record: Any) -> Observable:
    kind = _require(record, "type")
    if kind == "finite":
        values = _require(record, "values")
        if not isinstance(values, list):
            raise ParseError("finite observable values must be a list")
        return FiniteObservable(tuple(parse_rational(v) for v in values))
    if kind == "pwl":
        offset = parse_rational(record.get("offset", "0"))
        raw = record.get("bumps", [])
        if not isinstance(raw, list):
            raise ParseError("bumps must be a list")
        bumps = []
        for b in raw:
            center = parse_rational(_require(b, "center"))
            radius = parse_rational(_require(b, "radius"))
            weight = parse_rational(_require(b, "weight"))
            try:
                bumps.append(TentBump(center, radius, weight))
            except ValueError as exc:
                raise ParseError(str(exc)) from None
        return PiecewiseLinearCircle(tuple(bumps), offset)
    raise ParseError(f"unknown observable type {kind!r}")


def observable_to_record(obs: Observable) -> dict:
    if isinstance(obs, FiniteObservable):
        return {"type": "finite", "values": [fmt(v) for v in obs.values]}
    return {
        "type": "pwl",
        "offset": fmt(obs.offset),
        "bumps": [
            {"center": fmt(b.center), "radius": fmt(b.radius), "weight": fmt(b.weight)}
            for b in obs.bumps
        ],
    }


def parse_point(sys: SystemDescriptor, text: str) -> Point:
    if isinstance(sys, FinitePermutation):
        try:
            index = int(text)
        except ValueError:
            raise ParseError(f"finite seed must be an integer index, got {text!r}") from None
        if not 0 <= index < sys.size:
            raise ParseError(f"seed index {index} out of range for size {sys.size}")
        return FinitePoint(index)
    return CirclePoint(parse_rational(text))


def point_to_str(x: Point) -> str:
    return str(x)


def outcome_to_record(outcome: SolveOutcome) -> dict:
    if isinstance(outcome, Solution):
        return {
            "status": "solved",
            "u": observable_to_record(outcome.u),
            "residual": fmt(outcome.residual),
        }
    assert isinstance(outcome, Obstruction)
    cert = outcome.cert
    return {
        "status": "obstructed",
        "witness_point": point_to_str(cert.witness_point),
        "orbit_length": str(cert.orbit_length),
        "birkhoff_value": fmt(cert.birkhoff_value),
        "measure_integral": fmt(cert.measure_integral),
    }


_RATIONAL_FIELDS = ("r_n", "sup_u", "u_at_far_point", "sup_phi", "quotient_lb", "amplification")


def report_to_record(report: WitnessReport) -> dict:
    out: dict[str, Any] = {
        "n": report.n,
        "x_n": point_to_str(report.x_n),
        "horizon_used": report.horizon_used,
    }
    for name in _RATIONAL_FIELDS:
        value = getattr(report, name)
        out[name] = fmt(value)
        out[f"{name}_decimal"] = decimal(value)
    out["support_disjoint"] = report.support_disjoint
    out["expanded_matches_direct"] = report.expanded_matches_direct
    return out
