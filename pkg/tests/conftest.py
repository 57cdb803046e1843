from fractions import Fraction

from hypothesis import settings, strategies as st

from cocyclelab import CirclePoint, CircleRotation, FiniteObservable, FinitePermutation, TentBump
from cocyclelab.observables import PiecewiseLinearCircle

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def rationals(max_den=12, lo=-5, hi=5):
    return st.builds(
        Fraction, st.integers(lo * max_den, hi * max_den), st.integers(1, max_den)
    )


unit_rationals = st.builds(
    lambda num, den: Fraction(num % den, den), st.integers(0, 10**6), st.integers(1, 60)
)

permutations = st.integers(1, 9).flatmap(
    lambda n: st.permutations(list(range(n))).map(lambda p: FinitePermutation(tuple(p)))
)

rotations = st.builds(CircleRotation, unit_rationals)

circle_points = unit_rationals.map(CirclePoint)


@st.composite
def bumps(draw):
    radius = Fraction(draw(st.integers(1, 12)), 24)
    return TentBump(draw(unit_rationals), radius, draw(rationals()))


pwl_observables = st.builds(
    PiecewiseLinearCircle, st.lists(bumps(), max_size=6).map(tuple), rationals()
)


@st.composite
def finite_system_and_observable(draw):
    sys = draw(permutations)
    values = draw(st.lists(rationals(), min_size=sys.size, max_size=sys.size))
    return sys, FiniteObservable(tuple(values))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
