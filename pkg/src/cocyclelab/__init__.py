"""Exact cohomological equations over periodic and near-periodic systems."""

from .errors import (
    CocycleLabError,
    InvalidRadius,
    ParseError,
    PeriodicAtHorizon,
    UnsupportedSystem,
    VariantMismatch,
)
from .observables import (
    FiniteObservable,
    PiecewiseLinearCircle,
    TentBump,
    birkhoff_sum,
    cohomological_operator,
    evaluate,
    quotient_norm_exact,
    quotient_norm_lower_bound,
    sup_norm,
)
from .solver import (
    Obstruction,
    ObstructionCertificate,
    Solution,
    cohomology_dimension,
    invariant_measure_integrals,
    obstruction_test,
    periodic_solve,
)
from .systems import (
    CirclePoint,
    CircleRotation,
    FinitePermutation,
    FinitePoint,
    apply,
    injective_horizon,
    metric,
    period,
    separation_radius,
)
from .witness import (
    WitnessParams,
    WitnessReport,
    build_phin_direct,
    build_phin_expanded,
    build_un,
    find_witness_point,
    instability_sweep,
    witness_report,
)

__version__ = "0.1.0"
