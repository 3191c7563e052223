"""Exact arithmetic for inhomogeneous Bohr sets, their progression structure,
and restricted sums driving multiplicative approximation experiments."""

__version__ = "0.1.0"

from .bohr import (
    BohrSet,
    BohrSpec,
    all_lifts,
    enumerate_bohr,
    is_member,
    lift_bohr,
    restricted_bohr,
    shift_injection_holds,
)
from .counting import (
    CongruenceLattice,
    DavenportCertificate,
    TotientTable,
    alpha_p,
    alpha_p_table,
    congruence_lattice,
    davenport_count,
    euclidean_minima,
    totient_average,
    totient_sieve,
)
from .errors import (
    AmbiguousLift,
    BasePointDrift,
    BudgetExceeded,
    ConstructionError,
    LengthUnderflow,
    MinimaDegenerate,
    NoBasePoint,
    PrecisionExhausted,
    SmallDirichletWitness,
    ValidationError,
)
from .exponents import (
    ExponentReport,
    TargetVector,
    dual_exponent_est,
    exponent_report,
    mult_exponent_est,
    multiplicative_hypothesis,
    simult_exponent_est,
    uniform_inhom_est,
)
from .gap import (
    GAP,
    cardinality_ratio,
    decompose,
    gap_elements,
    inner_gap,
    is_proper,
    outer_gap,
)
from .minima import ConvexBody, MinimaResult, build_body, successive_minima
from .realfield import FixedReal, RealSpec
from .sums import (
    ApproxFunction,
    DyadicTable,
    GallagherResult,
    ModifiedPsi,
    SumResult,
    SupportMask,
    ds_hypothesis_check,
    dyadic_table,
    eta_split_check,
    gallagher_experiment,
    psi_family,
    psi_modified,
    sum_series,
    support_mask,
    t_star_sum,
    t_sum,
    trivial_mask,
)
