"""Exact arithmetic on discretely valued fields: p-adic numbers Q_p and
formal Laurent series F_q((T)), with certified root solving, the p-adic
exponential and logarithm, and Haar/Hausdorff measure on ball families.
"""

from .errors import (
    AllCoefficientsIndistinguishableFromZero,
    ContractionFails,
    DerivativeIndistinguishableFromZero,
    DivisionByIndistinguishableZero,
    DomainError,
    HypothesesFail,
    InsufficientPrecision,
    ParseError,
    PrecisionExhausted,
    TailInconclusive,
    UltrametricError,
    UndecidedMultipleRoot,
)
from .localfield import (
    FieldDescriptor,
    FieldElement,
    FieldKind,
    Qp,
    invert_one_minus,
    laurent_field,
    laurent_invert,
)
from .measure import (
    BallFamily,
    BallRelation,
    BallSpec,
    ContentEstimate,
    DigitSetReport,
    DimensionValue,
    RationalMeasure,
    admissible_ball,
    ball_relation,
    digit_set_analysis,
    haar_union_measure,
    hausdorff_alpha,
    image_measure,
    maximal_disjointify,
    scale_family,
)
from .rootfind import (
    HenselProblem,
    HypothesisReport,
    RootCertificate,
    StrassmannReport,
    check_hypotheses,
    enumerate_roots,
    fixed_point_solve,
    hensel_solve,
    strassmann_bound,
)
from .series import TailProfile, TruncatedSeries, polynomial
from .special import e_min, exp_eval, exp_functional_check, exp_series, log_solve
from .valuation import (
    INFINITY,
    Magnitude,
    Valuation,
    factorial_valuation,
    is_infinite,
    is_prime,
    vp,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
