"""Numerical toolkit for free spectrahedra, spectraballs and the pencils around them.

Membership tests, algebra certificates, free-function calculus and
automorphism-jet analysis, all driven by seeded, reproducible suites.
"""

from .errors import (
    FreespecError,
    HypothesisError,
    NotHermitianError,
    NotNilpotentError,
    NotPositiveDefiniteError,
    ShapeError,
    SingularResolventError,
)
from .freesets import (
    FreePolynomial,
    Membership,
    PencilContext,
    Realization,
    Region,
    cal_L,
    classify,
    commuting_context,
    example_context_s2,
    fp_membership_quad,
    make_E,
    make_Ec,
    make_Er,
    make_R,
    pseudo_ellipse_context,
)
from .suites import SUITES, RunConfig, run_suite

__version__ = "0.1.0"

__all__ = [
    "FreespecError",
    "HypothesisError",
    "NotHermitianError",
    "NotNilpotentError",
    "NotPositiveDefiniteError",
    "ShapeError",
    "SingularResolventError",
    "FreePolynomial",
    "Membership",
    "PencilContext",
    "Realization",
    "Region",
    "cal_L",
    "classify",
    "commuting_context",
    "example_context_s2",
    "fp_membership_quad",
    "make_E",
    "make_Ec",
    "make_Er",
    "make_R",
    "pseudo_ellipse_context",
    "SUITES",
    "RunConfig",
    "run_suite",
]
