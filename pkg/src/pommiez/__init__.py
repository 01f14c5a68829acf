"""Exact operator calculus on exponential polynomials.

Generalized backward-shift (Pommiez-type) operators with generator g0,
their shift operators, duality with finite derivative-evaluation
functionals, Borel transforms, interpolation kernels, Duhamel products
and a cyclicity classifier -- all over exact Gaussian-rational scalars
with an arbitrary-precision numeric escape hatch.
"""

from .errors import (
    ExponentMismatch,
    ExprSyntaxError,
    InvalidG0,
    NonConvergence,
    NonlinearExponent,
    PommiezError,
    PrecisionExhausted,
    PreconditionViolated,
    SingularAtZero,
    StrictNestingViolated,
    UnsupportedClosedForm,
    ZeroFunction,
)
from .scalar import BigComplex, GaussRational, as_big, exp_scalar
from .poly import Poly, poly_derivative, poly_eval
from .roots import poly_roots
from .funcspace import (
    ExpPoly,
    TruncatedTaylor,
    ZeroStructure,
    exppoly_derivative,
    exppoly_eval,
    exppoly_taylor,
    exppoly_zero_structure,
)
from .region import (
    ConvexPolygon,
    ConvexRegion,
    Weight,
    condition1_sample,
    membership_En,
    support_function,
)
from .operators import (
    OperatorContext,
    PommiezQuotient,
    mult_M,
    orbit,
    phi_n_coefficients,
    pommiez,
    pommiez_at,
    pommiez_exact_on_line,
    pommiez_image,
    series_div_linear,
    shift_T,
    shift_T_eval,
    shift_Ttilde,
    shift_Ttilde_eval,
)
from .duality import (
    DividedSeries,
    Functional,
    apply_functional,
    commutant_apply,
    convolve,
    duhamel,
    laplace_J,
    laplace_J_inverse,
    pair,
)
from .leontiev import (
    BorelTransform,
    OmegaExpansion,
    Y_kernel,
    borel,
    omega,
    omega_expansion,
)
from .cyclicity import (
    ClassifyOptions,
    CyclicityVerdict,
    classify,
    ideal_membership,
    invariant_line_matrix,
    orbit_rank,
    pf_cyclicity_consistency,
)
from .parser import format_exppoly, parse_expr

__version__ = "0.1.0"
