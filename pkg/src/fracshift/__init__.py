"""Numerics for fractional Fock spaces and fractional supershift sequences.

Weight families and their moments, Fock-space inner products and kernels,
superoscillation coefficients and supershift limits, Gaussian-oscillatory
integrals, and the series solution of the free Schroedinger equation.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CoefficientOverflowError,
    DivergentMomentError,
    DomainError,
    FracshiftError,
    HypothesisViolationError,
    IncompatibleSpaceError,
    IndexRangeError,
    InsufficientDataError,
    InvalidFamilyError,
    OutOfEnvelopeError,
    SingularityError,
    SingularNodeError,
    ToleranceError,
    UsageError,
)
from .evolution import EvolutionSolution, moment_coefficient, pde_residual, psi_eval, solve  # noqa: E402
from .fock import FockElement, inner_product, kernel_eval, quadrature_inner_product  # noqa: E402
from .oscillatory import I_m_closed, I_m_quadrature, gaussian_moment, hermite_complex  # noqa: E402
from .quadrature import QuadratureConfig  # noqa: E402
from .series import PowerSeries, eval_series, gl_derivative, order_estimate  # noqa: E402
from .supershift import (  # noqa: E402
    SupershiftSpec,
    classical_F,
    coefficients,
    fractional_F,
    supershift_error,
)
from .weights import (  # noqa: E402
    WeightFamily,
    exponential_family,
    gamma_shifted_family,
    mellin_moment,
    mittag_leffler_family,
    parse_family,
    phi_coefficient,
    weight_eval,
)
