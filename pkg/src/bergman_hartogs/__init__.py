"""Weighted Bergman kernels and Bergman kernels of Hartogs domains.

The kernel of ``D = {(z, w) in G x C^N : ||w||_p < exp(-phi(z))}`` is a
series of weighted Bergman kernels of the base ``G``; this package evaluates
that series, the closed forms it sums to for classical examples, and Monte
Carlo / quadrature oracles that check both.
"""

__version__ = "0.1.0"

from .errors import BergmanError, ConvergenceError, DomainError, SingularityError
from .numerics import (
    MultiIndex,
    enumerate_multiindices,
    int_pow,
    ln_gamma,
    principal_pow,
    radial_moment,
)
from .weights import (
    BaseDomain,
    Constant,
    HartogsSpec,
    NegLogAbs,
    NegLogOneMinusSq,
    eval_phi,
    fiber_radius,
    parse_rational,
    scale_weight,
)
from .base_kernels import (
    alpha_floor_frac,
    base_kernel,
    constant_weight_kernel,
    disk_log_kernel,
    disk_weighted_kernel,
    oracle_radial_kernel,
    punctured_disk_log_kernel,
)
from .hartogs import (
    EvalReport,
    TruncationPolicy,
    c_norm_constant,
    coefficient_stream,
    hartogs_kernel,
    inflate_series,
    series_coefficient,
)
from .closed_forms import (
    HoloFunction,
    ball_kernel,
    bergman_dq,
    dinfty_q,
    dinfty_q_printed,
    hartogs_triangle,
    hartogs_triangle_printed,
    mero_hartogs_rel1,
    mero_hartogs_rel2,
    transform_kernel,
    twisted_triangle,
)
from .verify import (
    IdentityReport,
    LpBall,
    MCEstimate,
    check_c_constant,
    check_identity,
    check_reproducing,
    mc_integrate,
)
