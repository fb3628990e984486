"""Generalized Lambert W: the inverse of z * prod (z - t_i)^p_i * e^z near 0."""
from .errors import (
    CenterParameterError,
    CenterWeightError,
    DomainError,
    GenWError,
    ParameterError,
    PochhammerPoleError,
)
from .hyper import (
    LauricellaArgs,
    MultiIndex,
    chu_vandermonde_lhs,
    chu_vandermonde_rhs,
    falling_factorial,
    fn_coefficient,
    fn_coefficient_mp,
    lauricella_fd,
    lauricella_reflection_check,
    multi_indices,
    pochhammer,
)
from .invert import InversionResult, Method, generalized_w, lagrange_coefficient, newton_invert
from .params import ParamSet
from .radius import (
    RadiusReport,
    SaddlePoint,
    amplitude,
    coefficient_asymptotic_check,
    conjectured_radius,
    empirical_radius,
    exponent_g,
    log_branch_offsets,
    pochhammer_ratio_asymptotic,
    psi_factor,
    radius_report,
    saddle_candidates,
)
from .series import (
    CoefficientTable,
    NormalFormTransform,
    build_table,
    evaluate_series,
    forward_map,
    normalize_general_form,
    taylor_coefficient,
)

__version__ = "0.1.0"
