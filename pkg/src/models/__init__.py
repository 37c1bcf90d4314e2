"""Models package: stencil kernels, global indicators and the weight engine."""
from .stencil import StencilWindow, DeltaTag, candidate_reconstruct, smoothness_beta, finite_delta
from .indicators import TauTag, TauKind, TauStarCoeffs, tau, tau_star, tau_definitional, check_tau_forms
from .weights import MappingParams, SchemeSpec, SchemeTag, prm_map, nonlinear_weights, scheme_stencil_width

__all__ = [
    'StencilWindow', 'DeltaTag', 'candidate_reconstruct', 'smoothness_beta', 'finite_delta',
    'TauTag', 'TauKind', 'TauStarCoeffs', 'tau', 'tau_star', 'tau_definitional', 'check_tau_forms',
    'MappingParams', 'SchemeSpec', 'SchemeTag', 'prm_map', 'nonlinear_weights', 'scheme_stencil_width',
]
