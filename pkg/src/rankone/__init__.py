"""Spherical functions and Rellich-type growth checks on rank-one symmetric spaces."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .errors import (ConvergenceError, ExcludedParameterError, NumericalError,
                     PoleError, RankOneError, ValidationError)
from .harish_chandra import (HCCoefficients, SpectralParam, c_function,
                             gamma_coefficients, phi_big, spherical_phi_series)
from .radial import (ConnectionCoefficients, ModeIndex, RadialSolution,
                     connection_coefficients, frame_solutions,
                     hypergeometric_candidate, radial_operator_coefficients,
                     residual, solve_forward)
from .rellich import (GrowthReport, ModelEigenfunction, annulus_mass, classify,
                      gamma_p, hardy_functional, lp_spectrum_contains,
                      oscillation_envelope, psi)
from .space import (RankOneSpace, ball_volume, complex_hyperbolic, jacobian,
                    make_space, octonionic_plane, quaternionic_hyperbolic,
                    real_hyperbolic)
from .special import complex_gamma, gauss_2f1, log_complex_gamma, reciprocal_gamma

__all__ = [
    "BACKEND", "ConnectionCoefficients", "ConvergenceError", "ExcludedParameterError",
    "GrowthReport", "HCCoefficients", "ModeIndex", "ModelEigenfunction", "NumericalError",
    "PoleError", "RadialSolution", "RankOneError", "RankOneSpace", "SpectralParam",
    "ValidationError", "annulus_mass", "ball_volume", "c_function", "classify",
    "complex_gamma", "complex_hyperbolic", "connection_coefficients", "frame_solutions",
    "gamma_coefficients", "gamma_p", "gauss_2f1", "hardy_functional",
    "hypergeometric_candidate", "jacobian", "log_complex_gamma", "lp_spectrum_contains",
    "make_space", "octonionic_plane", "oscillation_envelope", "phi_big", "psi",
    "quaternionic_hyperbolic", "radial_operator_coefficients", "real_hyperbolic",
    "reciprocal_gamma", "residual", "solve_forward", "spherical_phi_series",
]
