"""Special functions and quadrature rules used across the package."""

from .quadrature import (QuadratureSpec, UnitRule, adaptive, power_sine_quad, real_line_fourier,
                         singular_circle_quad, tanh_sinh_rule, unit_rule)
from .special import bessel_k, completed_zeta, gamma, hurwitz_zeta, log_gamma, rgamma, zeta

__all__ = [
    "QuadratureSpec", "UnitRule", "adaptive", "power_sine_quad", "real_line_fourier",
    "singular_circle_quad", "tanh_sinh_rule", "unit_rule",
    "bessel_k", "completed_zeta", "gamma", "hurwitz_zeta", "log_gamma", "rgamma", "zeta",
]
