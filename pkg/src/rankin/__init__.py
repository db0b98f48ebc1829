"""Rankin-Selberg trilinear forms, archimedean indices and Eisenstein sup-norms."""

__version__ = "0.1.0"

from .errors import (ConvergenceError, DataValidationError, DivergenceError, DomainError, PoleError,
                     RankinError, SingularityError, SlowConvergenceError, StripError, TailError, WeightError)
from .trilinear import SpectralPoint, TrilinearResult, tr_rs_fourier, tr_rs_quadrature
from .archimedean_index import IndexResult, c_sequence, index_bruteforce, index_scan, index_value
from .eisenstein import UpperHalfPoint, eval_fourier_expansion, eval_lattice_sum

__all__ = [
    "__version__",
    "ConvergenceError", "DataValidationError", "DivergenceError", "DomainError", "PoleError",
    "RankinError", "SingularityError", "SlowConvergenceError", "StripError", "TailError", "WeightError",
    "SpectralPoint", "TrilinearResult", "tr_rs_fourier", "tr_rs_quadrature",
    "IndexResult", "c_sequence", "index_bruteforce", "index_scan", "index_value",
    "UpperHalfPoint", "eval_fourier_expansion", "eval_lattice_sum",
]
