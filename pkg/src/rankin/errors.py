"""Exception hierarchy shared by all modules."""


class RankinError(Exception):
    """Base class for every error raised by the library."""


class DomainError(RankinError, ValueError):
    """Argument outside the domain where the quantity is defined."""


class PoleError(DomainError):
    """Argument sits on (or numerically at) a pole."""


class DivergenceError(RankinError, ValueError):
    """The requested integral or series does not converge."""


class StripError(DomainError):
    """Spectral parameter outside the open critical strip 0 < Re s < 1."""


class TailError(RankinError):
    """A tail estimate failed, so the truncated result cannot be trusted."""


class ConvergenceError(RankinError):
    """An iterative or adaptive procedure did not reach its tolerance."""


class WeightError(DomainError):
    """The Siegel-set weight exponent is outside its admissible range."""


class SlowConvergenceError(ConvergenceError):
    """The series converges too slowly for the requested tolerance."""


class DataValidationError(RankinError, ValueError):
    """External data file failed validation."""


class SingularityError(DomainError):
    """Evaluation at a point where the multiplier of a group action vanishes."""
