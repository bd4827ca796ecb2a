"""Exception hierarchy shared by all weylab modules."""


class WeylabError(Exception):
    """Base class for every error raised by weylab."""


class Unavailable(WeylabError):
    """No closed-form oracle exists for the requested potential."""


class BranchDomainError(WeylabError, ValueError):
    """The point lies on the branch cut [0, inf) of the Weyl function."""


class IntegrationFailure(WeylabError):
    """The adaptive integrator gave up (step-size underflow or similar)."""

    def __init__(self, message, *, x=None, step=None, z=None):
        super().__init__(message)
        self.x = x
        self.step = step
        self.z = z


class NonConvergence(WeylabError):
    """A truncation or extrapolation procedure did not reach its tolerance."""

    def __init__(self, message, *, est_error=None, evaluation=None):
        super().__init__(message)
        self.est_error = est_error
        self.evaluation = evaluation


class PoleError(WeylabError, ZeroDivisionError):
    """A linear-fractional denominator vanished (within tolerance)."""

    def __init__(self, message, *, where=None):
        super().__init__(message)
        self.where = where


class NotReal(WeylabError):
    """A quantity that must be real came out with a sizeable imaginary part."""


class Indeterminate(WeylabError):
    """A classification sits inside the uncertainty band of a threshold.

    ``report`` carries the best-effort report computed so far.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class EqualParamsRequired(WeylabError, ValueError):
    """Equality testing needs identical (mu, h) on both systems."""


class NoMatch(WeylabError):
    """No Donoghue angle relates the two sampled impedance functions."""


class TailTooLarge(WeylabError):
    """The neglected quadrature tail exceeds the caller's tolerance."""

    def __init__(self, message, tail=None):
        super().__init__(message)
        self.tail = tail


class SpecParseError(WeylabError, ValueError):
    """Malformed command-line spec string; ``position`` is the 0-based column."""

    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        if text:
            message = f"{message}\n  {text}\n  {' ' * position}^"
        super().__init__(message)
