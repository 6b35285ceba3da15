"""Exception hierarchy.

Validation problems derive from :class:`ValueError`, numerical failures from
:class:`RuntimeError`; the command line maps the two families to exit codes
2 and 3.
"""


class ValidationError(ValueError):
    pass


class NumericalError(RuntimeError):
    pass


class DegenerateArcError(ValidationError):
    pass


class ResolutionError(ValidationError):
    pass


class SupportError(ValidationError):
    pass


class SupportOverlapError(ValidationError):
    pass


class IterationFailure(NumericalError):
    def __init__(self, message, residual=None):
        super().__init__(message if residual is None else f"{message} (residual {residual:.3e})")
        self.residual = residual


class BracketFailure(NumericalError):
    pass


class MonotonicityViolation(NumericalError):
    pass
