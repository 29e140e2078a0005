"""Exception hierarchy for fibdyn."""


class FibdynError(Exception):
    """Base class for all errors raised by the engine."""


class InvalidPolynomial(FibdynError, ValueError):
    pass


class NumericOverflow(FibdynError, ArithmeticError):
    """A value-space iterate left the safe double-precision range."""


class PreconditionViolated(FibdynError, ValueError):
    pass


class ConstructionFailed(FibdynError, RuntimeError):
    """A computed constant failed its own sampling check (a bug, not user error)."""


class UnsupportedExponents(FibdynError, NotImplementedError):
    """Operation is only defined for the exponent pair (1, 1)."""


class TolUnreachable(FibdynError, RuntimeError):
    pass


class OutsideDomain(FibdynError, ValueError):
    pass


class HypothesisViolated(FibdynError, ValueError):
    pass


class DegenerateInput(FibdynError, ValueError):
    pass


class NoContour(FibdynError, RuntimeError):
    pass


class IoFailure(FibdynError, OSError):
    pass
