"""Exception hierarchy shared by all iwacalc modules."""


class IwacalcError(Exception):
    """Base class for all errors raised by iwacalc."""


class PreconditionError(IwacalcError):
    """A mathematical hypothesis or input invariant is violated.

    This is the caller's problem, not a numerical accident: the named
    hypothesis fails for the supplied data.
    """


class IrreducibleError(PreconditionError):
    """A polynomial does not split over the declared coefficient ring."""


class PrecisionError(IwacalcError):
    """The answer is not determined at the working precision.

    Raising instead of guessing is deliberate: callers may retry at a
    higher precision.
    """


class NotFiniteAtBoundError(PrecisionError):
    """A quotient did not stabilize within the configured truncation bound."""

    def __init__(self, message, p_exponent_bound=None, s_order_bound=None):
        super().__init__(message)
        self.p_exponent_bound = p_exponent_bound
        self.s_order_bound = s_order_bound


class ParseError(IwacalcError):
    """An input description file does not match the documented grammar."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column
