"""Exception hierarchy shared by every module."""


class PadicLFError(Exception):
    """Base class for all library errors."""


class DomainError(PadicLFError, ValueError):
    """Argument lies outside the convergence domain of a series."""


class NotSimpleRoot(PadicLFError, ValueError):
    """Hensel lifting requested at a residue where f' vanishes mod p."""


class InsufficientPrecision(PadicLFError):
    """A value cannot be certified at the working precision."""


# the pipeline and groups modules use this name
PrecisionInsufficient = InsufficientPrecision


class UncertifiedTail(InsufficientPrecision):
    """The tail certificate of a truncated series does not cover the query."""


class ZeroSeries(PadicLFError, ValueError):
    pass


class ZeroElement(PadicLFError, ValueError):
    pass


class BadParameters(PadicLFError, ValueError):
    pass


class NoSolutionFound(PadicLFError):
    pass


class InconsistentSystem(PadicLFError):
    """Mixed partials of the exponential system disagree (model bug)."""


class InfeasibleParameters(PadicLFError, ValueError):
    pass


class AdditionFormulaUndefined(PadicLFError):
    pass


class ZeroValue(PadicLFError):
    pass


class LinearFormZero(PadicLFError):
    """l(u) = 0 was certified exactly; a legitimate outcome, not a failure."""


class NonMonogenic(PadicLFError, ValueError):
    """Z[theta] is not the maximal order of the field."""


class UnsupportedPlace(PadicLFError, ValueError):
    pass
