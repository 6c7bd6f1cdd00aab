"""Exception types raised across the package."""


class QsealError(Exception):
    """Base class for every error raised by qseal."""


class DimensionMismatch(QsealError, ValueError):
    pass


class NotHermitian(QsealError, ValueError):
    pass


class NoConvergence(QsealError, RuntimeError):
    pass


class InvalidDensityMatrix(QsealError, ValueError):
    pass


class QmaxOutOfRange(QsealError, ValueError):
    pass


class QmaxZero(QsealError, ValueError):
    """The two reduced states coincide, so there is no bit to read."""


class QOutOfRange(QsealError, ValueError):
    pass


class ParamOutOfRange(QsealError, ValueError):
    pass


class WrongOutcomeCount(QsealError, ValueError):
    pass


class IncompletePovm(QsealError, ValueError):
    pass


class SingularRetraction(QsealError, ValueError):
    pass


class ParseError(QsealError, ValueError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class NormalizationError(QsealError, ValueError):
    pass


class NoFeasiblePoint(QsealError, RuntimeError):
    """No optimizer restart met the classical-distance tolerance."""


class BoundViolation(QsealError, AssertionError):
    """A POVM beat the min-max fidelity bound on the stringent scheme."""

    def __init__(self, message, q=None, povm=None):
        self.q = q
        self.povm = povm
        super().__init__(message)
