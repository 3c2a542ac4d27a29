"""Exception hierarchy shared by all modules."""


class RunLengthError(Exception):
    """Base class for every error raised by this package."""


class SpecSyntaxError(RunLengthError, ValueError):
    """Malformed measure spec document.

    ``offset`` is the character offset of the problem when known.
    """

    def __init__(self, msg, offset=None):
        if offset is not None:
            msg = f"{msg} (at offset {offset})"
        super().__init__(msg)
        self.offset = offset


class InvalidMeasure(RunLengthError, ValueError):
    pass


class NotTotalOrder(RunLengthError, ValueError):
    pass


class NotProbability(RunLengthError, ValueError):
    pass


class DegenerateMeasure(RunLengthError, ValueError):
    pass


class ModeError(RunLengthError, TypeError):
    """Rational and float arithmetic were mixed, or an exact result is impossible."""


class PoleError(RunLengthError, ArithmeticError):
    pass


class DiffuseUnsupported(RunLengthError, ValueError):
    pass


class BudgetExceeded(RunLengthError, RuntimeError):
    pass
