"""Exception hierarchy shared by every module."""


class KorovkinError(Exception):
    """Base class for all package errors."""


class DomainError(KorovkinError, ValueError):
    """Input lies outside the domain an object or operation is defined on."""


class PreconditionError(KorovkinError, ValueError):
    """A documented precondition of an operation does not hold."""


class InvariantError(KorovkinError, ValueError):
    """A constructed object violates one of its invariants."""


class ExprSyntaxError(KorovkinError, ValueError):
    """Function expression could not be parsed.

    ``offset`` is the 0-based byte offset at which parsing failed.
    """

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class EvaluationError(KorovkinError, ArithmeticError):
    """Expression or function evaluation produced a non-finite value."""


class GateRefused(KorovkinError):
    """The hypothesis gate of a convergence experiment failed."""

    def __init__(self, report):
        super().__init__(f"hypothesis gate refused: {report.summary()}")
        self.report = report
