"""Exception hierarchy shared by every module."""


class ZinqError(Exception):
    """Base class for all errors raised by zinq."""


class BudgetExceeded(ZinqError):
    """A factorization or search ran out of its configured budget."""


class NotPIntegral(ZinqError):
    pass


class NotCoprime(ZinqError):
    pass


class NegativeInput(ZinqError):
    pass


class BoundExceeded(ZinqError):
    pass


class PreconditionViolation(ZinqError):
    pass


class EvenCharacteristic(PreconditionViolation):
    pass


class SearchBudgetExceeded(BudgetExceeded):
    """Locally solvable everywhere, but no global point found within budget.

    Never a proof of unsolvability.
    """


class SearchExhausted(ZinqError):
    pass


class Unsolvable(ZinqError):
    """A conic has no rational point; ``place`` is the local obstruction."""

    def __init__(self, message, place):
        super().__init__(message)
        self.place = place


class NotInTraceSet(ZinqError):
    pass


class NotInT(ZinqError):
    pass


class NotInteger(ZinqError):
    pass


class IsInteger(ZinqError):
    pass
