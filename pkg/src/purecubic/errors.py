"""Exception hierarchy shared by every layer of the toolkit."""


class PureCubicError(Exception):
    """Base class for all errors raised by this package."""


class InvalidPrime(PureCubicError, ValueError):
    pass


class NotCoprime(PureCubicError, ValueError):
    pass


class BadModulus(PureCubicError, ValueError):
    pass


class ZeroArgument(PureCubicError, ValueError):
    pass


class FactorizationTooHard(PureCubicError):
    pass


class PrecisionExhausted(PureCubicError, ArithmeticError):
    pass


class NotAUnit(PureCubicError, ValueError):
    pass


class LiftSearchFailed(PureCubicError):
    pass


class Reducible(PureCubicError, ValueError):
    pass


class NotMaximalAtQ(PureCubicError, ValueError):
    pass


class EffortExhausted(PureCubicError):
    """A bounded search ran out of budget before reaching a verdict."""


class InconsistentInputs(PureCubicError, ValueError):
    pass
