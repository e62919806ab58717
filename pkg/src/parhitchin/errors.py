"""Exception hierarchy shared by all modules."""


class ParHitchinError(Exception):
    """Base class for every error raised by the package."""


class NotAUnit(ParHitchinError, ZeroDivisionError):
    pass


class PrecisionTooLow(ParHitchinError):
    """A valuation or pivot cannot be certified at the working precision."""


class NotCoprime(ParHitchinError):
    pass


class NoConvergence(ParHitchinError):
    pass


class RankMismatch(ParHitchinError):
    pass


class GenericityViolation(ParHitchinError):
    pass


class ExtensionCapExceeded(ParHitchinError):
    pass


class DegreeMismatch(ParHitchinError):
    pass


class NotNilpotent(ParHitchinError):
    pass


class CountOverflow(ParHitchinError, OverflowError):
    """A count exceeded the caller-supplied bound."""


class ConfigError(ParHitchinError, ValueError):
    pass
