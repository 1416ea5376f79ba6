"""Exception types raised by the kernel."""


class CarlitzError(Exception):
    """Base class for all kernel errors."""


class InversionOfZero(CarlitzError, ZeroDivisionError):
    pass


class PrecisionLoss(CarlitzError):
    """An inverse twist was requested for an element that is not a q-th power."""


class PrecisionExhausted(CarlitzError):
    """Tracked precision is too small to draw the requested conclusion."""


class DivergentEvaluation(CarlitzError):
    pass


class ShapeMismatch(CarlitzError, ValueError):
    pass


class ConfigError(CarlitzError, ValueError):
    pass
