"""Exception types shared across the library."""


class DrintateError(Exception):
    """Base class for all library errors."""


class NonDivisibleDegree(DrintateError):
    pass


class MismatchedBase(DrintateError):
    pass


class UnsupportedField(DrintateError):
    """A field outside the shipped defining-polynomial table was requested."""


class DivisionByIndistinguishableZero(DrintateError):
    """Division by an element with no stored term (zero to precision)."""


class InsufficientPrecision(DrintateError):
    """A coefficient needed for a Newton polygon is zero to precision."""


class AmbiguousMaxRoot(DrintateError):
    """The top Newton segment has length > 1 under max_valuation_root."""


class PrecisionExhausted(DrintateError):
    """Iterative refinement stalled before reaching the requested precision."""


class NotAUnit(DrintateError):
    pass


class UndecidableUnit(DrintateError):
    """Unit test hit an exact tie between the constant and another coefficient."""


class NotInUnitBall(DrintateError):
    pass


class MixedVariable(DrintateError):
    """Twisted arithmetic between a tau-operator and a sigma-operator."""


class TailNotNegligible(DrintateError):
    """A truncated operator sum cannot certify its dropped tail."""


class UncertifiedTail(DrintateError):
    pass


class OutsideLogDomain(DrintateError):
    pass


class TorsionRankDeficit(DrintateError):
    pass


class TowerNotConvergentInWindow(DrintateError):
    pass


class DegenerateLattice(DrintateError):
    pass


class NotInvertibleOnThetaDisc(DrintateError):
    pass


class SplitFailed(DrintateError):
    pass


class ConfigError(DrintateError):
    pass
