"""Exception hierarchy shared by all keynodes modules."""


class KeynodesError(Exception):
    """Base class for every error raised by this package."""


class SpecError(KeynodesError, ValueError):
    """Rate-family parameters violate the family's invariants."""


class DomainError(KeynodesError, ValueError):
    """A rate function was evaluated outside [0, 1]."""


class UnknownPreset(KeynodesError, KeyError):
    pass


class NumericalFailure(KeynodesError, ArithmeticError):
    """The integrator could not make progress (step underflow or blow-up)."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class HorizonExceeded(KeynodesError):
    """The stopping condition was not met before the horizon cap.

    Carries whatever partial result was available at the cap.
    """

    def __init__(self, message, partial=None, bound=None, t=None):
        super().__init__(message)
        self.partial = partial
        self.bound = bound
        self.t = t


class InvalidK(KeynodesError, ValueError):
    pass


class ModeError(KeynodesError, ValueError):
    pass


class UnreachableGamma(KeynodesError):
    """The mean-field activation fraction never reaches the threshold."""

    def __init__(self, gamma, fixed_point):
        super().__init__(
            f"threshold gamma={gamma:g} is unreachable: activation fraction "
            f"saturates at fixed point {fixed_point:.10g}"
        )
        self.gamma = gamma
        self.fixed_point = fixed_point


class DegenerateSurvival(KeynodesError, ArithmeticError):
    pass


class InvalidParams(KeynodesError, ValueError):
    pass


class DegenerateVariance(KeynodesError, ArithmeticError):
    """Degree assortativity is undefined because all endpoint degrees agree."""


class EmptyOverlap(KeynodesError, ValueError):
    pass


class ConfigError(KeynodesError, ValueError):
    pass
