"""Exception types raised across the package."""


class ConeError(ValueError):
    """Base class for invalid input or failed numerical contracts."""


class ReprojectionError(ConeError):
    def __init__(self, message, residual):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class DomainError(ConeError):
    """A parameter value lies outside the domain where a profile or trajectory is defined."""


class NonFiniteStateError(ConeError):
    def __init__(self, s):
        super().__init__(f"non-finite curvature or state at s={s!r}")
        self.s = s


class VanishingDenominatorError(ConeError):
    def __init__(self, what, s):
        super().__init__(f"{what} vanishes near s={s!r}")
        self.s = s


class DegenerateArcError(ConeError):
    pass
