"""Exception hierarchy. Every error raised by the library derives from KickwalkError."""


class KickwalkError(Exception):
    pass


class InvalidSizeError(KickwalkError, ValueError):
    pass


class RepresentationMismatchError(KickwalkError, ValueError):
    pass


class InvalidInputError(KickwalkError, ValueError):
    pass


class BelowChaosThresholdError(KickwalkError, ValueError):
    pass


class UnsupportedRegimeError(KickwalkError, ValueError):
    pass


class LeakageError(KickwalkError, RuntimeError):
    """Probability reached the edge of the periodic momentum lattice."""


class InsufficientSupportError(KickwalkError, ValueError):
    pass


class DegenerateFitError(KickwalkError, ValueError):
    pass


class ConfigValidationError(KickwalkError, ValueError):
    pass
