"""Exception hierarchy shared by the whole package."""


class DaggerLimError(Exception):
    """Base class for all errors raised by daggerlim."""


class TailDominates(DaggerLimError):
    """The affine tail bound cannot certify that the tail stays above the truncated minimum."""


class TailUnsupported(DaggerLimError):
    """The operation is only defined for finite (tail-free) series."""


class IncompatibleTails(DaggerLimError):
    pass


class InvalidConfig(DaggerLimError):
    pass


class PreconditionViolated(DaggerLimError):
    pass


class HorizonExceeded(DaggerLimError):
    """Neither a lift nor an obstruction could be certified from the closed form."""


class EnvelopeViolation(DaggerLimError):
    """Explicit data contradicts its own declared valuation rule."""


class MissingEnvelope(DaggerLimError):
    pass


class InvalidExhaustion(DaggerLimError):
    pass
