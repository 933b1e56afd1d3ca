"""Exception hierarchy shared by every module."""


class RMTorsionError(ValueError):
    """Base class; the CLI maps these to exit code 2."""


class NotTotallyReal(RMTorsionError):
    pass


class NotARing(RMTorsionError):
    pass


class UnsupportedDegree(RMTorsionError):
    pass


class ZeroIdeal(RMTorsionError):
    pass


class NotInAmbientGroup(RMTorsionError):
    pass


class EqualCusps(RMTorsionError):
    pass


class NotPrime(RMTorsionError):
    pass


class NotFullDimensional(RMTorsionError):
    pass


class BoxTooLarge(RMTorsionError):
    pass


class NotSemisimple(RMTorsionError):
    pass
