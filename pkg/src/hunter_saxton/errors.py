"""Exception hierarchy for the solver."""


class HSError(Exception):
    """Base class for all solver errors."""


class WindowTooSmall(HSError):
    pass


class NonMonotoneInput(HSError):
    pass


class ZeroEnergyNeedsDt(HSError):
    pass


class DtExceedsCfl(HSError):
    pass


class TauExceedsCfl(HSError):
    pass


class BreakpointCollision(HSError):
    pass


class RangeError(HSError):
    pass


class DegenerateFit(HSError):
    pass


class SupportNotCovered(HSError):
    pass


class InvalidCustomData(HSError):
    pass


class ConfigError(HSError):
    """Raised for malformed run configurations; ``pointer`` is a JSON pointer."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
