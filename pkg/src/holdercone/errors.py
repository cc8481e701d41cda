"""Exception taxonomy shared across the package."""


class HolderConeError(Exception):
    """Base class for all package-specific errors."""


class DomainError(HolderConeError):
    """Evaluation point lies outside the function's domain."""


class OrderUnavailable(HolderConeError):
    """Requested derivative order exceeds what the family provides."""


class ResolutionError(HolderConeError):
    """Grid level outside the supported range."""


class UnsupportedFamily(HolderConeError):
    """Operation not defined for this function family."""


class NegativityError(HolderConeError):
    """Function takes negative values where non-negativity is required."""


class RangeError(HolderConeError):
    """Integer argument outside the documented bounds."""


class SingularPoint(HolderConeError):
    """Root-derivative requested at a zero with non-vanishing derivatives."""


class UnsupportedOrder(HolderConeError):
    """Wavelet order outside the embedded filter table."""


class DegenerateFit(HolderConeError):
    """Too few usable levels for a decay-slope regression."""


class RegularityMismatch(HolderConeError):
    """Smoothness index too large for the wavelet's vanishing moments."""


class ExtensionNotNonnegative(HolderConeError):
    """Formula extension dips below zero outside the unit interval."""


class ConfigError(HolderConeError):
    """Verification-suite configuration is invalid."""
