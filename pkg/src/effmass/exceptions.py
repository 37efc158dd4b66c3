"""Exception hierarchy shared by every module."""


class EffMassError(Exception):
    """Base class for errors raised by :mod:`effmass`."""


class ConfigurationError(EffMassError, ValueError):
    """Invalid parameters, unknown presets or malformed configuration."""


class DomainError(EffMassError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class NoBoundStateError(DomainError):
    """Requested level index exceeds the finite bound spectrum."""


class NumericalError(EffMassError, RuntimeError):
    """A numerical procedure failed to reach its stated tolerance."""
