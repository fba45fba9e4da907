"""Exception types raised across the package."""


class PhaseKickError(Exception):
    """Base class for all package errors."""


class InvalidInputError(PhaseKickError, ValueError):
    """An argument is malformed (non-finite angle, bad weights, ...)."""


class ContractViolation(PhaseKickError, ValueError):
    """A precondition of an operation does not hold."""


class UnsupportedProcessError(PhaseKickError, TypeError):
    """The requested engine cannot handle this kind of noise process."""


class EnumerationLimitError(PhaseKickError, ValueError):
    """Brute-force enumeration was asked for more steps than it allows."""


class InsufficientDataError(PhaseKickError, ValueError):
    """A fit was requested on fewer usable points than it needs."""


class ResourceLimitError(PhaseKickError, RuntimeError):
    """A Monte Carlo run would exceed the configured work cap."""


class ConfigError(PhaseKickError, ValueError):
    """A scenario config is unreadable or does not match the schema.

    ``field`` names the offending key path (dotted) when one is known.
    """

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)
