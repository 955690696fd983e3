"""Exception types shared across the package."""


class ProblemaError(Exception):
    """Base class for all package errors."""


class DomainError(ProblemaError):
    """A value lies outside the domain an operation requires."""


class UniverseMismatchError(DomainError):
    """Two problems over different universes were combined."""


class TotalityError(ProblemaError):
    """A condition failed to produce a boolean for a universe member.

    Carries the offending member and whether the failure was a fuel
    exhaustion (as opposed to a malformed verdict).
    """

    def __init__(self, message: str, witness=None, fuel_related: bool = False):
        super().__init__(message)
        self.witness = witness
        self.fuel_related = fuel_related


class NoSolutionError(ProblemaError):
    """choose() was asked for a solution of an unsolvable problem."""


class NotAProgramError(ProblemaError):
    """An expression does not decode to a machine."""


class FuelError(ProblemaError):
    """A step budget ran out outside of condition evaluation."""

    def __init__(self, message: str, steps: int = 0):
        super().__init__(message)
        self.steps = steps


class ConfigurationError(ProblemaError):
    """A fixture or resolver chain violates one of its stated conditions."""

    def __init__(self, message: str, condition: str | None = None, witness=None):
        super().__init__(message)
        self.condition = condition
        self.witness = witness


class InvariantViolation(ProblemaError):
    """An internal consistency guard tripped; always a bug or a bad fixture."""


class TmFormatError(ProblemaError):
    """A machine definition file is malformed."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
