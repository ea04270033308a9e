"""Exception hierarchy shared by every module of the package."""


class CpbnrError(Exception):
    """Base class for all package errors."""


class ValidationError(CpbnrError, ValueError):
    """A parameter or configuration value breaks one of its invariants."""


class ParseError(CpbnrError, ValueError):
    """A configuration file could not be parsed."""

    def __init__(self, message, lineno=None, token=None):
        self.lineno = lineno
        self.token = token
        where = f"line {lineno}: " if lineno is not None else ""
        what = f" ({token!r})" if token is not None else ""
        super().__init__(f"{where}{message}{what}")


class DomainError(CpbnrError, ValueError):
    """A coefficient was requested outside the domain where it is defined."""


class TruncationError(CpbnrError):
    """The Fock ladder is too short to host the requested initial state."""


class TruncationOverflowError(CpbnrError):
    """Population reached the top pair of the ladder during integration."""


class DegenerateStateError(CpbnrError):
    """The state has zero norm, so normalized quantities are undefined."""


class NumericsError(CpbnrError, ArithmeticError):
    """Non-finite amplitudes or out-of-tolerance eigenvalues were produced."""


class DimensionError(CpbnrError, ValueError):
    """A dense operator was requested beyond the supported size."""


class ConvergenceError(CpbnrError):
    """A reference computation did not reach its self-consistency target."""
