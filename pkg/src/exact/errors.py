"""Exception types shared across the package."""


class ExactError(Exception):
    """Base class for all domain errors raised by this package."""


class RegistryError(ExactError):
    """Unknown joint name or axis."""


class ProgramError(ExactError):
    """Invalid program structure (bad target, duplicate channel, empty parts)."""


class ValidationError(ExactError):
    """A program violates a semantic constraint (timing, horizon, target bounds).

    ``span`` is a (start, end) character range into the source text when the
    error was detected while parsing, else None.
    """

    def __init__(self, message: str, span: "tuple[int, int] | None" = None):
        super().__init__(message)
        self.span = span


class ConfigError(ExactError):
    """Infeasible or malformed configuration."""


class FormatError(ExactError):
    """Malformed external data file (buffer, collection, bundle).

    ``line`` is the offending 1-based line number when known.
    """

    def __init__(self, message: str, line: "int | None" = None):
        super().__init__(message)
        self.line = line
