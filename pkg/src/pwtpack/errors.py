"""Exception hierarchy shared by all modules."""


class PWTError(Exception):
    """Base class for every error raised by pwtpack."""


class ParseError(PWTError, ValueError):
    """A line of an instance or tour file could not be understood."""

    def __init__(self, message, line_no=None, line=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
            if line is not None:
                message = f"{message} ({line.strip()!r})"
        super().__init__(message)
        self.line_no = line_no
        self.line = line


class StructureError(PWTError, ValueError):
    """Declared counts do not match the sections that follow them."""


class ValidationError(PWTError, ValueError):
    """Data parsed fine but violates a domain invariant."""


class EvaluationError(PWTError, ArithmeticError):
    """A tour segment would be travelled at nonpositive speed."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class ScoringError(PWTError, ArithmeticError):
    """A reward's hypothetical speed is nonpositive."""


class ConfigurationError(PWTError, ValueError):
    """Illegal combination of algorithm, reward and constraint mode."""


class OracleCapError(PWTError, ValueError):
    """Exhaustive enumeration refused because the instance is too large."""
