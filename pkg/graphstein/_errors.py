"""
The exceptions raised by graphstein. Catch GraphSteinError to handle
them all.
"""


class GraphSteinError(Exception):
    """Base class for all graphstein errors."""

    def __init__(self, msg):
        super().__init__(msg)


# %% Argument validation


class InvalidArgument(GraphSteinError, ValueError):
    """Raised when an argument is outside of its valid range."""


class InvalidPair(InvalidArgument):
    """Raised when a vertex pair is not a valid pair (i < j < n)."""


class IncompatibleGraphs(InvalidArgument):
    """Raised when graphs (or a graph and a model) differ in vertex count."""


class GraphTooSmall(InvalidArgument):
    """Raised when a graph has fewer vertices than an operation requires."""


class TooLarge(InvalidArgument):
    """Raised when an exhaustive computation is requested for a too large graph."""


class ConfigError(InvalidArgument):
    """Raised when an experiment config cannot be parsed or is invalid."""

    def __init__(self, msg, lineno=None):
        if lineno is not None:
            msg = f"line {lineno}: {msg}"
        super().__init__(msg)
        self.lineno = lineno


# %% Numerics


class SingularUpdate(GraphSteinError, ArithmeticError):
    """Raised when a low-rank inverse update has a (near) zero denominator.
    Callers should fall back to a direct inversion.
    """


class SingularKernel(GraphSteinError, ArithmeticError):
    """Raised when the linear system of a walk kernel is singular."""


class DivergentKernel(GraphSteinError, ArithmeticError):
    """Raised when the geometric random walk sum does not converge."""


# %% IO


class ParseError(GraphSteinError):
    """Raised when a graph file is malformed. Has a lineno attribute."""

    def __init__(self, msg, lineno=None, filename=None):
        where = ""
        if filename:
            where += f"{filename}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {msg}" if where else msg)
        self.lineno = lineno
        self.filename = filename


class IngestError(GraphSteinError):
    """Raised when a directory of sample graphs cannot be ingested."""
