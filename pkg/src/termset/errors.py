"""Exception hierarchy shared across the package.

Severity classes matter downstream: the CLI maps ValidationError-like
failures to exit code 1 and ConvergenceError to exit code 2; the HTTP
layer maps NotFoundError/StateError/ValidationError to distinct status
codes.
"""


class TermSetError(Exception):
    """Base class for all errors raised by this package."""


class VectorFileError(TermSetError):
    """Malformed word2vec-text vector file."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CorpusError(TermSetError):
    """Unusable corpus input (empty, or empty after filtering)."""


class ValidationError(TermSetError):
    """Invalid arguments or domain-rule violation."""


class ConvergenceError(TermSetError):
    """An iterative solver exhausted its iteration budget."""

    def __init__(self, message: str, residual: float | None = None):
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


class NotFoundError(TermSetError):
    """Unknown session or model id."""


class StateError(TermSetError):
    """Session state-machine violation or busy session."""
