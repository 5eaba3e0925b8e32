from __future__ import annotations


class RGGSpectraError(Exception):
    """
    Base class for every error raised by rggspectra.

    Each subclass carries the process exit code the CLI uses when the
    error escapes a command.
    """

    exit_code: int = 1


class ConfigError(RGGSpectraError, ValueError):
    """Invalid configuration document or invalid parameter value."""

    exit_code = 2


class EigenCapError(ConfigError):
    """Requested dense eigensolve is larger than the configured cap."""


class NumericError(RGGSpectraError):
    """Numerical failure during assembly or eigen-decomposition."""

    exit_code = 3


class SingularityError(NumericError):
    """
    Raised when the Laplacian is undefined: alpha is zero and a vertex
    has no neighbours.
    """

    def __init__(self, vertex: int) -> None:
        self.vertex = vertex
        super().__init__(
            f"vertex {vertex} is isolated and alpha = 0; "
            "the normalized Laplacian is singular (use alpha > 0)"
        )


class ConsistencyError(NumericError):
    """Internal numerical check failed (residuals, imaginary parts)."""


class DataIOError(RGGSpectraError):
    """Reading or writing a file failed."""

    exit_code = 4

    def __init__(self, path: object, reason: object) -> None:
        self.path = path
        super().__init__(f"{path}: {reason}")
