"""
Wightman Probe Exceptions.

Validation failures map to exit code 2, numerical failures to exit code 3.
"""
from typing import Any, Optional


class WProbeException(Exception):
    """Base class for all wightman-probe errors."""

    exit_code: int = 1

    def __init__(self, message: str, *args, **kwargs):
        self.message = message
        self.payload: dict[str, Any] = kwargs
        super().__init__(message, *args)

    def __str__(self) -> str:
        return f"{self.__class__.__name__}: {self.message}"


class ConfigError(WProbeException):
    """Malformed or unknown experiment configuration."""

    exit_code = 2


class InvalidParameter(WProbeException, ValueError):
    exit_code = 2


class DomainError(InvalidParameter):
    """Spacelike separation or other out-of-domain argument."""


class InfraredDivergence(InvalidParameter):
    pass


class NotSupported(WProbeException, NotImplementedError):
    exit_code = 2


class ContractViolation(WProbeException, TypeError):
    """An operation received an object that breaks its contract (e.g. non-stationary)."""

    exit_code = 2


class NumericalError(WProbeException, ArithmeticError):
    """A numerical procedure failed; keeps the best estimate it reached."""

    exit_code = 3

    def __init__(
        self,
        message: str,
        *args,
        estimate: Optional[complex] = None,
        residual: Optional[float] = None,
        **kwargs
    ):
        self.estimate = estimate
        self.residual = residual
        super().__init__(message, *args, estimate=estimate, residual=residual, **kwargs)


class QuadratureError(NumericalError):
    pass


class RefinementError(NumericalError):
    pass


## Warnings
class WProbeWarning(UserWarning):
    pass


class OverlapWarning(WProbeWarning):
    """Comb teeth overlap within their truncation windows."""


class PerturbativityWarning(WProbeWarning):
    pass


class ConvergenceWarning(WProbeWarning):
    pass


class EndpointSingularityWarning(WProbeWarning):
    pass
