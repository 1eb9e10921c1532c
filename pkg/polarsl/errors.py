"""Exception hierarchy for the polar toolkit."""

from __future__ import annotations

from typing import Optional


class PolarError(RuntimeError):
    pass


class DomainError(PolarError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class UnphysicalCouplingError(DomainError):
    """Coupling below -1/8, where the inverse-square problem is not self-adjoint."""


class DerivativeUnavailableError(PolarError):
    pass


class InsufficientGridError(PolarError, ValueError):
    pass


class PreconditionError(PolarError, ValueError):
    pass


class ConfigError(PolarError, ValueError):
    pass


class DivergenceError(PolarError):
    pass


class ConvergenceError(PolarError):
    """An iteration stopped before reaching its tolerance."""

    def __init__(self, message: str, last_residual: Optional[float] = None):
        super().__init__(message)
        self.last_residual = last_residual
