"""
Configuration for the acceptance suite and the MCP server.

All verification defaults live in VerifyConfig so the whole suite is a single
`polar-sl verify` call. Server defaults come from the environment (a .env file
is honoured); the command-line frontend never reads the environment.
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, fields
from typing import Any, Dict

from dotenv import load_dotenv

from .errors import ConfigError

MAX_L_LIMIT = 10


@dataclass(frozen=True)
class VerifyConfig:
    """Tolerances and grid sizes for `polar-sl verify`.

    Args:
        max_l: Spectrum checks cover n = 0 .. max_l - 1; quadrature checks
            cover l <= 2 * max_l.
        tol_spectrum_m_pos: Relative error bound on W for m != 0.
        tol_spectrum_m0: Relative error bound on W for m = 0 (cusp-limited).
        tol_hft: Pairwise relative bound for the three dW/dlambda estimates.
        tol_quadrature: Bound for normalization and orthogonality integrals.
        grid: N for the Hellmann-Feynman and eigenfunction checks.
        spectrum_grid: Base N of the spectrum sweep (finest grid is 4N).
        richardson: Number of grids combined per eigenvalue (1, 2 or 3).
    """

    max_l: int = 5
    tol_spectrum_m_pos: float = 1e-4
    tol_spectrum_m0: float = 5e-3
    tol_hft: float = 1e-3
    tol_quadrature: float = 1e-10
    grid: int = 4096
    spectrum_grid: int = 2048
    richardson: int = 3

    def __post_init__(self) -> None:
        if not 1 <= self.max_l <= MAX_L_LIMIT:
            raise ConfigError(f"max_l must be in [1, {MAX_L_LIMIT}], got {self.max_l}")
        for name in ("tol_spectrum_m_pos", "tol_spectrum_m0", "tol_hft", "tol_quadrature"):
            value = getattr(self, name)
            if not value > 0:
                raise ConfigError(f"{name} must be positive, got {value!r}")
        for name in ("grid", "spectrum_grid"):
            if getattr(self, name) < 16:
                raise ConfigError(f"{name} must be at least 16, got {getattr(self, name)}")
        if self.richardson not in (1, 2, 3):
            raise ConfigError(f"richardson must be 1, 2 or 3, got {self.richardson}")

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class ServerSettings:
    grid: int = 1024
    richardson: int = 3
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "ServerSettings":
        """Read POLARSL_* variables, loading a .env file first if present."""
        load_dotenv()
        try:
            grid = int(os.getenv("POLARSL_GRID", cls.grid))
            richardson = int(os.getenv("POLARSL_RICHARDSON", cls.richardson))
        except ValueError as e:
            raise ConfigError(f"Invalid POLARSL_* setting: {e}") from e
        log_level = os.getenv("POLARSL_LOG_LEVEL", cls.log_level).upper()
        if grid < 16:
            raise ConfigError(f"POLARSL_GRID must be at least 16, got {grid}")
        if richardson not in (1, 2, 3):
            raise ConfigError(f"POLARSL_RICHARDSON must be 1, 2 or 3, got {richardson}")
        if not isinstance(logging.getLevelName(log_level), int):
            raise ConfigError(f"Unknown POLARSL_LOG_LEVEL: {log_level}")
        return cls(grid=grid, richardson=richardson, log_level=log_level)
