#!/usr/bin/env python3
"""
Polar MCP Server, FastMCP over stdio

Tools included:
- polar_spectrum
- polar_density
- hellmann_feynman
- liouville_transform
- eigenvalue_law

Design:
- Pure STDIO MCP (no prints to stdout); logs go to stderr.
- Defaults for grid size and Richardson levels come from POLARSL_* variables
  (a .env file is honoured).
- Library errors are returned as {"success": False, "error": ...}.
- Eigenvalue sweeps run in a worker thread so the event loop stays free.
"""
from __future__ import annotations

import asyncio
import logging
import math
import sys
from functools import lru_cache
from typing import Any, Dict, Optional

import numpy as np
from mcp.server.fastmcp import FastMCP

from polarsl.config import ServerSettings
from polarsl.errors import PolarError
from polarsl.hft import hft_verify
from polarsl.legendre import polar_density as _polar_density
from polarsl.liouville import DerivativeMode, SturmLiouvilleProblem, sturm_liouville_eigenvalue, transform
from polarsl.polar import GridSpec, compute_spectrum, exact_W, lambda_from_m, rotor_energy

logger = logging.getLogger(__name__)

mcp = FastMCP("polar")


@lru_cache(maxsize=1)
def settings() -> ServerSettings:
    return ServerSettings.from_env()


def _failure(e: Exception) -> Dict[str, Any]:
    logger.warning("tool failed: %s", e)
    return {"success": False, "error": str(e)}


# ------------------------------ Tools ------------------------------------


@mcp.tool()
async def polar_spectrum(m: int, levels: int = 3, grid: Optional[int] = None) -> Dict[str, Any]:
    """Compute the lowest polar eigenvalues for magnetic number m.

    Args:
        m: Magnetic quantum number (sign is irrelevant).
        levels: Number of levels n = 0, 1, ... to compute.
        grid: Base grid N; defaults to POLARSL_GRID.

    Returns:
        {"success": True, "spectrum": {...}} with m, lambda, levels[], grid,
        extrapolation; each level carries W_computed, W_exact, rel_error.

    Example:
        "Show the first three polar levels for m = 1"
    """
    try:
        cfg = settings()
        result = await asyncio.to_thread(
            compute_spectrum, m, levels, GridSpec(grid or cfg.grid), cfg.richardson
        )
        return {"success": True, "spectrum": result.to_dict()}
    except PolarError as e:
        return _failure(e)


@mcp.tool()
async def polar_density(l: int, m: int, samples: int = 181) -> Dict[str, Any]:
    """Normalized polar probability density |N P_l^|m|(cos θ)|² sin θ.

    Args:
        l: Orbital quantum number.
        m: Magnetic quantum number with |m| <= l.
        samples: Uniform samples on [0, π], endpoints included.

    Returns:
        {"success": True, "l", "m", "theta": [...], "density": [...]}.
    """
    try:
        if samples < 2:
            return {"success": False, "error": "samples must be at least 2"}
        theta = np.linspace(0.0, math.pi, samples)
        dens = _polar_density(l, m, theta)
        return {
            "success": True,
            "l": dens.index.l,
            "m": dens.index.m,
            "theta": theta.tolist(),
            "density": dens.density_values.tolist(),
        }
    except PolarError as e:
        return _failure(e)


@mcp.tool()
async def hellmann_feynman(m: int, n: int = 0, grid: int = 4096) -> Dict[str, Any]:
    """Check dW/dλ = <sin⁻²θ> three ways for level n of magnetic number m.

    Args:
        m: Magnetic quantum number, nonzero (m = 0 diverges and is refused).
        n: Level index.
        grid: Grid N for the eigenvector and the finest-but-two spectrum.

    Returns:
        {"success": True, "report": {...}} with the three estimates, their
        pairwise discrepancies and a passed flag.
    """
    try:
        report = await asyncio.to_thread(
            hft_verify, m, n, GridSpec(grid), richardson_levels=settings().richardson
        )
        return {"success": True, "report": report.to_dict()}
    except PolarError as e:
        return _failure(e)


@mcp.tool()
async def liouville_transform(m: int, grid: int = 64, derivatives: str = "analytic") -> Dict[str, Any]:
    """Effective potential of the Liouville-transformed polar equation.

    Args:
        m: Magnetic quantum number.
        grid: Grid N; nodes are θ_j = jπ/N, j = 1..N-1.
        derivatives: "analytic" or "fd" for the weight derivatives.

    Returns:
        {"success": True, "theta", "U_eff", "max_abs_diff"} where
        max_abs_diff compares U_eff + 1/8 with (m² - 1/4)/(2 sin²θ).
    """
    try:
        theta = GridSpec(grid).nodes
        U = transform(SturmLiouvilleProblem.polar(m, theta), DerivativeMode.parse(derivatives))
        diff = np.abs(U.shifted(0.125) - lambda_from_m(m) / np.sin(theta) ** 2)
        return {
            "success": True,
            "theta": theta.tolist(),
            "U_eff": U.values.tolist(),
            "max_abs_diff": float(np.max(diff)),
        }
    except PolarError as e:
        return _failure(e)


@mcp.tool()
async def eigenvalue_law(l: int, moment_of_inertia: Optional[float] = None) -> Dict[str, Any]:
    """Closed-form level for orbital number l.

    Args:
        l: Orbital quantum number.
        moment_of_inertia: If given, also return the rigid-rotator energy l(l+1)/(2I).

    Returns:
        {"success": True, "l", "W", "Lambda"} plus "rotor_energy" when requested.
    """
    try:
        W = exact_W(l)
        out: Dict[str, Any] = {"success": True, "l": l, "W": W, "Lambda": sturm_liouville_eigenvalue(W)}
        if moment_of_inertia is not None:
            out["rotor_energy"] = rotor_energy(l, moment_of_inertia)
        return out
    except PolarError as e:
        return _failure(e)


def main():
    """Entry point for the polar server"""
    try:
        level = settings().log_level
    except PolarError as e:
        print(f"error: {e}", file=sys.stderr)
        sys.exit(1)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logger.info("starting polar MCP server (grid=%d)", settings().grid)
    mcp.run(transport="stdio")


if __name__ == "__main__":
    main()
