"""
MCP server implementations for polar-liouville.

This package contains:
- Polar server exposing spectra, densities, Hellmann-Feynman checks and the
  Liouville transform as tools
"""

from . import polar_mcp

__all__ = ["polar_mcp"]
