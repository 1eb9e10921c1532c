"""
polar-liouville - the polar part of the central-field Schrodinger equation

Liouville transformation of the polar equation, the eigenvalue law
W_l = (l + 1/2)^2 / 2, Hellmann-Feynman checks and normalized Legendre
probability densities, with a command-line frontend and an MCP tool server.
"""

__version__ = "0.1.0"
__description__ = "Polar Schrodinger equation toolkit"
