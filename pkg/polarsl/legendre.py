"""
Associated Legendre functions and polar probability densities.

P_l^m follows the Condon-Shortley convention,
P_m^m(x) = (-1)^m (2m-1)!! (1-x²)^{m/2}, raised in l by
(l-m+1) P_{l+1}^m = (2l+1) x P_l^m - (l+m) P_{l-1}^m.

The probability of finding the particle between θ and θ + dθ is
|N_l^m P_l^m(cos θ)|² sin θ dθ, with N chosen so it integrates to 1 over (0, π).
Negative m is reduced to |m|.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ConvergenceError, DomainError, PreconditionError
from .liouville import WeightSpec, theta_to_y
from .polar import GridSpec, eigenstate, grid_normalize, lambda_from_m

logger = logging.getLogger(__name__)

MAX_GAUSS_ORDER = 256


@dataclass(frozen=True)
class LegendreIndex:
    l: int
    m: int

    def __post_init__(self) -> None:
        if self.l < 0 or self.m < 0:
            raise DomainError(f"LegendreIndex needs l, m >= 0, got ({self.l}, {self.m})")

    @classmethod
    def from_signed(cls, l: int, m: int) -> "LegendreIndex":
        return cls(l, abs(m))


@dataclass(frozen=True, eq=False)
class GaussRule:
    """Gauss-Legendre nodes and weights on [-1, 1]."""

    nodes: NDArray[np.float64]
    weights: NDArray[np.float64]
    order: int

    def integrate(self, f: Callable[[NDArray[np.float64]], ArrayLike]) -> float:
        return float(self.weights @ np.asarray(f(self.nodes), dtype=float))


@dataclass(frozen=True, eq=False)
class PolarDensity:
    index: LegendreIndex
    theta_samples: NDArray[np.float64]
    density_values: NDArray[np.float64]


# ------------------------------ Functions --------------------------------


def assoc_legendre(l: int, m: int, x: ArrayLike) -> NDArray[np.float64] | float:
    """P_l^m(x), Condon-Shortley phase; zero when m > l."""
    if l < 0 or m < 0:
        raise DomainError(f"assoc_legendre needs l, m >= 0, got ({l}, {m})")
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0):
        raise DomainError("assoc_legendre argument outside [-1, 1]")
    scalar = xa.ndim == 0
    if m > l:
        out = np.zeros_like(xa)
        return float(out) if scalar else out

    # P_m^m
    pmm = np.ones_like(xa)
    somx2 = np.sqrt((1.0 - xa) * (1.0 + xa))
    odd = 1.0
    for _ in range(m):
        pmm = -pmm * odd * somx2
        odd += 2.0
    if l == m:
        return float(pmm) if scalar else pmm

    p_prev, p = pmm, xa * (2 * m + 1) * pmm
    for ll in range(m + 1, l):
        p_prev, p = p, ((2 * ll + 1) * xa * p - (ll + m) * p_prev) / (ll - m + 1)
    return float(p) if scalar else p


def norm_factor(l: int, m: int) -> float:
    """N = sqrt[(2l+1)/2 · (l-m)!/(l+m)!], normalizing over (0, π) with weight sin θ."""
    if not 0 <= m <= l:
        raise DomainError(f"norm_factor needs 0 <= m <= l, got ({l}, {m})")
    return math.sqrt((2 * l + 1) / 2 * (math.factorial(l - m) / math.factorial(l + m)))


def _polar_sin(theta: NDArray[np.float64]) -> NDArray[np.float64]:
    # exactly zero at both poles
    return np.where((theta <= 0.0) | (theta >= math.pi), 0.0, np.sin(theta))


def _check_theta(theta: NDArray[np.float64]) -> None:
    if np.any(theta < 0.0) or np.any(theta > math.pi):
        raise DomainError("θ must lie in [0, π]")


def normalized_theta(l: int, m: int, theta: ArrayLike) -> NDArray[np.float64] | float:
    """Θ(θ) = N_l^{|m|} P_l^{|m|}(cos θ)."""
    am = abs(m)
    if am > l:
        raise DomainError(f"|m| = {am} exceeds l = {l}")
    th = np.asarray(theta, dtype=float)
    _check_theta(th)
    return norm_factor(l, am) * assoc_legendre(l, am, np.cos(th))


def density(l: int, m: int, theta: ArrayLike) -> NDArray[np.float64] | float:
    """|N_l^{|m|} P_l^{|m|}(cos θ)|² sin θ, independent of the sign of m."""
    th = np.asarray(theta, dtype=float)
    Theta = normalized_theta(l, m, th)
    out = np.asarray(Theta) ** 2 * _polar_sin(th)
    return float(out) if th.ndim == 0 else out


def polar_density(l: int, m: int, theta_samples: ArrayLike) -> PolarDensity:
    th = np.array(theta_samples, dtype=float)
    values = np.atleast_1d(density(l, m, th))
    th.setflags(write=False)
    values.setflags(write=False)
    return PolarDensity(LegendreIndex.from_signed(l, m), th, values)


# ------------------------------ Quadrature -------------------------------


def _legendre_and_derivative(order: int, x: NDArray[np.float64]):
    p_prev, p = np.ones_like(x), x.copy()
    for k in range(2, order + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    dp = order * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


@lru_cache(maxsize=64)
def gauss_rule(order: int, max_iter: int = 100) -> GaussRule:
    """Gauss-Legendre rule of the given order.

    Roots of P_order by Newton iteration from cos(π(i - ¼)/(order + ½));
    weights 2 / [(1 - x²) P'(x)²]. Cached; returned rules are read-only.
    """
    if not 1 <= order <= MAX_GAUSS_ORDER:
        raise DomainError(f"Gauss order must be in [1, {MAX_GAUSS_ORDER}], got {order}")
    i = np.arange(1, order + 1)
    x = np.cos(np.pi * (i - 0.25) / (order + 0.5))
    for _ in range(max_iter):
        p, dp = _legendre_and_derivative(order, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= 1e-14:
            break
    else:
        raise ConvergenceError(
            f"Newton iteration for Gauss order {order} did not converge",
            last_residual=float(np.max(np.abs(dx))),
        )
    _, dp = _legendre_and_derivative(order, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)

    # ascending, exactly symmetric
    x, w = x[::-1], w[::-1]
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    x.setflags(write=False)
    w.setflags(write=False)
    logger.debug("Gauss rule of order %d, weight sum %.17g", order, w.sum())
    return GaussRule(x, w, order)


def density_integral(l: int, m: int, rule: GaussRule) -> float:
    """∫₀^π density dθ, evaluated as ∫_{-1}^{1} (N P)² dx."""
    am = abs(m)
    if am > l:
        raise DomainError(f"|m| = {am} exceeds l = {l}")
    N = norm_factor(l, am)
    return rule.integrate(lambda x: (N * assoc_legendre(l, am, x)) ** 2)


def orthonormality(l: int, l_prime: int, m: int, rule: GaussRule) -> float:
    """∫₀^π (N P_l^m)(N P_l'^m)(cos θ) sin θ dθ, δ_{ll'} for exact rules."""
    if rule.order < l + l_prime + 1:
        raise PreconditionError(
            f"Gauss order {rule.order} too low for l={l}, l'={l_prime}; "
            f"need at least {l + l_prime + 1}"
        )
    am = abs(m)
    if am > min(l, l_prime):
        raise DomainError(f"|m| = {am} exceeds min(l, l') = {min(l, l_prime)}")
    a = norm_factor(l, am)
    b = norm_factor(l_prime, am)
    return rule.integrate(
        lambda x: (a * assoc_legendre(l, am, x)) * (b * assoc_legendre(l_prime, am, x))
    )


# ------------------------------ Cross-check ------------------------------


def eigenfunction_consistency(m: int, n: int, grid: GridSpec) -> float:
    """Max |y_analytic - y_numeric| on the grid nodes.

    y_analytic = sin^½θ · N P_l^{|m|}(cos θ) with l = |m| + n; y_numeric is
    the n-th discrete eigenvector for coupling λ(m). Both are normalized to
    sum(y²) h = 1 and sign-aligned.
    """
    am = abs(m)
    if am > 3 or not 0 <= n <= 4:
        raise PreconditionError(f"consistency check limited to |m| <= 3, n <= 4, got ({m}, {n})")
    theta = grid.nodes
    analytic = theta_to_y(theta, normalized_theta(am + n, am, theta), WeightSpec.analytic_sin(theta))
    analytic = grid_normalize(analytic, grid)
    numeric = eigenstate(lambda_from_m(am), grid, n).y
    if float(analytic @ numeric) < 0.0:
        numeric = -numeric
    return float(np.max(np.abs(analytic - numeric)))
