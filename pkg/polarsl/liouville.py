"""
Liouville transformation of the weighted polar equation.

    -(1/w) (w Θ')' + u Θ = Λ Θ,   u = c_m / sin²θ

With y = w^½ Θ this becomes

    -½ y'' + ½ (u - c) y = ½ Λ y,   c = ¼ (w'/w)² - ½ w''/w

For w = sin θ, c = ¼ cot²θ + ½ and the potential ½(u - c) equals
(m² - ¼)/(2 sin²θ) - ⅛. Folding the constant into the eigenvalue gives
W = ½Λ + ⅛ = ½[l(l+1) + ¼].
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DerivativeUnavailableError, DomainError, InsufficientGridError

EIGENVALUE_SCALE = 0.5
SIN_WEIGHT_SHIFT = 0.125
DOMAIN = (0.0, math.pi)


class WeightKind(enum.Enum):
    ANALYTIC_SIN = "analytic-sin"
    SAMPLED = "sampled"


class DerivativeMode(enum.Enum):
    ANALYTIC = "analytic"
    FINITE_DIFFERENCE = "finite-difference"

    @classmethod
    def parse(cls, text: str) -> "DerivativeMode":
        if text in ("fd", "finite-difference"):
            return cls.FINITE_DIFFERENCE
        if text == "analytic":
            return cls.ANALYTIC
        raise DomainError(f"unknown derivative mode {text!r}")


def _frozen(values: ArrayLike) -> NDArray[np.float64]:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class WeightSpec:
    """Weight w(θ) on nodes inside (0, π): sin θ in closed form, or samples."""

    kind: WeightKind
    theta_nodes: NDArray[np.float64]
    w_values: NDArray[np.float64]
    w_prime: Optional[NDArray[np.float64]] = None
    w_double_prime: Optional[NDArray[np.float64]] = None

    def __post_init__(self) -> None:
        theta = _frozen(self.theta_nodes)
        values = _frozen(self.w_values)
        if theta.ndim != 1 or theta.size == 0:
            raise DomainError("weight needs a non-empty 1-D node sequence")
        if np.any(theta <= DOMAIN[0]) or np.any(theta >= DOMAIN[1]):
            raise DomainError("weight nodes must lie in the open interval (0, π)")
        if np.any(np.diff(theta) <= 0.0):
            raise DomainError("weight nodes must be strictly increasing")
        if values.shape != theta.shape:
            raise DomainError("weight values must match the nodes")
        if np.any(values <= 0.0):
            raise DomainError("weight must be strictly positive at every node")
        object.__setattr__(self, "theta_nodes", theta)
        object.__setattr__(self, "w_values", values)
        for name in ("w_prime", "w_double_prime"):
            seq = getattr(self, name)
            if seq is not None:
                seq = _frozen(seq)
                if seq.shape != values.shape:
                    raise DomainError(f"{name} must have the same length as w_values")
                object.__setattr__(self, name, seq)

    @classmethod
    def analytic_sin(cls, theta_nodes: ArrayLike) -> "WeightSpec":
        theta = np.asarray(theta_nodes, dtype=float)
        s = np.sin(theta)
        return cls(WeightKind.ANALYTIC_SIN, theta, s, np.cos(theta), -s)

    @classmethod
    def sampled(
        cls,
        theta_nodes: ArrayLike,
        w_values: ArrayLike,
        w_prime: Optional[ArrayLike] = None,
        w_double_prime: Optional[ArrayLike] = None,
    ) -> "WeightSpec":
        return cls(WeightKind.SAMPLED, theta_nodes, w_values, w_prime, w_double_prime)

    @classmethod
    def constant(cls, theta_nodes: ArrayLike, value: float = 1.0) -> "WeightSpec":
        theta = np.asarray(theta_nodes, dtype=float)
        zeros = np.zeros_like(theta)
        return cls.sampled(theta, np.full_like(theta, value), zeros, zeros)

    @property
    def has_derivatives(self) -> bool:
        return self.w_prime is not None and self.w_double_prime is not None

    def values_at(self, theta_samples: ArrayLike) -> NDArray[np.float64]:
        """w at the given samples; sampled weights only know their own nodes."""
        theta = np.asarray(theta_samples, dtype=float)
        if self.kind is WeightKind.ANALYTIC_SIN:
            w = np.sin(theta)
        elif theta.shape == self.theta_nodes.shape and np.array_equal(theta, self.theta_nodes):
            w = np.asarray(self.w_values)
        else:
            raise DomainError("sampled weight evaluated away from its nodes")
        if np.any(w <= 0.0):
            raise DomainError("weight is not positive at every sample")
        return w


@dataclass(frozen=True)
class SturmLiouvilleProblem:
    weight: WeightSpec
    singular_term_coefficient: float
    domain: Tuple[float, float] = DOMAIN

    def __post_init__(self) -> None:
        if self.singular_term_coefficient < 0:
            raise DomainError(
                f"singular term coefficient must be >= 0, got {self.singular_term_coefficient!r}"
            )
        if self.domain != DOMAIN:
            raise DomainError("only the interval (0, π) is supported")

    @classmethod
    def polar(cls, m: int, theta_nodes: ArrayLike) -> "SturmLiouvilleProblem":
        """Polar equation for magnetic number m with weight sin θ."""
        return cls(WeightSpec.analytic_sin(theta_nodes), float(m * m))


@dataclass(frozen=True, eq=False)
class EffectivePotential:
    """U_eff(θ) = ½(u - c); Schrödinger eigenvalues are eigenvalue_scale · Λ."""

    theta_nodes: NDArray[np.float64]
    values: NDArray[np.float64]
    eigenvalue_scale: float = EIGENVALUE_SCALE

    def __post_init__(self) -> None:
        theta, values = _frozen(self.theta_nodes), _frozen(self.values)
        if theta.shape != values.shape:
            raise DomainError("potential values must match the nodes")
        if not np.all(np.isfinite(values)):
            raise DomainError("potential is not finite at every node")
        object.__setattr__(self, "theta_nodes", theta)
        object.__setattr__(self, "values", values)

    def shifted(self, constant: float) -> NDArray[np.float64]:
        return self.values + constant


# ------------------------------ Derivatives ------------------------------


def finite_difference_derivatives(
    theta: NDArray[np.float64], w: NDArray[np.float64]
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Second-order w' and w'' on a uniform grid, one-sided at the ends."""
    if theta.size < 3:
        raise InsufficientGridError(f"finite differences need at least 3 nodes, got {theta.size}")
    steps = np.diff(theta)
    h = float(steps[0])
    if not np.allclose(steps, h, rtol=1e-9, atol=0.0):
        raise DomainError("finite-difference derivatives need a uniform grid")

    w1 = np.gradient(w, h, edge_order=2)
    w2 = np.empty_like(w)
    w2[1:-1] = (w[:-2] - 2.0 * w[1:-1] + w[2:]) / (h * h)
    if w.size >= 4:
        w2[0] = (2.0 * w[0] - 5.0 * w[1] + 4.0 * w[2] - w[3]) / (h * h)
        w2[-1] = (2.0 * w[-1] - 5.0 * w[-2] + 4.0 * w[-3] - w[-4]) / (h * h)
    else:
        w2[0] = w2[-1] = w2[1]
    return w1, w2


def _derivatives(
    weight: WeightSpec, mode: DerivativeMode
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    if mode is DerivativeMode.FINITE_DIFFERENCE:
        return finite_difference_derivatives(weight.theta_nodes, weight.w_values)
    if not weight.has_derivatives:
        raise DerivativeUnavailableError(
            "sampled weight has no derivatives; request finite-difference mode explicitly"
        )
    return weight.w_prime, weight.w_double_prime


def _curvature(weight: WeightSpec, mode: DerivativeMode) -> NDArray[np.float64]:
    if weight.kind is WeightKind.ANALYTIC_SIN and mode is DerivativeMode.ANALYTIC:
        theta = weight.theta_nodes
        cot = np.cos(theta) / np.sin(theta)
        return 0.25 * cot * cot + 0.5
    w = weight.w_values
    w1, w2 = _derivatives(weight, mode)
    r = w1 / w
    return 0.25 * r * r - 0.5 * w2 / w


# ------------------------------ Operations -------------------------------


def curvature_term(
    weight: WeightSpec,
    node_index: int,
    derivative_mode: DerivativeMode = DerivativeMode.ANALYTIC,
) -> float:
    """c(θ) = ¼(w'/w)² - ½ w''/w at one node; ¼cot²θ + ½ for w = sin θ."""
    if not -weight.theta_nodes.size <= node_index < weight.theta_nodes.size:
        raise IndexError(f"node index {node_index} out of range")
    return float(_curvature(weight, derivative_mode)[node_index])


def transform(
    problem: SturmLiouvilleProblem,
    derivative_mode: DerivativeMode = DerivativeMode.ANALYTIC,
) -> EffectivePotential:
    """Potential of the Schrödinger form, U_eff = ½[u - c].

    For w = sin θ, U_eff + ⅛ = (m² - ¼)/(2 sin²θ) at every node.
    """
    weight = problem.weight
    theta = weight.theta_nodes
    u = problem.singular_term_coefficient / np.sin(theta) ** 2
    c = _curvature(weight, derivative_mode)
    return EffectivePotential(theta, EIGENVALUE_SCALE * (u - c))


def theta_to_y(theta_samples: ArrayLike, Theta_values: ArrayLike, weight: WeightSpec) -> NDArray[np.float64]:
    """y = w^½ Θ pointwise."""
    w = weight.values_at(theta_samples)
    return np.sqrt(w) * np.asarray(Theta_values, dtype=float)


def y_to_theta(theta_samples: ArrayLike, y_values: ArrayLike, weight: WeightSpec) -> NDArray[np.float64]:
    """Θ = y / w^½ pointwise."""
    w = weight.values_at(theta_samples)
    return np.asarray(y_values, dtype=float) / np.sqrt(w)


def schrodinger_eigenvalue(sl_eigenvalue: float) -> float:
    """W = ½Λ + ⅛ for the sin θ weight; Λ = l(l+1) gives W_l."""
    return EIGENVALUE_SCALE * sl_eigenvalue + SIN_WEIGHT_SHIFT


def sturm_liouville_eigenvalue(W: float) -> float:
    return (W - SIN_WEIGHT_SHIFT) / EIGENVALUE_SCALE
