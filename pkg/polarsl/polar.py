"""
Discretized polar Hamiltonian

    A = -1/2 d^2/dθ^2 + λ / sin^2 θ,    y(0) = y(π) = 0

on a uniform grid with the 3-point second difference. Dirichlet conditions are
imposed by omitting the end nodes, so the singular endpoints are never
evaluated. Eigenvalues from grids N, 2N, 4N are combined by Richardson
extrapolation with an empirically estimated order and compared against the
closed form W_l = (l + 1/2)^2 / 2 with l = |m| + n.

Levels are indexed by (n, |m|): the spectrum depends on m only through λ(m²).
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError, PreconditionError, UnphysicalCouplingError
from .liouville import EIGENVALUE_SCALE, schrodinger_eigenvalue
from .tridiag import DEFAULT_TOL, EPS, SymTridiag, eigenpairs, eigenvalues

logger = logging.getLogger(__name__)

LAMBDA_MIN = -0.125
MIN_GRID = 16

# ------------------------------ Types ------------------------------------


@dataclass(frozen=True)
class QuantumNumbers:
    """(l, m, n) with l = |m| + n."""

    l: int
    m: int
    n: int

    def __post_init__(self) -> None:
        if self.l < 0 or self.n < 0:
            raise DomainError(f"l and n must be nonnegative, got l={self.l}, n={self.n}")
        if abs(self.m) > self.l or self.n != self.l - abs(self.m):
            raise DomainError(f"inconsistent quantum numbers l={self.l}, m={self.m}, n={self.n}")

    @classmethod
    def from_m_n(cls, m: int, n: int) -> "QuantumNumbers":
        return cls(l=abs(m) + n, m=m, n=n)

    @property
    def coupling(self) -> float:
        return lambda_from_m(self.m)

    @property
    def W_exact(self) -> float:
        return exact_W(self.l)


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid θ_j = j h, h = π/N, interior nodes j = 1 .. N-1."""

    N: int

    def __post_init__(self) -> None:
        if int(self.N) != self.N or self.N < MIN_GRID:
            raise DomainError(f"grid needs an integer N >= {MIN_GRID}, got {self.N!r}")

    @property
    def h(self) -> float:
        return math.pi / self.N

    @property
    def order(self) -> int:
        return self.N - 1

    @property
    def nodes(self) -> NDArray[np.float64]:
        return np.arange(1, self.N) * self.h

    def refined(self, factor: int) -> "GridSpec":
        return GridSpec(self.N * factor)

    def to_dict(self) -> Dict[str, Any]:
        return {"N": self.N, "h": self.h}


@dataclass(frozen=True)
class SpectrumLevel:
    n: int
    l: int
    W_computed: float
    W_exact: float
    rel_error: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "l": self.l,
            "W_computed": self.W_computed,
            "W_exact": self.W_exact,
            "rel_error": self.rel_error,
        }


@dataclass(frozen=True)
class ExtrapolationInfo:
    grids: Tuple[int, ...]
    order_p: Tuple[Optional[float], ...]
    refused: Tuple[bool, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "grids": list(self.grids),
            "order_p": list(self.order_p),
            "refused": list(self.refused),
        }


@dataclass(frozen=True)
class SpectrumResult:
    """Computed polar spectrum for |m|, with exact references."""

    m: int
    lam: float
    levels: Tuple[SpectrumLevel, ...]
    grid: GridSpec
    extrapolation: ExtrapolationInfo

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "lambda": self.lam,
            "levels": [lv.to_dict() for lv in self.levels],
            "grid": self.grid.to_dict(),
            "extrapolation": self.extrapolation.to_dict(),
        }


@dataclass(frozen=True)
class RichardsonResult:
    extrapolated: float
    order_p: Optional[float]
    refused: bool = False


@dataclass(frozen=True, eq=False)
class PolarState:
    """Discrete eigenfunction, normalized so that sum(y_j^2) h = 1."""

    n: int
    value: float
    y: NDArray[np.float64]
    residual: float
    grid: GridSpec


# ------------------------------ Closed forms -----------------------------


def lambda_from_m(m: int) -> float:
    """Coupling λ = (m² - 1/4)/2 of the transformed polar equation."""
    return (m * m - 0.25) / 2.0


def exact_W(l: int) -> float:
    """W_l = (l + 1/2)^2 / 2."""
    if l < 0:
        raise DomainError(f"l must be nonnegative, got {l}")
    return 0.5 * (l + 0.5) ** 2


def exact_W_at_coupling(lam: float, n: int) -> float:
    """n-th eigenvalue for real coupling λ >= -1/8: (n + s + 1/2)^2 / 2, s = sqrt(2λ + 1/4)."""
    _check_coupling(lam)
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    s = math.sqrt(2.0 * lam + 0.25)
    return 0.5 * (n + s + 0.5) ** 2


def asymptotic_exponent(m: int) -> float:
    """α with y ~ θ^α at both endpoints; the root of α(α-1) = m² - 1/4."""
    return abs(m) + 0.5


def potential_minimum(m: int) -> float:
    """Minimum of (m² - 1/4)/(2 sin²θ), reached at θ = π/2."""
    return lambda_from_m(m)


def rotor_energy(l: int, moment_of_inertia: float, hbar: float = 1.0) -> float:
    """Rigid-rotator level ħ² l(l+1) / (2I), equal to (ħ²/I)(W_l - 1/8)."""
    if l < 0:
        raise DomainError(f"l must be nonnegative, got {l}")
    if not moment_of_inertia > 0:
        raise DomainError(f"moment of inertia must be positive, got {moment_of_inertia!r}")
    return hbar * hbar * l * (l + 1) / (2.0 * moment_of_inertia)


# ------------------------------ Discretization ---------------------------


def _check_coupling(lam: float) -> None:
    if lam < LAMBDA_MIN:
        raise UnphysicalCouplingError(
            f"coupling {lam!r} is below -1/8; the inverse-square problem has no "
            "unique self-adjoint realization there"
        )


def build_hamiltonian(lam: float, grid: GridSpec) -> SymTridiag:
    """Tridiagonal matrix of order N-1: diagonal 1/h² + λ/sin²θ_j, off-diagonal -1/(2h²)."""
    _check_coupling(lam)
    inv_h2 = 1.0 / (grid.h * grid.h)
    theta = grid.nodes
    diag = inv_h2 + lam / np.sin(theta) ** 2
    off = np.full(grid.order - 1, -0.5 * inv_h2)
    return SymTridiag(diag, off)


def _regular_form(grid: GridSpec) -> Tuple[SymTridiag, NDArray[np.float64]]:
    # finite volumes on θ_0 .. θ_N; pole cells are half cells
    h = grid.h
    theta = np.arange(grid.N + 1) * h
    flux = np.sin(theta[:-1] + 0.5 * h) / h
    mass = 2.0 * np.sin(theta) * math.sin(0.5 * h)
    mass[0] = mass[-1] = 1.0 - math.cos(0.5 * h)
    stiff = np.zeros(grid.N + 1)
    stiff[:-1] += flux
    stiff[1:] += flux
    scale = np.sqrt(mass)
    return SymTridiag(stiff / mass, -flux / (scale[:-1] * scale[1:])), mass


def build_regular_form(grid: GridSpec) -> SymTridiag:
    """Symmetrized finite-volume matrix of -(sin θ Θ')' = Λ sin θ Θ, order N+1.

    This is the polar equation at the critical coupling λ = -1/8 before the
    Liouville transformation. Θ is smooth at the poles, so the eigenvalues
    Λ_n converge at second order where the transformed operator, whose
    eigenfunctions behave like θ^½, converges only logarithmically.
    W = ½Λ + ⅛.
    """
    return _regular_form(grid)[0]


def richardson(values: Sequence[float], noise: float = 0.0) -> RichardsonResult:
    """Combine eigenvalues at spacings h, h/2, h/4.

    Three values: p = log2((v1 - v2)/(v2 - v3)) and
    v3 + (v3 - v2)/(2^p - 1). Two values: p = 2 assumed. One value: returned
    as is. A sequence whose differences vanish, change sign, or fail to shrink
    is refused and the finest value returned with the flag set. Differences
    no larger than `noise` count as zero.
    """
    vals = [float(v) for v in values]
    if len(vals) == 1:
        return RichardsonResult(vals[0], None)
    if len(vals) == 2:
        v1, v2 = vals
        return RichardsonResult(v2 + (v2 - v1) / 3.0, 2.0)
    if len(vals) != 3:
        raise PreconditionError(f"richardson takes 1 to 3 values, got {len(vals)}")

    v1, v2, v3 = vals
    d1, d2 = v1 - v2, v2 - v3
    if abs(d1) <= noise or abs(d2) <= noise:
        logger.debug("Richardson: %r converged to within %.3g", vals, noise)
        return RichardsonResult(v3, None, refused=True)
    if (d1 > 0.0) != (d2 > 0.0) or d1 / d2 <= 1.0:
        logger.warning("Richardson refused for %r; keeping finest value", vals)
        return RichardsonResult(v3, None, refused=True)
    ratio = d1 / d2
    # 2^p = ratio
    return RichardsonResult(v3 - d2 / (ratio - 1.0), math.log2(ratio))


def _grid_eigenvalues(lam: float, grid: GridSpec, count: int, tol: float) -> Tuple[List[float], float]:
    # eigenvalues and their roundoff floor, both on the W scale
    if lam == LAMBDA_MIN:
        T = build_regular_form(grid)
        values = [schrodinger_eigenvalue(v) for v in eigenvalues(T, count, tol)]
        return values, 4.0 * EPS * T.norm_inf * EIGENVALUE_SCALE
    T = build_hamiltonian(lam, grid)
    return eigenvalues(T, count, tol), 4.0 * EPS * T.norm_inf


def spectrum_at_coupling(
    lam: float,
    levels: int,
    grid: GridSpec,
    richardson_levels: int = 3,
    tol: float = DEFAULT_TOL,
) -> Tuple[Tuple[float, ...], ExtrapolationInfo]:
    """Lowest `levels` eigenvalues of A(λ), extrapolated over grids N, 2N, 4N."""
    if levels < 1:
        raise PreconditionError(f"levels must be at least 1, got {levels}")
    if richardson_levels not in (1, 2, 3):
        raise PreconditionError(f"richardson_levels must be 1, 2 or 3, got {richardson_levels}")
    if levels > grid.order:
        raise PreconditionError(f"{levels} levels requested from a matrix of order {grid.order}")
    _check_coupling(lam)

    grids = [grid.refined(2**i) for i in range(richardson_levels)]
    logger.info("coupling %.17g: %d levels on grids %s", lam, levels, [g.N for g in grids])

    def solve(g: GridSpec) -> Tuple[List[float], float]:
        return _grid_eigenvalues(lam, g, levels, tol)

    # pool.map keeps grid order
    with ThreadPoolExecutor(max_workers=len(grids)) as pool:
        per_grid = list(pool.map(solve, grids))

    roundoff = per_grid[-1][1]
    results = []
    for n in range(levels):
        vals = [values[n] for values, _ in per_grid]
        noise = 2.0 * max(tol * max(1.0, abs(vals[-1])), roundoff)
        results.append(richardson(vals, noise=noise))
    info = ExtrapolationInfo(
        grids=tuple(g.N for g in grids),
        order_p=tuple(r.order_p for r in results),
        refused=tuple(r.refused for r in results),
    )
    return tuple(r.extrapolated for r in results), info


def compute_spectrum(
    m: int,
    levels: int,
    grid: GridSpec,
    richardson_levels: int = 3,
    tol: float = DEFAULT_TOL,
) -> SpectrumResult:
    """Numerical polar spectrum for magnetic number m against W_l = (l + 1/2)^2 / 2.

    The result is identical for m and -m: it is keyed by |m| and the
    coupling depends on m² only.
    """
    am = abs(m)
    lam = lambda_from_m(am)
    values, info = spectrum_at_coupling(lam, levels, grid, richardson_levels, tol)

    records = []
    for n, W in enumerate(values):
        l = am + n
        W_exact = exact_W(l)
        records.append(SpectrumLevel(n, l, W, W_exact, abs(W - W_exact) / W_exact))
    if any(b.W_computed <= a.W_computed for a, b in zip(records, records[1:])):
        logger.warning("computed levels for |m|=%d are not strictly increasing", am)
    return SpectrumResult(am, lam, tuple(records), grid, info)


def grid_normalize(v: NDArray[np.float64], grid: GridSpec) -> NDArray[np.float64]:
    """Scale v so that sum(v_j^2) h = 1."""
    return v / math.sqrt(float(v @ v) * grid.h)


def eigenstates(lam: float, grid: GridSpec, count: int, tol: float = DEFAULT_TOL) -> List[PolarState]:
    """Lowest `count` discrete eigenfunctions of A(λ) on a single grid.

    At λ = -1/8 the states come from the regular form: y_j = sin^½θ_j Θ_j
    on the interior nodes.
    """
    if not 0 < count <= grid.order:
        raise PreconditionError(f"{count} levels not available on a grid of order {grid.order}")
    if lam != LAMBDA_MIN:
        pairs = eigenpairs(build_hamiltonian(lam, grid), count, tol)
        return [
            PolarState(n, p.value, grid_normalize(p.vector, grid), p.residual, grid)
            for n, p in enumerate(pairs)
        ]

    T, mass = _regular_form(grid)
    root_sin = np.sqrt(np.sin(grid.nodes))
    states = []
    for n, p in enumerate(eigenpairs(T, count, tol)):
        Theta = p.vector / np.sqrt(mass)
        y = grid_normalize(root_sin * Theta[1:-1], grid)
        states.append(PolarState(n, schrodinger_eigenvalue(p.value), y, 0.5 * p.residual, grid))
    return states


def eigenstate(lam: float, grid: GridSpec, n: int, tol: float = DEFAULT_TOL) -> PolarState:
    """n-th discrete eigenfunction of A(λ) on a single grid."""
    if not 0 <= n < grid.order:
        raise PreconditionError(f"level {n} not available on a grid of order {grid.order}")
    return eigenstates(lam, grid, n + 1, tol)[n]
