"""
Symmetric tridiagonal eigenvalue engine.

- sturm_count: number of eigenvalues strictly below a shift
- eigenvalue_kth: bisection on the Sturm count inside the Gershgorin interval
- eigenvector: inverse iteration at a computed eigenvalue
- eigenpairs: lowest eigenpairs, orthogonalized within eigenvalue clusters
- rayleigh_quotient: variational check of an eigenpair

The Sturm recurrence and the bisection loop are JIT-compiled with numba.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List, Sequence, Tuple

import numpy as np
from numba import njit
from numpy.polynomial import Polynomial
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import LinAlgError, solve_banded

from .errors import ConvergenceError, DomainError

logger = logging.getLogger(__name__)

EPS = float(np.finfo(float).eps)
DEFAULT_TOL = 1e-10
CLUSTER_GAP = 1e-3

# ------------------------------ Kernels ----------------------------------


@njit(cache=True, nogil=True)
def _sturm_kernel(diag, off_sq, x, pivmin):
    # Negative pivots of the LDL^T factorization of T - xI.
    count = 0
    q = diag[0] - x
    if abs(q) < pivmin:
        q = pivmin if q >= 0.0 else -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, diag.shape[0]):
        q = diag[i] - x - off_sq[i - 1] / q
        if abs(q) < pivmin:
            q = pivmin if q >= 0.0 else -pivmin
        if q < 0.0:
            count += 1
    return count


@njit(cache=True, nogil=True)
def _bisect_kernel(diag, off_sq, k, lo, hi, tol, pivmin):
    # invariant: count(lo) <= k < count(hi)
    while hi - lo > tol * max(1.0, abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _sturm_kernel(diag, off_sq, mid, pivmin) > k:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# ------------------------------ Types ------------------------------------


@dataclass(frozen=True, eq=False)
class SymTridiag:
    """Symmetric tridiagonal matrix stored as its diagonal and off-diagonal."""

    diag: NDArray[np.float64]
    offdiag: NDArray[np.float64]

    def __post_init__(self) -> None:
        diag = np.array(self.diag, dtype=float)
        off = np.array(self.offdiag, dtype=float)
        if diag.ndim != 1 or diag.size < 1:
            raise DomainError("diagonal must be a non-empty 1-D sequence")
        if off.ndim != 1 or off.size != diag.size - 1:
            raise DomainError(
                f"off-diagonal must have length {diag.size - 1}, got {off.size}"
            )
        if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(off))):
            raise DomainError("tridiagonal entries must be finite")
        diag.setflags(write=False)
        off.setflags(write=False)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", off)

    @property
    def n(self) -> int:
        return int(self.diag.size)

    @cached_property
    def scale(self) -> float:
        s = max(np.max(np.abs(self.diag)), np.max(np.abs(self.offdiag), initial=0.0))
        return float(s) if s > 0.0 else 1.0

    @cached_property
    def _off_sq(self) -> NDArray[np.float64]:
        return self.offdiag * self.offdiag

    @property
    def pivmin(self) -> float:
        return EPS * self.scale

    def matvec(self, v: ArrayLike) -> NDArray[np.float64]:
        v = np.asarray(v, dtype=float)
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out

    @cached_property
    def norm_inf(self) -> float:
        """Largest absolute row sum."""
        rows = np.abs(self.diag)
        off = np.abs(self.offdiag)
        rows[:-1] += off
        rows[1:] += off
        return float(np.max(rows))

    def to_dense(self) -> NDArray[np.float64]:
        return (
            np.diag(self.diag)
            + np.diag(self.offdiag, k=1)
            + np.diag(self.offdiag, k=-1)
        )


@dataclass(frozen=True, eq=False)
class EigenPair:
    value: float
    vector: NDArray[np.float64]
    residual: float


# ------------------------------ Operations -------------------------------


def gershgorin_bounds(T: SymTridiag) -> Tuple[float, float]:
    """Interval [lo, hi] containing every eigenvalue of T."""
    off = np.abs(T.offdiag)
    radius = np.zeros(T.n)
    radius[:-1] += off
    radius[1:] += off
    return float(np.min(T.diag - radius)), float(np.max(T.diag + radius))


def sturm_count(T: SymTridiag, x: float) -> int:
    """Number of eigenvalues of T strictly less than x."""
    return int(_sturm_kernel(T.diag, T._off_sq, float(x), T.pivmin))


def eigenvalue_kth(T: SymTridiag, k: int, tol: float = DEFAULT_TOL) -> float:
    """k-th smallest eigenvalue (0-based) by Sturm bisection.

    Args:
        T: Matrix.
        k: Index with 0 <= k < T.n.
        tol: Bisection stops once the bracket is narrower than
            tol * max(1, |bracket|).

    Returns:
        Midpoint of the final certified bracket.
    """
    if not 0 <= k < T.n:
        raise IndexError(f"eigenvalue index {k} out of range for order {T.n}")
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    lo, hi = gershgorin_bounds(T)
    pad = max(tol, 4.0 * T.n * EPS * max(1.0, abs(lo), abs(hi)))
    return float(
        _bisect_kernel(T.diag, T._off_sq, int(k), lo - pad, hi + pad, float(tol), T.pivmin)
    )


def eigenvalues(T: SymTridiag, count: int, tol: float = DEFAULT_TOL) -> List[float]:
    """The `count` smallest eigenvalues, ascending."""
    return [eigenvalue_kth(T, k, tol) for k in range(count)]


def _seed(n: int) -> NDArray[np.float64]:
    j = np.arange(n)
    v = np.where(j % 2 == 0, 1.0, -1.0) * (1.0 + j / n)
    return v / np.linalg.norm(v)


def _fix_sign(v: NDArray[np.float64]) -> NDArray[np.float64]:
    a = np.abs(v)
    first = int(np.flatnonzero(a > 1e-3 * a.max())[0])
    return -v if v[first] < 0 else v


def _roundoff_floor(T: SymTridiag) -> float:
    # attainable residual of a backward-stable banded solve
    return 8.0 * np.sqrt(T.n) * EPS * T.norm_inf


def eigenvector(
    T: SymTridiag,
    mu: float,
    tol: float = DEFAULT_TOL,
    max_iter: int = 10,
    cluster: Sequence[NDArray[np.float64]] = (),
) -> EigenPair:
    """Inverse iteration with fixed shift mu.

    Args:
        T: Matrix.
        mu: Shift, within tol of an eigenvalue of T (as from eigenvalue_kth).
        tol: Residual target, relative to 1 + |mu|.
        max_iter: Solves attempted before giving up.
        cluster: Unit vectors already computed for eigenvalues in the same
            cluster; iterates are kept orthogonal to them.

    Returns:
        EigenPair with unit 2-norm vector and residual ||Tv - mu v||_inf.

    Raises:
        ConvergenceError: residual target not reached within max_iter.
    """
    n = T.n
    shift = float(mu)
    if n == 1:
        residual = abs(float(T.diag[0]) - shift)
        if residual > tol * (1.0 + abs(shift)):
            raise ConvergenceError(
                f"shift {mu!r} is not an eigenvalue of a 1x1 matrix", last_residual=residual
            )
        return EigenPair(value=shift, vector=np.ones(1), residual=residual)

    ab = np.zeros((3, n))
    ab[0, 1:] = T.offdiag
    ab[1] = T.diag - shift
    ab[2, :-1] = T.offdiag

    v = _seed(n)
    residual = float("inf")
    for it in range(1, max_iter + 1):
        try:
            w = solve_banded((1, 1), ab, v, check_finite=False)
        except LinAlgError:
            # shift sits exactly on an eigenvalue
            shift += 8.0 * it * EPS * T.scale
            ab[1] = T.diag - shift
            logger.debug("singular shift %.17g, nudged to %.17g", mu, shift)
            continue
        # two Gram-Schmidt passes; one leaves O(eps / gap) overlap inside a cluster
        for _ in range(2):
            for u in cluster:
                w = w - (u @ w) * u
        norm = float(np.linalg.norm(w))
        if not np.isfinite(norm) or norm == 0.0:
            raise ConvergenceError(
                f"inverse iteration broke down at shift {mu!r}", last_residual=residual
            )
        v = w / norm
        residual = float(np.max(np.abs(T.matvec(v) - mu * v)))
        floor = max(tol * (1.0 + abs(mu)), _roundoff_floor(T))
        if residual <= floor:
            break
    else:
        raise ConvergenceError(
            f"inverse iteration at shift {mu!r} did not converge in {max_iter} "
            f"iterations (residual {residual:.3e})",
            last_residual=residual,
        )
    return EigenPair(value=float(mu), vector=_fix_sign(v), residual=residual)


def eigenpairs(T: SymTridiag, count: int, tol: float = DEFAULT_TOL) -> List[EigenPair]:
    """The `count` lowest eigenpairs, ascending.

    Eigenvalues closer than CLUSTER_GAP * ||T||_inf to their predecessor
    form a cluster; each vector of a cluster is kept orthogonal to the ones
    computed before it.
    """
    if not 0 < count <= T.n:
        raise IndexError(f"cannot take {count} eigenpairs from a matrix of order {T.n}")
    gap = CLUSTER_GAP * T.norm_inf
    pairs: List[EigenPair] = []
    cluster: List[NDArray[np.float64]] = []
    for k, mu in enumerate(eigenvalues(T, count, tol)):
        if k and mu - pairs[-1].value > gap:
            cluster = []
        pair = eigenvector(T, mu, tol, cluster=cluster)
        cluster.append(pair.vector)
        pairs.append(pair)
    return pairs


def rayleigh_quotient(T: SymTridiag, v: ArrayLike) -> float:
    """(v^T T v) / (v^T v)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (T.n,):
        raise DomainError(f"vector must have length {T.n}, got shape {v.shape}")
    vv = float(v @ v)
    if vv == 0.0:
        raise DomainError("Rayleigh quotient of the zero vector")
    return float(v @ T.matvec(v)) / vv


# ------------------------------ Oracles ----------------------------------


def characteristic_polynomial(T: SymTridiag, x: ArrayLike) -> NDArray[np.float64]:
    """det(T - xI) by the three-term recurrence of leading principal minors."""
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    p = T.diag[0] - x
    for i in range(1, T.n):
        p, p_prev = (T.diag[i] - x) * p - T._off_sq[i - 1] * p_prev, p
    return p


def characteristic_roots(T: SymTridiag) -> NDArray[np.float64]:
    """Eigenvalues as polynomial roots of det(T - xI), ascending.

    Brute force, meant for small matrices as an independent oracle.
    """
    x = Polynomial([0.0, 1.0])
    p_prev = Polynomial([1.0])
    p = T.diag[0] - x
    for i in range(1, T.n):
        p, p_prev = (T.diag[i] - x) * p - T._off_sq[i - 1] * p_prev, p
    return np.sort(np.real(p.roots()))
