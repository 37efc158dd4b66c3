"""
Selected eigenpairs of a real symmetric tridiagonal matrix.

Eigenvalues come from Sturm-sequence bisection, eigenvectors from inverse
iteration. Matrices produced by variable-mass discretisations can be
strongly graded (entries spanning twenty or more decades) so the bisection
runs to full floating-point resolution of each eigenvalue instead of stopping
at a tolerance proportional to the matrix norm.
"""
from __future__ import annotations

import os

import numba
import numpy as np

# the TBB layer shipped with some distributions is too old; prefer OpenMP
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
from scipy.linalg import solve_banded

from ..exceptions import NumericalError

__all__ = ["sturm_count", "tridiag_eigen", "gershgorin_bounds", "set_num_threads"]

INVERSE_ITERATION_SWEEPS = 3
_MAX_BISECTIONS = 4000


@numba.njit(cache=True)
def _count(d, e2, sigma, pivmin):
    """Number of eigenvalues strictly below ``sigma`` (LDL^T inertia)."""
    n = d.size
    count = 0
    q = d[0] - sigma
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = d[i] - sigma - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@numba.njit(cache=True, parallel=True)
def _bisect_all(d, e2, lo0, hi0, first, k, tol, pivmin, out):
    # each eigenvalue uses its own fixed bracket: result independent of thread order
    for t in numba.prange(k):
        j = first + t
        lo = lo0
        hi = hi0
        for _ in range(_MAX_BISECTIONS):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi or hi - lo <= tol:
                break
            if _count(d, e2, mid, pivmin) > j:
                hi = mid
            else:
                lo = mid
        out[t] = 0.5 * (lo + hi)


def set_num_threads(n: int | None = None) -> None:
    """Set the bisection thread count (defaults to ``$EFFMASS_NUM_THREADS``)."""
    if n is None:
        env = os.environ.get("EFFMASS_NUM_THREADS")
        if not env:
            return
        n = int(env)
    numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


def gershgorin_bounds(diag, offdiag):
    a = np.abs(offdiag)
    r = np.zeros_like(diag)
    r[:-1] += a
    r[1:] += a
    return float(np.min(diag - r)), float(np.max(diag + r))


def _prepare(diag, offdiag):
    d = np.ascontiguousarray(diag, dtype=float)
    e = np.ascontiguousarray(offdiag, dtype=float)
    if d.ndim != 1 or e.shape != (max(d.size - 1, 0),):
        raise ValueError("offdiag must have exactly one entry fewer than diag")
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
        raise NumericalError("tridiagonal matrix has non-finite entries")
    e2 = e * e
    pivmin = np.finfo(float).tiny * max(1.0, float(e2.max()) if e2.size else 1.0)
    return d, e, e2, pivmin


def sturm_count(diag, offdiag, sigma: float) -> int:
    """Number of eigenvalues of the matrix strictly less than ``sigma``."""
    d, _, e2, pivmin = _prepare(diag, offdiag)
    return int(_count(d, e2, float(sigma), pivmin))


def _inverse_iteration(d, e, lam, seed=12345):
    n = d.size
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)
    ab = np.zeros((3, n))
    ab[0, 1:] = e
    ab[2, :-1] = e
    shift = lam
    for attempt in range(8):
        ab[1] = d - shift
        try:
            for _ in range(INVERSE_ITERATION_SWEEPS):
                y = solve_banded((1, 1), ab, x, check_finite=False)
                nrm = np.linalg.norm(y)
                if not np.isfinite(nrm) or nrm == 0.0:
                    raise np.linalg.LinAlgError
                x = y / nrm
            break
        except (np.linalg.LinAlgError, ValueError):
            shift = lam + (attempt + 1) * 8 * np.spacing(max(abs(lam), 1.0))
            x = rng.standard_normal(n)
            x /= np.linalg.norm(x)
    else:
        raise NumericalError(f"inverse iteration failed for eigenvalue {lam!r}")
    # deterministic sign: first clearly non-negligible entry positive
    big = np.flatnonzero(np.abs(x) > 1e-3 * np.abs(x).max())
    if x[big[0]] < 0:
        x = -x
    return x


def tridiag_eigen(diag, offdiag, k: int, vectors: bool = False, tol: float = 0.0, first: int = 0):
    """Eigenvalues ``first .. first+k-1`` (ascending) of a symmetric tridiagonal matrix.

    Parameters
    ----------
    diag, offdiag : array_like
        Main diagonal (length n) and off-diagonal (length n-1).
    k : int
        Number of eigenvalues wanted.
    vectors : bool
        Also return unit eigenvectors as rows of an array of shape (k, n).
    tol : float
        Absolute bisection tolerance. The default 0 bisects until the bracket
        cannot be split any further in floating point.

    Raises
    ------
    ValueError
        If ``k`` exceeds the matrix order.
    NumericalError
        For non-finite input or a bracket that does not contain the target.
    """
    d, e, e2, pivmin = _prepare(diag, offdiag)
    n = d.size
    if k < 1 or first < 0 or first + k > n:
        raise ValueError(f"cannot extract eigenvalues {first}..{first + k - 1} of a {n}x{n} matrix")
    lo, hi = gershgorin_bounds(d, e)
    pad = 2.0 * np.spacing(max(abs(lo), abs(hi), 1.0)) + 1e-300
    lo, hi = lo - pad, hi + pad
    if _count(d, e2, lo, pivmin) != 0 or _count(d, e2, hi, pivmin) != n:
        raise NumericalError("Gershgorin bracket does not enclose the spectrum")
    vals = np.empty(k)
    _bisect_all(d, e2, lo, hi, first, k, float(tol), pivmin, vals)
    if not vectors:
        return vals
    vecs = np.empty((k, n))
    for i, lam in enumerate(vals):
        vecs[i] = _inverse_iteration(d, e, lam, seed=12345 + first + i)
    return vals, vecs
