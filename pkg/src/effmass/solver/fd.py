"""
Finite-difference bound states of -hbar^2/2 (psi'/m)' + V psi = E psi.

The mass is sampled exactly at the half-grid midpoints, which keeps the
matrix symmetric tridiagonal and the scheme second order for smooth m.
Dirichlet ends are the default. A Robin end psi' = kappa psi adds the
boundary node itself with quadrature weight h/2; the matrix is symmetrised
by the square root of the weights.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..effpot import PotentialModel
from ..exceptions import DomainError
from ..model import ConstantMass, MassProfile, OrderingParameters, UnitSystem, mass_eval
from .tridiag import tridiag_eigen

__all__ = [
    "Grid",
    "Dirichlet",
    "Robin",
    "SpectrumResult",
    "assemble_pdm",
    "solve_pdm",
    "solve_constant_mass",
    "solve_von_roos",
    "sign_changes",
    "richardson",
]


@dataclass(frozen=True)
class Grid:
    """Uniform grid with ``n`` interior points and spacing (zmax - zmin)/(n + 1)."""

    zmin: float
    zmax: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.zmin) and math.isfinite(self.zmax)) or not self.zmax > self.zmin:
            raise DomainError(f"grid needs finite zmax > zmin, got [{self.zmin}, {self.zmax}]")
        if int(self.n) != self.n or self.n < 3:
            raise DomainError(f"grid needs at least 3 interior points, got {self.n}")

    @classmethod
    def from_spacing(cls, zmin: float, zmax: float, h: float) -> "Grid":
        return cls(zmin, zmax, max(3, int(math.ceil((zmax - zmin) / h)) - 1))

    @property
    def h(self) -> float:
        return (self.zmax - self.zmin) / (self.n + 1)

    @property
    def z(self) -> np.ndarray:
        """Interior nodes."""
        return self.zmin + self.h * np.arange(1, self.n + 1)

    def refined(self, factor: int = 2) -> "Grid":
        return Grid(self.zmin, self.zmax, factor * (self.n + 1) - 1)

    def extended(self, left: float, right: float) -> "Grid":
        """Grow the box by ``left`` and ``right`` while keeping the spacing."""
        h = self.h
        nl = int(round(left / h))
        nr = int(round(right / h))
        return Grid(self.zmin - nl * h, self.zmax + nr * h, self.n + nl + nr)


@dataclass(frozen=True)
class Dirichlet:
    pass


@dataclass(frozen=True)
class Robin:
    """psi'(z_b) = kappa psi(z_b) at a box end."""

    kappa: float


@dataclass
class SpectrumResult:
    """Eigenpairs returned by the finite-difference solvers.

    ``eigenfunctions`` has one row per state, sampled on ``nodes`` and
    normalised so that sum(weights * psi**2) = 1. ``residuals`` holds
    ||(H - E) psi|| / ||psi|| in the weighted norm.
    """

    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray | None
    grid: Grid
    nodes: np.ndarray
    weights: np.ndarray
    residuals: np.ndarray | None = None
    sign_changes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "eigenvalues": [float(e) for e in self.eigenvalues],
            "grid": {"zmin": self.grid.zmin, "zmax": self.grid.zmax, "n": self.grid.n, "h": self.grid.h},
        }
        if self.residuals is not None:
            out["residuals"] = [float(r) for r in self.residuals]
            out["sign_changes"] = list(self.sign_changes)
        return out


def sign_changes(psi, rel: float = 1e-7) -> int:
    """Sign changes of ``psi`` ignoring samples below ``rel`` times its maximum."""
    psi = np.asarray(psi, dtype=float)
    keep = psi[np.abs(psi) > rel * np.abs(psi).max()]
    return int(np.count_nonzero(np.signbit(keep[1:]) != np.signbit(keep[:-1])))


def _sample_potential(V, z):
    v = np.asarray(V(z), dtype=float)
    if not np.all(np.isfinite(v)):
        raise DomainError(f"potential {getattr(V, 'name', '')!s} is not finite on the grid")
    return v


def assemble_pdm(V_eff, profile: MassProfile, grid: Grid, units: UnitSystem = UnitSystem(), left=None, right=None):
    """Symmetric tridiagonal matrix of the divergence-form operator.

    Returns ``(diag, offdiag, nodes, weights)``. The eigenvectors of the
    returned matrix are sqrt(weights) * psi.
    """
    left = left or Dirichlet()
    right = right or Dirichlet()
    h, hb2 = grid.h, units.hbar**2
    N = grid.n + 2
    nodes = grid.zmin + h * np.arange(N)
    w = np.full(N, h)
    mhalf = mass_eval(profile, nodes[:-1] + 0.5 * h)[0]
    p = 0.5 * hb2 / mhalf / h  # edge stiffness, edge i joins nodes i and i+1
    K_diag = np.zeros(N)
    K_diag[:-1] += p
    K_diag[1:] += p
    K_off = -p.copy()
    lo, hi = 1, N - 1
    if isinstance(left, Robin):
        lo = 0
        w[0] = 0.5 * h
        K_diag[0] += 0.5 * hb2 * left.kappa / float(mass_eval(profile, grid.zmin)[0])
    if isinstance(right, Robin):
        hi = N
        w[-1] = 0.5 * h
        K_diag[-1] -= 0.5 * hb2 * right.kappa / float(mass_eval(profile, grid.zmax)[0])
    sl = slice(lo, hi)
    nodes, w = nodes[sl], w[sl]
    v = _sample_potential(V_eff, nodes)
    sw = np.sqrt(w)
    diag = K_diag[sl] / w + v
    off = K_off[lo:hi - 1] / (sw[:-1] * sw[1:])
    return diag, off, nodes, w


def _residuals(diag, off, vals, vecs):
    out = np.empty(vals.size)
    for i, (lam, y) in enumerate(zip(vals, vecs)):
        r = (diag - lam) * y
        r[:-1] += off * y[1:]
        r[1:] += off * y[:-1]
        out[i] = np.linalg.norm(r) / np.linalg.norm(y)
    return out


def _solve(diag, off, nodes, w, grid, k, vectors):
    if k > diag.size:
        raise DomainError(f"requested {k} states from a grid with {diag.size} unknowns")
    if not vectors:
        vals = tridiag_eigen(diag, off, k)
        return SpectrumResult(vals, None, grid, nodes, w)
    vals, vecs = tridiag_eigen(diag, off, k, vectors=True)
    res = _residuals(diag, off, vals, vecs)
    psi = vecs / np.sqrt(w)
    psi /= np.sqrt(np.array([math.fsum(w * row * row) for row in psi]))[:, None]
    changes = [sign_changes(row) for row in psi]
    return SpectrumResult(vals, psi, grid, nodes, w, res, changes)


def solve_pdm(
    V_eff: PotentialModel,
    profile: MassProfile,
    grid: Grid,
    k: int,
    units: UnitSystem = UnitSystem(),
    left=None,
    right=None,
    vectors: bool = True,
) -> SpectrumResult:
    """Lowest ``k`` eigenpairs of -hbar^2/2 (psi'/m)' + V_eff psi = E psi.

    Parameters
    ----------
    V_eff : PotentialModel or callable
        Effective potential of the divergence-form equation.
    profile : MassProfile
    grid : Grid
    k : int
        Number of states.
    left, right : Dirichlet or Robin, optional
        End conditions; Dirichlet when omitted.
    vectors : bool
        Compute eigenfunctions and residuals as well.

    Raises
    ------
    DomainError
        If ``k`` exceeds the number of unknowns or the potential is not
        finite on the grid.
    """
    diag, off, nodes, w = assemble_pdm(V_eff, profile, grid, units, left, right)
    return _solve(diag, off, nodes, w, grid, k, vectors)


def solve_constant_mass(V, grid: Grid, k: int, units: UnitSystem = UnitSystem(), vectors: bool = True) -> SpectrumResult:
    """Standard three-point scheme for a constant mass m0."""
    return solve_pdm(V, ConstantMass(units.m0), grid, k, units, vectors=vectors)


def solve_von_roos(
    V,
    profile: MassProfile,
    params: OrderingParameters,
    grid: Grid,
    k: int,
    units: UnitSystem = UnitSystem(),
    vectors: bool = False,
) -> SpectrumResult:
    """Discretise the symmetrised von Roos kinetic operator directly.

    T = (M^a K M^g + M^g K M^a) / 4 where K = hbar^2 G^T diag(m_half^b) G / h
    is the discrete form of p m^b p. Unlike :func:`solve_pdm` this takes the
    bare potential and never forms the ordering correction, so comparing the
    two checks that correction independently. Dirichlet ends only.
    """
    h, a, b, g = grid.h, params.alpha, params.beta, params.gamma
    z = grid.z
    nodes = np.concatenate([[grid.zmin], z, [grid.zmax]])
    mhalf = mass_eval(profile, nodes[:-1] + 0.5 * h)[0]
    m = mass_eval(profile, z)[0]
    c = units.hbar**2 * mhalf**b / h**2
    Kd = c[:-1] + c[1:]
    Ko = -c[1:-1]
    diag = 0.5 * Kd * m ** (a + g) + _sample_potential(V, z)
    off = 0.25 * Ko * (m[:-1] ** a * m[1:] ** g + m[:-1] ** g * m[1:] ** a)
    return _solve(diag, off, z, np.full(z.size, h), grid, k, vectors)


def richardson(solve, grid: Grid, k: int):
    """Second-order Richardson extrapolation of the lowest ``k`` eigenvalues.

    ``solve(grid)`` returns a SpectrumResult; it is called on ``grid`` and on
    the grid with half the spacing. Returns ``(extrapolated, coarse, fine)``.
    """
    coarse = np.asarray(solve(grid).eigenvalues[:k])
    fine = np.asarray(solve(grid.refined()).eigenvalues[:k])
    return (4.0 * fine - coarse) / 3.0, coarse, fine
