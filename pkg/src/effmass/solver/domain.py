"""
Heuristic choice of a finite box and grid spacing for bound-state solves.

The WKB picture is applied to the reduced potential V_eff + V_m, which is
what the constant-mass equation in the mapped coordinate sees; in the
physical coordinate the local wavenumber is sqrt(2 m (E - V_r)) / hbar.
"""
from __future__ import annotations

import math

import numpy as np

from ..exceptions import DomainError
from ..model import MassProfile, UnitSystem, mass_eval
from ..transform import CoordinateMap, mass_term_potential
from .fd import Grid, solve_pdm

__all__ = ["auto_domain", "certify_domain", "reduced_potential"]

SCAN_POINTS = 4001
PRESOLVE_POINTS = 1500
MAX_DOUBLINGS = 10
MAX_POINTS = 400_000
# relative closeness to a finite end of the mapped image
IMAGE_TOL = 1e-6


def reduced_potential(V_eff, profile: MassProfile, z, units: UnitSystem = UnitSystem()):
    z = np.asarray(z, dtype=float)
    return np.asarray(V_eff(z), dtype=float) + mass_term_potential(profile, z, units)


def _image_bounded(cmap: CoordinateMap):
    """Which ends of the z-axis map onto a finite end of the mapped image."""
    lo, hi = cmap.image
    d = float(cmap.derivative(0.0))
    # increasing map: z -> -inf reaches lo, z -> +inf reaches hi
    return (math.isfinite(lo), math.isfinite(hi)) if d > 0 else (math.isfinite(hi), math.isfinite(lo))


def _image_end(cmap, side, z0, span):
    """Walk towards ``side`` until the map is within IMAGE_TOL of its finite end."""
    lo, hi = cmap.image
    end = lo if side < 0 else hi
    zt0 = float(cmap.forward(z0))
    target = IMAGE_TOL * max(abs(zt0 - end), 1e-300)
    z = z0
    for _ in range(400):
        if abs(float(cmap.forward(z)) - end) <= target:
            return z
        z += side * span
    raise DomainError("could not approach the finite end of the mapped coordinate")


def auto_domain(
    V_eff,
    profile: MassProfile,
    k: int,
    units: UnitSystem = UnitSystem(),
    decay_lengths: float = 20.0,
    points_per_wavelength: float = 20.0,
    center: float = 0.0,
) -> Grid:
    """Box and spacing adequate for the lowest ``k`` states.

    A coarse pre-solve on a scan window estimates E_{k-1}. The box reaches
    from its outermost classical turning points outward until the WKB decay
    integral reaches ``decay_lengths``. An end of the z-axis that maps to a
    finite end of the mapped coordinate is instead extended until the map
    lies within a relative IMAGE_TOL of that end. The spacing resolves the
    shortest local wavelength (or decay length) by ``points_per_wavelength``
    and the mass length scale by the same factor.

    Raises
    ------
    DomainError
        When no confinement is found inside the largest scan window.
    """
    if k < 1:
        raise DomainError("k must be at least 1")
    L = float(getattr(profile, "length_scale", 1.0))
    if not math.isfinite(L) or L <= 0:
        L = 1.0
    cmap = CoordinateMap(profile, units)
    open_end = _image_bounded(cmap)
    half = 8.0 * L
    E = None
    for _ in range(MAX_DOUBLINGS):
        a, b = center - half, center + half
        zs = np.linspace(a, b, SCAN_POINTS)
        vr = reduced_potential(V_eff, profile, zs, units)
        if not np.all(np.isfinite(vr)):
            raise DomainError("effective potential is not finite inside the scan window")
        try:
            E = float(solve_pdm(V_eff, profile, Grid(a, b, PRESOLVE_POINTS), k, units, vectors=False).eigenvalues[-1])
        except Exception as exc:  # noqa: BLE001 - reported with context below
            raise DomainError(f"pre-solve on [{a:g}, {b:g}] failed: {exc}") from exc
        allowed = vr < E
        ok_left = open_end[0] or (not allowed[0] and vr[0] > E)
        ok_right = open_end[1] or (not allowed[-1] and vr[-1] > E)
        if allowed.any() and ok_left and ok_right:
            break
        half *= 2.0
    else:
        raise DomainError(
            "no confinement detected within the scan range; supply the grid manually"
        )

    idx = np.flatnonzero(allowed)
    zl, zr = zs[idx[0]], zs[idx[-1]]
    m = mass_eval(profile, zs)[0]
    kappa = np.sqrt(2.0 * m * np.maximum(vr - E, 0.0)) / units.hbar

    def pad(i0, step):
        acc, i = 0.0, i0
        while acc < decay_lengths:
            j = i + step
            if j < 0 or j >= zs.size:
                return None
            acc += 0.5 * (kappa[i] + kappa[j]) * abs(zs[j] - zs[i])
            i = j
        return zs[i]

    span = zs[1] - zs[0]
    if open_end[0]:
        zmin = _image_end(cmap, -1, zl, 0.5 * L)
    else:
        zmin = pad(idx[0], -1)
        if zmin is None:
            zmin = _extend(V_eff, profile, units, E, zl, -1, decay_lengths, span)
    if open_end[1]:
        zmax = _image_end(cmap, +1, zr, 0.5 * L)
    else:
        zmax = pad(idx[-1], +1)
        if zmax is None:
            zmax = _extend(V_eff, profile, units, E, zr, +1, decay_lengths, span)

    zz = np.linspace(zmin, zmax, SCAN_POINTS)
    mm = mass_eval(profile, zz)[0]
    vv = reduced_potential(V_eff, profile, zz, units)
    kmax = float(np.max(np.sqrt(2.0 * mm * np.abs(E - vv)) / units.hbar))
    h = 2.0 * math.pi / max(kmax, 1e-12) / points_per_wavelength
    h = min(h, L / points_per_wavelength)
    n = int(math.ceil((zmax - zmin) / h)) - 1
    if n > MAX_POINTS:
        raise DomainError(f"automatic grid needs {n} points, above the limit {MAX_POINTS}")
    return Grid(float(zmin), float(zmax), max(n, 3))


def _extend(V_eff, profile, units, E, z0, side, decay_lengths, step, chunk=4096):
    acc, z = 0.0, z0
    for _ in range(256):
        zs = z + side * step * np.arange(chunk + 1)
        m = mass_eval(profile, zs)[0]
        k = np.sqrt(2.0 * m * np.maximum(reduced_potential(V_eff, profile, zs, units) - E, 0.0)) / units.hbar
        cum = acc + np.concatenate([[0.0], np.cumsum(0.5 * (k[1:] + k[:-1]) * step)])
        hit = np.flatnonzero(cum >= decay_lengths)
        if hit.size:
            return float(zs[hit[0]])
        acc, z = float(cum[-1]), float(zs[-1])
    raise DomainError("decay padding did not converge")


def certify_domain(solve, grid: Grid, k: int, tol: float = 1e-6, left_open: bool = True, right_open: bool = True):
    """Doubling test for box adequacy.

    ``solve(grid)`` must return a SpectrumResult. The box is doubled in width,
    split between the sides flagged open, at fixed spacing and the lowest
    ``k`` eigenvalues compared. Returns ``(result, wider_result, max_change, ok)``.
    """
    base = solve(grid)
    w = grid.zmax - grid.zmin
    share = w / (int(left_open) + int(right_open))
    wide = solve(grid.extended(share if left_open else 0.0, share if right_open else 0.0))
    change = float(np.max(np.abs(base.eigenvalues[:k] - wide.eigenvalues[:k])))
    return base, wide, change, change <= tol
