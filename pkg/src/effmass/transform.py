"""
Point-canonical map between a position-dependent-mass problem and a
constant-mass one.

With zt = m0^{-1/2} * int sqrt(m) dz and psi(z) = (m/m0)^{1/4} psit(zt) the
divergence-form equation becomes an ordinary constant-mass Schrodinger
equation whose potential is V_eff + V_m, where

    V_m = hbar^2 / (32 m^3) [7 m'^2 - 4 m m''].

Choosing V_eff = V_ES(zt(z)) - V_m therefore transfers the spectrum of any
solvable V_ES to the variable-mass problem.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .effpot import PotentialModel, PotentialTag
from .exceptions import DomainError, NumericalError
from .model import (
    ConstantMass,
    ExponentialMass,
    MassProfile,
    RationalSquaredMass,
    UnitSystem,
    mass_eval,
)

__all__ = [
    "CoordinateMap",
    "forward_map",
    "inverse_map",
    "nu_factor",
    "mass_term_potential",
    "effective_from_solvable",
    "map_wavefunction",
    "cubic_interpolate",
]

QUAD_EPSABS = 1e-12
QUAD_LIMIT = 200
INVERSE_TOL = 1e-12


class CoordinateMap:
    """Monotone map z -> zt for a given mass profile.

    Closed forms are used for the constant, exponential and rational-squared
    profiles; anything else goes through adaptive quadrature. The additive
    constant of the antiderivative is fixed per profile: zero at z = 0, except
    for the exponential mass where zt = (2/lam) sqrt(m/m0) so that the image
    is a half-line with its end at zt = 0.
    """

    def __init__(self, profile: MassProfile, units: UnitSystem = UnitSystem()):
        self.profile = profile
        self.units = units
        self.analytic = isinstance(profile, (ConstantMass, ExponentialMass, RationalSquaredMass))

    def __repr__(self):
        return f"CoordinateMap({self.profile!r}, {self.units!r})"

    @property
    def _scale(self):
        return math.sqrt(getattr(self.profile, "m0", self.units.m0) / self.units.m0)

    @property
    def anchor(self) -> float:
        """Value of the map at z = 0."""
        p = self.profile
        if isinstance(p, ExponentialMass) and p.lam != 0:
            return self._scale * 2.0 / p.lam
        return 0.0

    @property
    def image(self) -> tuple[float, float]:
        """Open interval covered by the map over the whole real line."""
        p = self.profile
        if isinstance(p, ExponentialMass) and p.lam > 0:
            return (0.0, math.inf)
        if isinstance(p, ExponentialMass) and p.lam < 0:
            return (-math.inf, 0.0)
        return (-math.inf, math.inf)

    def derivative(self, z):
        """dzt/dz = sqrt(m / m0)."""
        m = mass_eval(self.profile, z)[0]
        return np.sqrt(m / self.units.m0)

    def forward(self, z):
        z = np.asarray(z, dtype=float)
        p, c = self.profile, self._scale
        if isinstance(p, ConstantMass):
            return c * z
        if isinstance(p, ExponentialMass):
            if p.lam == 0:
                return c * z
            return c * (2.0 / p.lam) * np.exp(0.5 * p.lam * z)
        if isinstance(p, RationalSquaredMass):
            q = p.lam_bar * z
            return c * (z + (p.a - 1.0) * np.arctan(q) / p.lam_bar)
        return self.forward_quadrature(z)

    def forward_quadrature(self, z):
        """Adaptive Gauss-Kronrod evaluation of the map, for any profile."""
        z = np.asarray(z, dtype=float)
        flat = z.ravel()
        out = np.empty_like(flat)
        integrand = lambda t: float(self.derivative(t))
        order = np.argsort(flat)
        # integrate outward from 0 in consecutive pieces on each side
        for side in (order[flat[order] >= 0], order[flat[order] < 0][::-1]):
            acc, prev = 0.0, 0.0
            for idx in side:
                x = flat[idx]
                if x != prev:
                    val, err, *rest = integrate.quad(
                        integrand, prev, x, epsabs=QUAD_EPSABS, epsrel=1e-13,
                        limit=QUAD_LIMIT, full_output=1,
                    )
                    if err > 10 * max(QUAD_EPSABS, 1e-13 * abs(val)):
                        raise NumericalError(
                            f"quadrature of the mapping integrand on [{prev}, {x}] "
                            f"reached only {err:.3e}"
                        )
                    acc += val
                    prev = x
                out[idx] = acc
        return self.anchor + out.reshape(z.shape)

    def inverse(self, zt):
        zt = np.asarray(zt, dtype=float)
        lo_img, hi_img = self.image
        if np.any(zt <= lo_img) or np.any(zt >= hi_img):
            raise DomainError(f"values outside the image {self.image} of the coordinate map")
        p, c = self.profile, self._scale
        if isinstance(p, ConstantMass) or (isinstance(p, ExponentialMass) and p.lam == 0):
            return zt / c
        if isinstance(p, ExponentialMass):
            return (2.0 / p.lam) * np.log(p.lam * zt / (2.0 * c))
        if isinstance(p, RationalSquaredMass):
            w = abs(p.a - 1.0) * math.pi / (2.0 * p.lam_bar)
            return self._newton(zt, zt / c - w - 1e-9, zt / c + w + 1e-9)
        lo, hi = self._bracket(zt)
        return self._newton(zt, lo, hi)

    def _bracket(self, zt):
        flat = zt.ravel()
        lo = np.full_like(flat, -1.0)
        hi = np.full_like(flat, 1.0)
        for _ in range(200):
            f_lo = self.forward(lo) - flat
            f_hi = self.forward(hi) - flat
            bad_lo, bad_hi = f_lo > 0, f_hi < 0
            if not (bad_lo.any() or bad_hi.any()):
                return lo.reshape(zt.shape), hi.reshape(zt.shape)
            lo = np.where(bad_lo, 2.0 * lo, lo)
            hi = np.where(bad_hi, 2.0 * hi, hi)
        raise NumericalError("could not bracket the inverse of the coordinate map")

    def _newton(self, zt, lo, hi):
        """Safeguarded Newton: fall back to bisection whenever a step leaves the bracket."""
        lo = np.array(lo, dtype=float, copy=True)
        hi = np.array(hi, dtype=float, copy=True)
        z = 0.5 * (lo + hi)
        for _ in range(200):
            f = self.forward(z) - zt
            if np.all(np.abs(f) < INVERSE_TOL):
                return z
            lo = np.where(f < 0, z, lo)
            hi = np.where(f > 0, z, hi)
            step = z - f / self.derivative(z)
            inside = (step > lo) & (step < hi)
            znew = np.where(inside, step, 0.5 * (lo + hi))
            if np.array_equal(znew, z):
                break
            z = znew
        f = self.forward(z) - zt
        ulp = 4 * np.spacing(np.maximum(np.abs(zt), 1.0))
        if np.any(np.abs(f) > np.maximum(INVERSE_TOL, ulp)):
            raise NumericalError(f"inverse map stalled with residual {np.max(np.abs(f)):.3e}")
        return z


def forward_map(cmap: CoordinateMap, z):
    """zt = m0^{-1/2} * int sqrt(m) dz (closed form when available)."""
    return cmap.forward(z)


def inverse_map(cmap: CoordinateMap, zt):
    """z such that forward_map(z) = zt; raises DomainError outside the image."""
    return cmap.inverse(zt)


def nu_factor(cmap: CoordinateMap, z):
    """Wavefunction prefactor (m / m0)^{1/4} with the integration constant 1/sqrt(m0)."""
    m = mass_eval(cmap.profile, z)[0]
    return (m / cmap.units.m0) ** 0.25


def mass_term_potential(profile: MassProfile, z, units: UnitSystem = UnitSystem()):
    m, dm, d2m = mass_eval(profile, z)
    return units.hbar**2 / (32.0 * m**3) * (7.0 * dm * dm - 4.0 * m * d2m)


def effective_from_solvable(v_es: PotentialModel, cmap: CoordinateMap) -> PotentialModel:
    """V_eff(z) = V_ES(zt(z)) - V_m(z): the divergence-form potential sharing V_ES's spectrum."""
    f, profile, units = v_es.func, cmap.profile, cmap.units

    def veff(z):
        return f(cmap.forward(z)) - mass_term_potential(profile, z, units)

    return PotentialModel(veff, PotentialTag.EFFECTIVE, dict(v_es.params), v_es.name)


def cubic_interpolate(x, y, xq):
    """Local four-point Lagrange interpolation on sorted nodes ``x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xq = np.asarray(xq, dtype=float)
    if x.size < 4:
        raise ValueError("cubic interpolation needs at least four nodes")
    span = x[-1] - x[0]
    slack = 1e-12 * max(span, 1.0)
    if np.any(xq < x[0] - slack) or np.any(xq > x[-1] + slack):
        raise DomainError("interpolation target extends beyond the sampled support")
    i = np.clip(np.searchsorted(x, xq) - 2, 0, x.size - 4)
    xs = np.stack([x[i + k] for k in range(4)])
    ys = np.stack([y[i + k] for k in range(4)])
    out = np.zeros_like(xq)
    for j in range(4):
        w = np.ones_like(xq)
        for k in range(4):
            if k != j:
                w = w * (xq - xs[k]) / (xs[j] - xs[k])
        out = out + w * ys[j]
    return out


def map_wavefunction(psi_tilde, zt_grid, cmap: CoordinateMap, z_grid):
    """psi(z) = nu(z) * psit(zt(z)) sampled on ``z_grid``.

    ``psi_tilde`` holds samples of the constant-mass eigenfunction on the
    sorted ``zt_grid``; values in between come from local cubic interpolation.
    The change of variables preserves the L2 norm: int |psi|^2 dz equals
    int |psit|^2 dzt over the image of ``z_grid``.
    """
    z_grid = np.asarray(z_grid, dtype=float)
    zt = cmap.forward(z_grid)
    return nu_factor(cmap, z_grid) * cubic_interpolate(zt_grid, psi_tilde, zt)
