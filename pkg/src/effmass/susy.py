"""
Supersymmetric partners for a position-dependent mass.

With s(z) = hbar / sqrt(2 m(z)) and A = s d/dz + W the factorised partners
H1 = A+ A and H2 = A A+ share the divergence-form kinetic operator and differ
in their potentials:

    V1 = W^2 - (s W)'
    V2 = V1 + 2 s W' - s s''

Both are expanded analytically through (m, m', m'') and (W, W').
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping, Sequence

import numpy as np

from .analytic import PTParameters
from .effpot import PotentialModel, PotentialTag
from .exceptions import DomainError
from .model import MassProfile, UnitSystem, mass_eval

__all__ = [
    "Superpotential",
    "PartnerPair",
    "ShapeInvariance",
    "partner_potentials",
    "exp_superpotential",
    "rational_superpotential",
    "pt_superpotential",
    "shape_invariance_residual",
    "susy_spectrum",
    "pt_remainders",
    "annihilation_slope",
    "ground_state",
]

SHAPE_INVARIANCE_RTOL = 1e-8


@dataclass(frozen=True)
class Superpotential:
    W: Callable
    dW: Callable
    params: Mapping[str, float] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    def __call__(self, z):
        return np.asarray(self.W(np.asarray(z, dtype=float)), dtype=float)

    def derivative(self, z):
        return np.asarray(self.dW(np.asarray(z, dtype=float)), dtype=float)


@dataclass(frozen=True)
class PartnerPair:
    V1: PotentialModel
    V2: PotentialModel


def _s_terms(profile, z, units):
    """s = hbar/sqrt(2m) with s' and s''."""
    m, dm, d2m = mass_eval(profile, z)
    s = units.hbar / np.sqrt(2.0 * m)
    ds = -s * dm / (2.0 * m)
    d2s = s * (0.75 * dm * dm / (m * m) - 0.5 * d2m / m)
    return s, ds, d2s


def partner_potentials(W: Superpotential, profile: MassProfile, units: UnitSystem = UnitSystem()) -> PartnerPair:
    def v1(z):
        s, ds, _ = _s_terms(profile, z, units)
        w = W(z)
        return w * w - ds * w - s * W.derivative(z)

    def v2(z):
        s, ds, d2s = _s_terms(profile, z, units)
        w = W(z)
        return w * w - ds * w + s * W.derivative(z) - s * d2s

    params = dict(W.params)
    return PartnerPair(
        PotentialModel(v1, PotentialTag.PARTNER, params, f"{W.name}_V1"),
        PotentialModel(v2, PotentialTag.PARTNER, params, f"{W.name}_V2"),
    )


def exp_superpotential(lam: float, delta: float, units: UnitSystem = UnitSystem()) -> Superpotential:
    """Superpotential generating the oscillator ladder for m = m0 exp(lam z)."""
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    r2m = math.sqrt(2.0 * units.m0)
    c1 = r2m * delta / (units.hbar * lam)
    c2 = units.hbar * lam / (4.0 * r2m)

    def W(z):
        return c1 * np.exp(0.5 * lam * z) - c2 * np.exp(-0.5 * lam * z)

    def dW(z):
        return 0.5 * lam * (c1 * np.exp(0.5 * lam * z) + c2 * np.exp(-0.5 * lam * z))

    return Superpotential(W, dW, {"lambda": lam, "delta": delta}, "exp")


def rational_superpotential(p: PTParameters, variant: str = "arctan") -> Superpotential:
    """Superpotential for the Poschl-Teller family with the rational-squared mass.

    ``variant`` selects the function of q = lam_bar z inside the tanh
    argument: ``"arctan"`` (the inverse of the coordinate map) or ``"artanh"``.
    Only the former reproduces the mapped Poschl-Teller potential; the other
    is kept so that the comparison can be made explicitly.
    """
    if variant not in ("arctan", "artanh"):
        raise ValueError(f"unknown variant {variant!r}")
    A, lb, a = p.A, p.lam_bar, p.a
    c = (a - 1.0) * p.units.hbar * lb / math.sqrt(2.0 * p.units.m0)

    def inv(q):
        if variant == "arctan":
            return np.arctan(q), 1.0 / (1.0 + q * q)
        if np.any(np.abs(q) >= 1.0):
            raise DomainError("artanh variant is only defined for |lam_bar z| < 1")
        return np.arctanh(q), 1.0 / (1.0 - q * q)

    def W(z):
        q = lb * z
        y = z + (a - 1.0) * inv(q)[0] / lb
        return A * np.tanh(lb * y) + c * q / (a + q * q) ** 2

    def dW(z):
        q = lb * z
        f, df = inv(q)
        y = z + (a - 1.0) * f / lb
        dy = 1.0 + (a - 1.0) * df
        return A * lb * dy / np.cosh(lb * y) ** 2 + c * lb * (a - 3.0 * q * q) / (a + q * q) ** 3

    return Superpotential(W, dW, {"A": A, "lambdaBar": lb, "a": a}, f"rational_{variant}")


def pt_superpotential(p: PTParameters) -> Superpotential:
    """Constant-mass A tanh(lam_bar z); the a = 1 limit of the rational family."""
    A, lb = p.A, p.lam_bar
    return Superpotential(
        lambda z: A * np.tanh(lb * z),
        lambda z: A * lb / np.cosh(lb * z) ** 2,
        {"A": A, "lambdaBar": lb},
        "pt",
    )


@dataclass(frozen=True)
class ShapeInvariance:
    """Outcome of a shape-invariance test; ``R`` is None when it fails."""

    invariant: bool
    R: float | None
    mean: float
    max_deviation: float
    residual: np.ndarray = field(repr=False)


def shape_invariance_residual(pair_at_a1: PartnerPair, V1_at_a2: PotentialModel, grid) -> ShapeInvariance:
    """Test V2(z; a1) - V1(z; a2) for constancy on ``grid``.

    ``grid`` is an array of abscissae or any object with a ``z`` attribute.
    """
    z = np.asarray(getattr(grid, "z", grid), dtype=float)
    r = pair_at_a1.V2(z) - V1_at_a2(z)
    mean = math.fsum(r.tolist()) / r.size
    dev = float(np.max(np.abs(r - mean)))
    ok = bool(np.all(np.isfinite(r)) and dev < SHAPE_INVARIANCE_RTOL * max(1.0, abs(mean)))
    return ShapeInvariance(ok, mean if ok else None, mean, dev, r)


def susy_spectrum(R_sequence: Sequence[float], n: int) -> float:
    """E_n = R(a_1) + ... + R(a_n), measured from the ground state of V1."""
    if n < 0:
        raise DomainError("level index must be non-negative")
    if n > len(R_sequence):
        raise DomainError(f"level {n} needs {n} remainders, only {len(R_sequence)} supplied")
    return math.fsum(R_sequence[:n])


def pt_remainders(p: PTParameters) -> list[float]:
    """R(A_i) = A_i^2 - A_{i+1}^2 along A_{i+1} = A_i - step, for every bound level."""
    out = []
    A = p.A
    for _ in range(p.n_max):
        nxt = A - p.step
        out.append(A * A - nxt * nxt)
        A = nxt
    return out


def annihilation_slope(W: Superpotential, profile: MassProfile, z: float, units: UnitSystem = UnitSystem()) -> float:
    """Logarithmic derivative psi'/psi imposed by A psi = 0 at ``z``."""
    m = float(mass_eval(profile, z)[0])
    return float(-math.sqrt(2.0 * m) * W(z) / units.hbar)


def ground_state(W: Superpotential, profile: MassProfile, z, units: UnitSystem = UnitSystem()):
    """Unnormalised zero mode exp(-int sqrt(2m) W / hbar dz) on sorted nodes ``z``.

    The integral is accumulated with the trapezoid rule from the first node.
    """
    z = np.asarray(z, dtype=float)
    m = mass_eval(profile, z)[0]
    g = np.sqrt(2.0 * m) * W(z) / units.hbar
    phase = np.concatenate([[0.0], np.cumsum(0.5 * (g[1:] + g[:-1]) * np.diff(z))])
    phase -= phase.min()
    return np.exp(-phase)
