"""
Closed-form reference solutions and the two solvable families.

Harmonic oscillator V = B zt^2 mapped with an exponential mass, and the
Poschl-Teller well mapped with the rational-squared mass. The exponential
family is written out in closed form; the rational family is assembled from
the transformation and the ordering correction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .effpot import PotentialModel, PotentialTag, modification_term, required_bare_potential
from .exceptions import ConfigurationError, DomainError, NoBoundStateError
from .model import (
    HamiltonianPreset,
    RationalSquaredMass,
    UnitSystem,
    ordering_params_for,
)
from .transform import CoordinateMap, effective_from_solvable, mass_term_potential

__all__ = [
    "HOParameters",
    "PTParameters",
    "ho_spectrum",
    "ho_wavefunction",
    "ho_potential",
    "pt_spectrum",
    "pt_potential",
    "exp_case_effective_potential",
    "exp_case_modification_term",
    "rational_case_effective_potential",
    "rational_case_correction",
    "MAX_HERMITE_ORDER",
]

MAX_HERMITE_ORDER = 60

# coefficient c of c * hbar^2 lam^2 / (32 m0) * exp(-lam z), per preset
_EXP_COEFFS = {
    HamiltonianPreset.BEN_DANIEL_DUKE: -3.0,
    HamiltonianPreset.GORA_WILLIAMS: 5.0,
    HamiltonianPreset.ZHU_KROEMER: 1.0,
    HamiltonianPreset.LI_KUHN: 1.0,
}


@dataclass(frozen=True)
class HOParameters:
    """Oscillator V = B zt^2; omega, eta and delta = hbar omega follow from B."""

    B: float
    units: UnitSystem = UnitSystem()

    def __post_init__(self):
        if not self.B > 0:
            raise ConfigurationError(f"oscillator stiffness B must be positive, got {self.B!r}")

    @property
    def omega(self) -> float:
        return math.sqrt(2.0 * self.B / self.units.m0)

    @property
    def eta(self) -> float:
        return math.sqrt(2.0 * self.B * self.units.m0) / self.units.hbar

    @property
    def delta(self) -> float:
        return self.units.hbar * self.omega


@dataclass(frozen=True)
class PTParameters:
    """Poschl-Teller depth ``A``, inverse width ``lam_bar`` and mass parameter ``a``."""

    A: float
    lam_bar: float = 1.0
    a: float = 1.0
    units: UnitSystem = UnitSystem()

    def __post_init__(self):
        if not self.A > 0:
            raise ConfigurationError(f"A must be positive, got {self.A!r}")
        if not self.lam_bar > 0:
            raise ConfigurationError(f"lambdaBar must be positive, got {self.lam_bar!r}")
        if not self.a > 0:
            raise ConfigurationError(f"a must be positive, got {self.a!r}")

    @property
    def step(self) -> float:
        """Level-index energy step lam_bar hbar / sqrt(2 m0)."""
        return self.lam_bar * self.units.hbar / math.sqrt(2.0 * self.units.m0)

    @property
    def s(self) -> float:
        return self.A / self.step

    @property
    def n_max(self) -> int:
        """Highest bound level; a level with E = 0 exactly is not counted."""
        return math.ceil(self.s) - 1

    @property
    def mass(self) -> RationalSquaredMass:
        return RationalSquaredMass(self.units.m0, self.a, self.lam_bar)


def ho_spectrum(p: HOParameters, n: int) -> float:
    if n < 0:
        raise DomainError("level index must be non-negative")
    return (n + 0.5) * p.delta


def ho_potential(p: HOParameters) -> PotentialModel:
    B = p.B
    return PotentialModel(lambda zt: B * zt * zt, PotentialTag.SOLVABLE, {"B": B}, "harmonic")


def ho_wavefunction(p: HOParameters, n: int, zt):
    """Normalised oscillator eigenfunction evaluated at ``zt``.

    Uses the recurrence for Hermite functions rather than raw H_n and
    factorials, so the result never overflows inside the supported range.
    """
    if n < 0:
        raise DomainError("level index must be non-negative")
    if n > MAX_HERMITE_ORDER:
        raise DomainError(f"Hermite order {n} exceeds the supported maximum {MAX_HERMITE_ORDER}")
    x = math.sqrt(p.eta) * np.asarray(zt, dtype=float)
    prev = np.zeros_like(x)
    cur = (p.eta / math.pi) ** 0.25 * np.exp(-0.5 * x * x)
    for k in range(n):
        prev, cur = cur, math.sqrt(2.0 / (k + 1)) * x * cur - math.sqrt(k / (k + 1)) * prev
    return cur


def pt_spectrum(p: PTParameters, n: int) -> float:
    """E_n = -(A - n lam_bar hbar / sqrt(2 m0))^2 for 0 <= n <= n_max."""
    if n < 0:
        raise DomainError("level index must be non-negative")
    if n > p.n_max:
        raise NoBoundStateError(f"level {n} exceeds the last bound state n_max = {p.n_max}")
    return -((p.A - n * p.step) ** 2)


def pt_potential(p: PTParameters) -> PotentialModel:
    """Constant-mass well -A (A + step) sech^2(lam_bar zt)."""
    depth = p.A * (p.A + p.step)
    lb = p.lam_bar

    def v(zt):
        return -depth / np.cosh(lb * zt) ** 2

    return PotentialModel(v, PotentialTag.SOLVABLE, {"A": p.A, "lambdaBar": lb}, "poschl_teller")


def exp_case_modification_term(preset, lam: float, units: UnitSystem = UnitSystem()) -> PotentialModel:
    """Closed-form ordering correction for m = m0 exp(lam z)."""
    c = {
        HamiltonianPreset.BEN_DANIEL_DUKE: 0.0,
        HamiltonianPreset.GORA_WILLIAMS: -0.25,
        HamiltonianPreset.ZHU_KROEMER: -0.125,
        HamiltonianPreset.LI_KUHN: -0.125,
    }[HamiltonianPreset.parse(preset)]
    k = c * units.hbar**2 * lam**2 / units.m0
    return PotentialModel(lambda z: k * np.exp(-lam * z), PotentialTag.BARE, {"lambda": lam})


def exp_case_effective_potential(preset, V0: float, lam: float, units: UnitSystem = UnitSystem()) -> PotentialModel:
    """Bare potential that makes ``preset`` exactly solvable for m = m0 exp(lam z).

    V0 exp(lam z) + c hbar^2 lam^2 / (32 m0) exp(-lam z) with c = -3 (BDD),
    5 (GW) and 1 (ZK, LK). V0 = 4 B / lam^2 for the oscillator V = B zt^2.
    """
    p = HamiltonianPreset.parse(preset)
    if p not in _EXP_COEFFS:
        raise ConfigurationError(f"no closed form for preset {p.value}")
    if not V0 > 0:
        raise ConfigurationError(f"V0 must be positive, got {V0!r}")
    k = _EXP_COEFFS[p] * units.hbar**2 * lam**2 / (32.0 * units.m0)

    def v(z):
        return V0 * np.exp(lam * z) + k * np.exp(-lam * z)

    return PotentialModel(v, PotentialTag.BARE, {"V0": V0, "lambda": lam}, f"exp_{p.short}")


def rational_case_effective_potential(preset, p: PTParameters) -> PotentialModel:
    """Bare potential for ``preset`` sharing the Poschl-Teller spectrum.

    Built as V_PT(zt(z)) - V_m(z) - U(z) for the rational-squared mass.
    """
    preset = HamiltonianPreset.parse(preset)
    cmap = CoordinateMap(p.mass, p.units)
    veff = effective_from_solvable(pt_potential(p), cmap)
    bare = required_bare_potential(veff, p.mass, ordering_params_for(preset), p.units)
    return bare.retag(PotentialTag.BARE, name=f"rational_{preset.short}", a=p.a)


def rational_case_correction(preset, p: PTParameters) -> PotentialModel:
    """The part of :func:`rational_case_effective_potential` beyond V_PT(zt(z))."""
    preset = HamiltonianPreset.parse(preset)
    params = ordering_params_for(preset)

    def corr(z):
        return -mass_term_potential(p.mass, z, p.units) - modification_term(p.mass, params, z, p.units)

    return PotentialModel(corr, PotentialTag.BARE, {"a": p.a}, f"rational_corr_{preset.short}")
