"""
Physical configuration: units, von Roos ordering parameters and mass profiles.

The kinetic operator of the von Roos family is

    T = 1/4 [m^a p m^b p m^c + m^c p m^b p m^a],   a + b + c = -1,

and every named single-band Hamiltonian is a fixed choice of (a, b, c).
Mass profiles return the mass together with its first two derivatives,
which is all the ordering-dependent terms ever need.
"""
from __future__ import annotations

import enum
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import ConfigurationError, DomainError

__all__ = [
    "UnitSystem",
    "OrderingParameters",
    "HamiltonianPreset",
    "ordering_params_for",
    "MassProfile",
    "ConstantMass",
    "ExponentialMass",
    "RationalSquaredMass",
    "UserDefinedMass",
    "mass_eval",
    "validate_derivatives",
]

ORDERING_SUM_TOL = 1e-12


@dataclass(frozen=True)
class UnitSystem:
    """Action scale ``hbar`` and reference mass ``m0`` (dimensionless by default)."""

    hbar: float = 1.0
    m0: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise ConfigurationError(f"hbar must be positive, got {self.hbar!r}")
        if not (np.isfinite(self.m0) and self.m0 > 0):
            raise ConfigurationError(f"m0 must be positive, got {self.m0!r}")


@dataclass(frozen=True)
class OrderingParameters:
    """von Roos exponents; the constructor enforces ``alpha + beta + gamma = -1``."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        total = self.alpha + self.beta + self.gamma
        if not abs(total + 1.0) <= ORDERING_SUM_TOL:
            raise ConfigurationError(
                f"ordering parameters must sum to -1, got {total!r} "
                f"for ({self.alpha}, {self.beta}, {self.gamma})"
            )

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)


class HamiltonianPreset(enum.Enum):
    BEN_DANIEL_DUKE = "BenDanielDuke"
    GORA_WILLIAMS = "GoraWilliams"
    ZHU_KROEMER = "ZhuKroemer"
    LI_KUHN = "LiKuhn"
    CUSTOM = "Custom"

    @property
    def short(self) -> str:
        return _SHORT_NAMES[self]

    @classmethod
    def named(cls) -> list["HamiltonianPreset"]:
        """The four literature presets, in a fixed order."""
        return [cls.BEN_DANIEL_DUKE, cls.GORA_WILLIAMS, cls.ZHU_KROEMER, cls.LI_KUHN]

    @classmethod
    def parse(cls, name: "str | HamiltonianPreset") -> "HamiltonianPreset":
        if isinstance(name, cls):
            return name
        key = str(name).replace("-", "").replace("_", "").replace(" ", "").lower()
        try:
            return _PRESET_ALIASES[key]
        except KeyError:
            raise ConfigurationError(f"unknown Hamiltonian preset {name!r}") from None


_SHORT_NAMES = {
    HamiltonianPreset.BEN_DANIEL_DUKE: "BDD",
    HamiltonianPreset.GORA_WILLIAMS: "GW",
    HamiltonianPreset.ZHU_KROEMER: "ZK",
    HamiltonianPreset.LI_KUHN: "LK",
    HamiltonianPreset.CUSTOM: "CUSTOM",
}

_PRESET_ALIASES = {}
for _p in HamiltonianPreset:
    _PRESET_ALIASES[_p.value.lower()] = _p
    _PRESET_ALIASES[_SHORT_NAMES[_p].lower()] = _p
_PRESET_ALIASES["bastard"] = HamiltonianPreset.GORA_WILLIAMS

_TABLE = {
    HamiltonianPreset.BEN_DANIEL_DUKE: (0.0, -1.0, 0.0),
    HamiltonianPreset.GORA_WILLIAMS: (-1.0, 0.0, 0.0),
    HamiltonianPreset.ZHU_KROEMER: (-0.5, 0.0, -0.5),
    HamiltonianPreset.LI_KUHN: (0.0, -0.5, -0.5),
}


def ordering_params_for(preset: "str | HamiltonianPreset") -> OrderingParameters:
    """Return the (alpha, beta, gamma) triple of a named Hamiltonian.

    Raises
    ------
    ConfigurationError
        For unknown names and for ``Custom``, which has no fixed triple.
    """
    p = HamiltonianPreset.parse(preset)
    if p is HamiltonianPreset.CUSTOM:
        raise ConfigurationError("the Custom preset carries no fixed ordering triple")
    return OrderingParameters(*_TABLE[p])


class MassProfile(ABC):
    """A strictly positive effective mass m(z) with analytic m' and m''."""

    #: characteristic length used by domain heuristics
    length_scale: float = 1.0

    @abstractmethod
    def evaluate(self, z):
        """Return ``(m, dm, d2m)`` as float arrays broadcast against ``z``."""

    def __call__(self, z):
        return self.evaluate(z)[0]


@dataclass(frozen=True)
class ConstantMass(MassProfile):
    m0: float = 1.0

    def __post_init__(self):
        if not self.m0 > 0:
            raise ConfigurationError(f"mass must be positive, got {self.m0!r}")

    def evaluate(self, z):
        z = np.asarray(z, dtype=float)
        m = np.full_like(z, self.m0)
        return m, np.zeros_like(z), np.zeros_like(z)


@dataclass(frozen=True)
class ExponentialMass(MassProfile):
    """m(z) = m0 exp(lam z); ``lam`` may take either sign."""

    m0: float = 1.0
    lam: float = 1.0

    def __post_init__(self):
        if not self.m0 > 0:
            raise ConfigurationError(f"mass must be positive, got {self.m0!r}")
        if not np.isfinite(self.lam):
            raise ConfigurationError("lambda must be finite")

    @property
    def length_scale(self):
        return 1.0 / abs(self.lam) if self.lam else 1.0

    def evaluate(self, z):
        z = np.asarray(z, dtype=float)
        m = self.m0 * np.exp(self.lam * z)
        return m, self.lam * m, self.lam**2 * m


@dataclass(frozen=True)
class RationalSquaredMass(MassProfile):
    """m(z) = m0 ((a + q^2) / (1 + q^2))^2 with q = lam_bar z."""

    m0: float = 1.0
    a: float = 1.0
    lam_bar: float = 1.0

    def __post_init__(self):
        if not self.m0 > 0:
            raise ConfigurationError(f"mass must be positive, got {self.m0!r}")
        if not self.a > 0:
            raise ConfigurationError(f"a must be positive, got {self.a!r}")
        if not self.lam_bar > 0:
            raise ConfigurationError(f"lambdaBar must be positive, got {self.lam_bar!r}")

    @property
    def length_scale(self):
        return 1.0 / self.lam_bar

    def ratio(self, z):
        """g = (a + q^2)/(1 + q^2) and its first two z-derivatives."""
        q = self.lam_bar * np.asarray(z, dtype=float)
        s = 1.0 + q * q
        c = self.a - 1.0
        g = 1.0 + c / s
        dg = -2.0 * c * self.lam_bar * q / s**2
        d2g = -2.0 * c * self.lam_bar**2 * (1.0 - 3.0 * q * q) / s**3
        return g, dg, d2g

    def evaluate(self, z):
        g, dg, d2g = self.ratio(z)
        return (
            self.m0 * g * g,
            2.0 * self.m0 * g * dg,
            2.0 * self.m0 * (dg * dg + g * d2g),
        )


@dataclass(frozen=True)
class UserDefinedMass(MassProfile):
    """Mass supplied as three callables; derivatives are never inferred."""

    m: Callable
    dm: Callable
    d2m: Callable
    name: str = "user"
    length_scale: float = field(default=1.0)

    def evaluate(self, z):
        z = np.asarray(z, dtype=float)
        shape = z.shape
        out = []
        for f in (self.m, self.dm, self.d2m):
            v = np.asarray(f(z), dtype=float)
            out.append(np.broadcast_to(v, shape).copy())
        return tuple(out)


def mass_eval(profile: MassProfile, z):
    """Evaluate ``(m, m', m'')`` and reject non-positive masses.

    Raises
    ------
    DomainError
        If the mass is not strictly positive and finite at every point.
    """
    m, dm, d2m = profile.evaluate(z)
    if not np.all(np.isfinite(m)) or np.any(m <= 0):
        bad = np.asarray(z, dtype=float)
        raise DomainError(f"mass profile is not positive and finite on {bad!r}")
    return m, dm, d2m


def validate_derivatives(profile: MassProfile, z, rtol: float = 1e-6, step: float | None = None):
    """Compare analytic m', m'' with 5-point central differences of m.

    Returns the worst relative errors ``(err_dm, err_d2m)``. The error is
    measured against ``max(|analytic|, |m| / L^k)`` so derivatives that vanish
    at a sample point do not produce a spurious infinite ratio.

    Raises
    ------
    ConfigurationError
        When either error exceeds ``rtol``.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    L = float(profile.length_scale)
    h = step if step is not None else 2e-3 * L
    m, dm, d2m = mass_eval(profile, z)
    f = [profile.evaluate(z + s * h)[0] for s in (-2, -1, 1, 2)]
    fd1 = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
    fd2 = (-f[0] + 16 * f[1] - 30 * m + 16 * f[2] - f[3]) / (12 * h * h)
    err1 = np.max(np.abs(fd1 - dm) / np.maximum(np.abs(dm), np.abs(m) / L))
    err2 = np.max(np.abs(fd2 - d2m) / np.maximum(np.abs(d2m), np.abs(m) / L**2))
    if err1 > rtol or err2 > rtol:
        raise ConfigurationError(
            f"mass derivatives disagree with finite differences "
            f"(relative errors {err1:.3e}, {err2:.3e} > {rtol:g})"
        )
    return float(err1), float(err2)
