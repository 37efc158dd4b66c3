"""
Ordering-dependent effective potentials.

For a von Roos triple the kinetic operator can be rewritten in divergence
form, -hbar^2/2 d/dz (1/m d/dz), at the price of a local correction

    U(z) = -hbar^2 / (4 m^3) [(alpha + gamma) m m'' - 2 (alpha gamma + alpha + gamma) m'^2]

that is added to the bare potential.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np

from .model import MassProfile, OrderingParameters, UnitSystem, mass_eval

__all__ = [
    "PotentialTag",
    "PotentialModel",
    "modification_term",
    "effective_potential",
    "required_bare_potential",
]


class PotentialTag(enum.Enum):
    BARE = "Bare"
    EFFECTIVE = "Effective"
    SOLVABLE = "Solvable"
    PARTNER = "Partner"


@dataclass(frozen=True)
class PotentialModel:
    """A scalar potential z -> V(z) plus descriptive metadata.

    ``func`` must accept numpy arrays. Calling the model always returns a
    float array of the broadcast shape.
    """

    func: Callable
    tag: PotentialTag = PotentialTag.BARE
    params: Mapping[str, float] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        return np.broadcast_to(np.asarray(self.func(z), dtype=float), z.shape).copy()

    def sample(self, z):
        """Evaluate on ``z`` and reject non-finite values."""
        v = self(z)
        if not np.all(np.isfinite(v)):
            raise ValueError(f"potential {self.name or self.tag.value} is not finite on the grid")
        return v

    def __add__(self, other):
        if isinstance(other, PotentialModel):
            f, g = self.func, other.func
            return PotentialModel(lambda z: f(z) + g(z), self.tag, dict(self.params), self.name)
        c = float(other)
        f = self.func
        return PotentialModel(lambda z: f(z) + c, self.tag, dict(self.params), self.name)

    def __sub__(self, other):
        if isinstance(other, PotentialModel):
            g = other.func
            return self + PotentialModel(lambda z: -g(z))
        return self + (-float(other))

    def scaled(self, factor: float) -> "PotentialModel":
        f = self.func
        return PotentialModel(lambda z: factor * f(z), self.tag, dict(self.params), self.name)

    def retag(self, tag: PotentialTag, name: str | None = None, **params) -> "PotentialModel":
        merged = {**self.params, **params}
        return PotentialModel(self.func, tag, merged, self.name if name is None else name)

    @classmethod
    def zero(cls) -> "PotentialModel":
        return cls(lambda z: np.zeros_like(z), PotentialTag.BARE, name="zero")


def modification_term(profile: MassProfile, params: OrderingParameters, z, units: UnitSystem = UnitSystem()):
    """Ordering correction U(z) added to the bare potential."""
    m, dm, d2m = mass_eval(profile, z)
    a, g = params.alpha, params.gamma
    bracket = (a + g) * m * d2m - 2.0 * (a * g + a + g) * dm * dm
    return -(units.hbar**2) / (4.0 * m**3) * bracket


def effective_potential(
    bare: PotentialModel,
    profile: MassProfile,
    params: OrderingParameters,
    units: UnitSystem = UnitSystem(),
) -> PotentialModel:
    """V_eff = V + U for one ordering; evaluated lazily, pointwise."""
    f = bare.func

    def veff(z):
        return f(z) + modification_term(profile, params, z, units)

    return PotentialModel(
        veff,
        PotentialTag.EFFECTIVE,
        {**bare.params, "alpha": params.alpha, "beta": params.beta, "gamma": params.gamma},
        bare.name,
    )


def required_bare_potential(
    target: PotentialModel,
    profile: MassProfile,
    params: OrderingParameters,
    units: UnitSystem = UnitSystem(),
) -> PotentialModel:
    """Bare potential whose effective potential under ``params`` equals ``target``.

    This is V = V_eff - U: every ordering fed with its own bare potential
    produces the same divergence-form equation and hence the same spectrum.
    """
    f = target.func

    def bare(z):
        return f(z) - modification_term(profile, params, z, units)

    return PotentialModel(bare, PotentialTag.BARE, dict(target.params), target.name)
