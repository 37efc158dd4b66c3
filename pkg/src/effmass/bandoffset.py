"""
Transition energies of a single quantum well and the band-offset ratio.

Each carrier sees a well whose barrier height is a fraction of the band-gap
difference: V_cb = Q dEg for the electron and V_vb = (1 - Q) dEg for the
hole. The well shape is a template s(z) equal to 0 at the well bottom and
tending to 1 in the barrier. Confinement energies are measured from the
well bottom, so a deeper well raises them towards the hard-wall limit and
E_e(Q) is non-decreasing in Q.

Two couplings of the depth to the ordering are supported:

``"bare"``
    Q scales the bare potential; the ordering correction U(z) depends only
    on the mass and is added unchanged. Different orderings then give
    different levels.
``"effective"``
    The template is taken as the effective potential of every ordering, so
    all orderings share one spectrum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .effpot import PotentialModel, effective_potential
from .exceptions import ConfigurationError
from .model import HamiltonianPreset, MassProfile, UnitSystem, ordering_params_for
from .solver.fd import Grid, solve_pdm

__all__ = [
    "Carrier",
    "WellModel",
    "BandOffsetResult",
    "transition_energy",
    "carrier_level",
    "well_transition_energy",
    "solve_band_offset",
    "sech2_template",
    "smooth_square_template",
    "COUPLINGS",
]

COUPLINGS = ("bare", "effective")
Q_EPS = 1e-6
Q_TOL = 1e-12


def sech2_template(width: float = 1.0) -> PotentialModel:
    """s(z) = 1 - sech^2(z / width)."""
    return PotentialModel(lambda z: 1.0 - 1.0 / np.cosh(z / width) ** 2, name="sech2", params={"width": width})


def smooth_square_template(width: float = 2.0, smoothness: float = 0.1) -> PotentialModel:
    """Square well of full ``width`` with tanh edges of length ``smoothness``."""
    hw = 0.5 * width

    def s(z):
        return 1.0 + 0.5 * (np.tanh((z - hw) / smoothness) - np.tanh((z + hw) / smoothness))

    return PotentialModel(s, name="smooth_square", params={"width": width, "smoothness": smoothness})


@dataclass(frozen=True)
class Carrier:
    profile: MassProfile
    template: PotentialModel


@dataclass(frozen=True)
class WellModel:
    """Electron and hole wells sharing one finite box ``grid``."""

    electron: Carrier
    hole: Carrier
    EG: float
    deltaEg: float
    grid: Grid
    coupling: str = "bare"

    def __post_init__(self):
        if not self.EG > 0:
            raise ConfigurationError(f"EG must be positive, got {self.EG!r}")
        if not self.deltaEg > 0:
            raise ConfigurationError(f"deltaEg must be positive, got {self.deltaEg!r}")
        if self.coupling not in COUPLINGS:
            raise ConfigurationError(f"coupling must be one of {COUPLINGS}, got {self.coupling!r}")


def transition_energy(Ee: float, Eh: float, EG: float) -> float:
    """E_T = E_e + E_h + E_G."""
    return Ee + Eh + EG


def carrier_level(carrier: Carrier, depth: float, preset, n: int, grid: Grid, coupling: str = "bare",
                  units: UnitSystem = UnitSystem()) -> float:
    """Level ``n`` of one carrier in a well of barrier height ``depth``."""
    shape = carrier.template.scaled(depth)
    if coupling == "effective":
        veff = shape
    else:
        veff = effective_potential(shape, carrier.profile, ordering_params_for(preset), units)
    return float(solve_pdm(veff, carrier.profile, grid, n + 1, units, vectors=False).eigenvalues[n])


def well_transition_energy(well: WellModel, preset, Q: float, level_pair=(0, 0), units: UnitSystem = UnitSystem()) -> float:
    ne, nh = level_pair
    Ee = carrier_level(well.electron, Q * well.deltaEg, preset, ne, well.grid, well.coupling, units)
    Eh = carrier_level(well.hole, (1.0 - Q) * well.deltaEg, preset, nh, well.grid, well.coupling, units)
    return transition_energy(Ee, Eh, well.EG)


@dataclass
class BandOffsetResult:
    Q_A: float | None
    iterations: int
    g_profile: list = field(default_factory=list)
    status: str = "converged"
    target: float = math.nan
    residual: float = math.nan

    def to_dict(self) -> dict:
        return {
            "Q_A": self.Q_A,
            "iterations": self.iterations,
            "status": self.status,
            "target_transition_energy": self.target,
            "residual": self.residual,
            "g_profile": [[float(q), float(g)] for q, g in self.g_profile],
        }


def solve_band_offset(
    well: WellModel,
    presetA,
    presetB,
    Q_B: float,
    level_pair=(0, 0),
    units: UnitSystem = UnitSystem(),
    scan_points: int = 41,
) -> BandOffsetResult:
    """Ratio Q_A at which ordering A reproduces the transition energy of B at Q_B.

    g(Q) = E_T^A(Q) - E_T^B(Q_B) is scanned on (Q_EPS, 1 - Q_EPS); the sign
    change closest to Q_B is refined by bisection until the bracket is below
    Q_TOL or |g| < 1e-8 E_T. A missing sign change is reported through
    ``status = "no_solution"`` together with the scanned profile.
    """
    presetA = HamiltonianPreset.parse(presetA)
    presetB = HamiltonianPreset.parse(presetB)
    if not 0.0 < Q_B < 1.0:
        raise ConfigurationError(f"Q_B must lie in (0, 1), got {Q_B!r}")
    target = well_transition_energy(well, presetB, Q_B, level_pair, units)
    tol = 1e-8 * abs(target)

    def g(Q):
        return well_transition_energy(well, presetA, Q, level_pair, units) - target

    qs = np.unique(np.concatenate([np.linspace(Q_EPS, 1.0 - Q_EPS, scan_points), [Q_B]]))
    gs = np.array([g(q) for q in qs])
    profile = list(zip(qs.tolist(), gs.tolist()))

    exact = np.flatnonzero(gs == 0.0)
    brackets = [i for i in range(qs.size - 1) if np.sign(gs[i]) * np.sign(gs[i + 1]) < 0]
    candidates = [(abs(qs[i] - Q_B), "exact", i) for i in exact]
    candidates += [(min(abs(qs[i] - Q_B), abs(qs[i + 1] - Q_B)), "bracket", i) for i in brackets]
    if not candidates:
        return BandOffsetResult(None, 0, profile, "no_solution", target, float(np.min(np.abs(gs))))
    _, kind, i = min(candidates)
    if kind == "exact":
        return BandOffsetResult(float(qs[i]), 0, profile, "converged", target, 0.0)

    lo, hi, glo = qs[i], qs[i + 1], gs[i]
    it = 0
    mid, gm = lo, glo
    while hi - lo > Q_TOL:
        it += 1
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0 or (abs(gm) < tol and hi - lo < 1e-9):
            break
        if np.sign(gm) == np.sign(glo):
            lo, glo = mid, gm
        else:
            hi = mid
    return BandOffsetResult(float(mid), it, profile, "converged", target, float(gm))
