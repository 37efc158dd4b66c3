"""
Position-dependent effective-mass Schrodinger equations.

Orderings of the von Roos kinetic operator, their effective potentials,
the point-canonical map to constant mass, supersymmetric partners, a
finite-difference eigen-solver and band-offset analysis.
"""
from .exceptions import ConfigurationError, DomainError, EffMassError, NoBoundStateError, NumericalError
from .model import (
    ConstantMass,
    ExponentialMass,
    HamiltonianPreset,
    MassProfile,
    OrderingParameters,
    RationalSquaredMass,
    UnitSystem,
    UserDefinedMass,
    mass_eval,
    ordering_params_for,
    validate_derivatives,
)
from .effpot import PotentialModel, PotentialTag, effective_potential, modification_term, required_bare_potential
from .transform import (
    CoordinateMap,
    effective_from_solvable,
    forward_map,
    inverse_map,
    map_wavefunction,
    mass_term_potential,
    nu_factor,
)
from .analytic import (
    HOParameters,
    PTParameters,
    exp_case_effective_potential,
    exp_case_modification_term,
    ho_potential,
    ho_spectrum,
    ho_wavefunction,
    pt_potential,
    pt_spectrum,
    rational_case_effective_potential,
)
from .susy import (
    PartnerPair,
    Superpotential,
    exp_superpotential,
    partner_potentials,
    rational_superpotential,
    shape_invariance_residual,
    susy_spectrum,
)
from .solver import Grid, SpectrumResult, auto_domain, solve_constant_mass, solve_pdm, tridiag_eigen
from .bandoffset import WellModel, solve_band_offset, transition_energy

__version__ = "0.1.0"
