"""Finite-difference eigen-solver used as an independent oracle."""
from .domain import auto_domain, certify_domain, reduced_potential
from .fd import (
    Dirichlet,
    Grid,
    Robin,
    SpectrumResult,
    assemble_pdm,
    richardson,
    sign_changes,
    solve_constant_mass,
    solve_pdm,
    solve_von_roos,
)
from .tridiag import gershgorin_bounds, set_num_threads, sturm_count, tridiag_eigen

set_num_threads()

__all__ = [
    "Grid",
    "Dirichlet",
    "Robin",
    "SpectrumResult",
    "assemble_pdm",
    "richardson",
    "solve_pdm",
    "solve_constant_mass",
    "solve_von_roos",
    "sign_changes",
    "tridiag_eigen",
    "sturm_count",
    "gershgorin_bounds",
    "set_num_threads",
    "auto_domain",
    "certify_domain",
    "reduced_potential",
]
