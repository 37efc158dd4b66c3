import math

import numpy as np
import pytest

from effmass import (
    ConstantMass,
    DomainError,
    ExponentialMass,
    HOParameters,
    PotentialModel,
    PTParameters,
    effective_potential,
    exp_case_effective_potential,
    ho_potential,
    ordering_params_for,
    pt_potential,
    rational_case_effective_potential,
)
from effmass.model import HamiltonianPreset
from effmass.solver import (
    Grid,
    Robin,
    assemble_pdm,
    richardson,
    solve_constant_mass,
    solve_pdm,
    solve_von_roos,
)


def zero():
    return PotentialModel(lambda z: 0.0 * z, name="zero")


def test_grid_basics():
    g = Grid(0.0, 1.0, 9)
    assert g.h == pytest.approx(0.1)
    assert g.z[0] == pytest.approx(0.1) and g.z[-1] == pytest.approx(0.9)
    assert g.refined().h == pytest.approx(0.05)
    e = g.extended(0.5, 0.0)
    assert e.zmin == pytest.approx(-0.5) and e.h == pytest.approx(g.h)
    with pytest.raises(DomainError):
        Grid(1.0, 0.0, 10)
    with pytest.raises(DomainError):
        Grid(0.0, 1.0, 2)


def test_box_levels():
    res = solve_constant_mass(zero(), Grid(0.0, math.pi, 3999), 4, vectors=False)
    np.testing.assert_allclose(res.eigenvalues, 0.5 * np.arange(1, 5) ** 2, rtol=1e-6)


def test_harmonic_oscillator_ground_state():
    V = PotentialModel(lambda z: 0.5 * z * z)
    res = solve_constant_mass(V, Grid(-12.0, 12.0, 4000), 1, vectors=False)
    assert abs(res.eigenvalues[0] - 0.5) < 1e-5


def test_second_order_convergence():
    V = PotentialModel(lambda z: 0.5 * z * z)
    g = Grid(-12.0, 12.0, 399)
    e1 = solve_constant_mass(V, g, 1, vectors=False).eigenvalues[0] - 0.5
    e2 = solve_constant_mass(V, g.refined(), 1, vectors=False).eigenvalues[0] - 0.5
    assert 3.2 <= e1 / e2 <= 4.8


def test_poschl_teller_ground_state():
    res = solve_constant_mass(pt_potential(PTParameters(1.0)), Grid(-20.0, 20.0, 8000), 1, vectors=False)
    assert abs(res.eigenvalues[0] + 1.0) < 1e-5


def test_rational_bdd_ground_state():
    p = PTParameters(1.0, 1.0, 2.0)
    veff = rational_case_effective_potential("BDD", p)
    ext, _, _ = richardson(lambda g: solve_pdm(veff, p.mass, g, 1, vectors=False), Grid.from_spacing(-30, 30, 0.01), 1)
    assert abs(ext[0] + 1.0) < 1e-5


def test_eigenvectors():
    V = PotentialModel(lambda z: 0.5 * z * z)
    res = solve_constant_mass(V, Grid(-10.0, 10.0, 1999), 5)
    for i in range(5):
        assert np.sum(res.weights * res.eigenfunctions[i] ** 2) == pytest.approx(1.0, abs=1e-12)
        assert res.residuals[i] < 1e-6 * max(1.0, abs(res.eigenvalues[i]))
    assert res.sign_changes == [0, 1, 2, 3, 4]
    G = (res.eigenfunctions * res.weights) @ res.eigenfunctions.T
    np.testing.assert_allclose(G, np.eye(5), atol=1e-9)


def test_symmetric_assembly():
    d, e, nodes, w = assemble_pdm(zero(), ExponentialMass(1, 1), Grid(-3, 3, 99))
    assert d.size == 99 and e.size == 98
    d, e, nodes, w = assemble_pdm(zero(), ExponentialMass(1, 1), Grid(-3, 3, 99), left=Robin(0.3), right=Robin(-0.2))
    assert d.size == 101 and w[0] == pytest.approx(0.5 * w[1])


def test_robin_neumann_box():
    res = solve_pdm(zero(), ConstantMass(), Grid(0.0, math.pi, 1999), 3, left=Robin(0.0), right=Robin(0.0))
    np.testing.assert_allclose(res.eigenvalues, [0.0, 0.5, 2.0], atol=1e-5)


def test_errors():
    with pytest.raises(DomainError):
        solve_constant_mass(zero(), Grid(0.0, 1.0, 5), 6)
    bad = PotentialModel(lambda z: 1.0 / z)
    with np.errstate(divide="ignore"):
        with pytest.raises(DomainError):
            solve_constant_mass(bad, Grid(-1.0, 1.0, 3), 1)


def test_variational_monotonicity():
    V = PotentialModel(lambda z: 0.5 * z * z)
    h = 0.02
    prev = None
    for L in (2.0, 3.0, 4.0, 6.0):
        e = solve_constant_mass(V, Grid.from_spacing(-L, L, h), 3, vectors=False).eigenvalues
        if prev is not None:
            assert np.all(e <= prev + 1e-12)
        prev = e


@pytest.mark.parametrize("preset", HamiltonianPreset.named())
def test_von_roos_direct_scheme_agrees(preset):
    prof = ExponentialMass(1.0, 1.0)
    bare = exp_case_effective_potential(preset, 4.0, 1.0)
    veff = effective_potential(bare, prof, ordering_params_for(preset))
    g = Grid.from_spacing(-20.0, 3.0, 0.01)
    a, _, _ = richardson(lambda gr: solve_pdm(veff, prof, gr, 2, vectors=False), g, 2)
    b, _, _ = richardson(lambda gr: solve_von_roos(bare, prof, ordering_params_for(preset), gr, 2), g, 2)
    np.testing.assert_allclose(a, b, atol=1e-6)


def test_to_dict():
    d = solve_constant_mass(zero(), Grid(0.0, math.pi, 99), 2).to_dict()
    assert set(d) >= {"eigenvalues", "grid", "residuals", "sign_changes"}


def test_ho_oracle_matches_closed_form():
    ho = HOParameters(1.0)
    ext, _, _ = richardson(lambda g: solve_constant_mass(ho_potential(ho), g, 3, vectors=False),
                           Grid.from_spacing(-10, 10, 0.01), 3)
    np.testing.assert_allclose(ext, (np.arange(3) + 0.5) * math.sqrt(2), atol=1e-6)
