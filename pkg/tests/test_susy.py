import math

import numpy as np
import pytest

from effmass import (
    ConstantMass,
    DomainError,
    ExponentialMass,
    HOParameters,
    PTParameters,
    UnitSystem,
    exp_case_effective_potential,
    exp_superpotential,
    partner_potentials,
    pt_spectrum,
    rational_case_effective_potential,
    rational_superpotential,
    shape_invariance_residual,
    susy_spectrum,
)
from effmass.solver import Grid, Robin, solve_pdm
from effmass.susy import Superpotential, annihilation_slope, ground_state, pt_remainders, pt_superpotential

D = math.sqrt(2.0)


def _fd_partner_v1(W, profile, z, units=UnitSystem(), h=1e-4):
    def sw(x):
        return units.hbar * W(x) / np.sqrt(2 * profile(x))

    return W(z) ** 2 - (sw(z + h) - sw(z - h)) / (2 * h)


def _fd_check(W, z, h=1e-5):
    return np.max(np.abs((W(z + h) - W(z - h)) / (2 * h) - W.derivative(z)) / np.maximum(1, np.abs(W.derivative(z))))


def test_exp_superpotential_value():
    W = exp_superpotential(1.0, D)
    assert W(0.0) == pytest.approx(2 - 1 / (4 * math.sqrt(2)), abs=1e-15)
    assert W(0.0) == pytest.approx(1.8232233, abs=1e-7)
    assert W(-40.0) < -1e7
    with pytest.raises(DomainError):
        exp_superpotential(1.0, 0.0)


def test_superpotential_derivatives():
    z = np.array([-1.0, 0.0, 1.0])
    assert _fd_check(exp_superpotential(1.0, D), z) < 1e-8
    p = PTParameters(1.2, 0.9, 2.5)
    assert _fd_check(rational_superpotential(p), np.linspace(-3, 3, 13)) < 1e-8
    assert _fd_check(rational_superpotential(p, "artanh"), np.linspace(-0.9, 0.9, 7)) < 1e-8
    assert _fd_check(pt_superpotential(p), np.linspace(-3, 3, 13)) < 1e-8


def test_partner_identity_against_finite_differences():
    z = np.linspace(-2, 2, 21)
    units = UnitSystem(hbar=1.1, m0=0.9)
    cases = [
        (exp_superpotential(0.8, 1.3, units), ExponentialMass(0.9, 0.8)),
        (rational_superpotential(PTParameters(1.0, 1.0, 2.0, units)), PTParameters(1.0, 1.0, 2.0, units).mass),
    ]
    for W, prof in cases:
        pair = partner_potentials(W, prof, units)
        np.testing.assert_allclose(pair.V1(z), _fd_partner_v1(W, prof, z, units), atol=1e-6)


def test_exponential_partner_values():
    prof = ExponentialMass(1.0, 1.0)
    pair = partner_potentials(exp_superpotential(1.0, D), prof)
    assert pair.V1(0.0) == pytest.approx(4 - 3 / 32 - D / 2, abs=1e-14)
    z = np.linspace(-4, 4, 801)
    np.testing.assert_allclose(pair.V2(z) - pair.V1(z), D, atol=1e-10)
    np.testing.assert_allclose(pair.V1(z), exp_case_effective_potential("BDD", 4.0, 1.0)(z) - D / 2, atol=1e-12)


def test_constant_superpotential():
    W = Superpotential(lambda z: 0.7 + 0 * z, lambda z: 0 * z)
    pair = partner_potentials(W, ConstantMass())
    z = np.linspace(-1, 1, 5)
    np.testing.assert_allclose(pair.V1(z), 0.49)
    np.testing.assert_allclose(pair.V2(z), 0.49)


def test_rational_superpotential_limits():
    z = np.linspace(-3, 3, 13)
    p1 = PTParameters(1.4, 0.7, 1.0)
    np.testing.assert_allclose(rational_superpotential(p1)(z), 1.4 * np.tanh(0.7 * z), atol=1e-15)
    assert rational_superpotential(PTParameters(1.0, 1.0, 3.0))(0.0) == 0.0
    with pytest.raises(DomainError):
        rational_superpotential(PTParameters(1.0, 1.0, 2.0), "artanh")(np.array([1.0]))
    with pytest.raises(ValueError):
        rational_superpotential(p1, "log")


def test_arctan_superpotential_reproduces_bdd_family():
    p = PTParameters(1.0, 1.0, 2.0)
    z = np.linspace(-6, 6, 241)
    V1 = partner_potentials(rational_superpotential(p, "arctan"), p.mass).V1
    target = rational_case_effective_potential("BDD", p)
    np.testing.assert_allclose(V1(z), target(z) - pt_spectrum(p, 0), atol=1e-6)


def test_artanh_superpotential_does_not():
    p = PTParameters(1.0, 1.0, 2.0)
    z = np.linspace(-0.95, 0.95, 39)
    V1 = partner_potentials(rational_superpotential(p, "artanh"), p.mass).V1
    target = rational_case_effective_potential("BDD", p)
    assert np.max(np.abs(V1(z) - target(z) + pt_spectrum(p, 0))) > 1e-2


def test_shape_invariance_exponential():
    pair = partner_potentials(exp_superpotential(1.0, D), ExponentialMass(1, 1))
    res = shape_invariance_residual(pair, pair.V1, np.linspace(-4, 4, 401))
    assert res.invariant and res.R == pytest.approx(D, abs=1e-12)


@pytest.mark.parametrize("a", [1.0, 2.0, 0.5])
def test_shape_invariance_poschl_teller_chain(a):
    p = PTParameters(2.0, 1.0, a)
    p2 = PTParameters(2.0 - p.step, 1.0, a)
    pair = partner_potentials(rational_superpotential(p), p.mass)
    res = shape_invariance_residual(pair, partner_potentials(rational_superpotential(p2), p2.mass).V1,
                                    Grid(-6, 6, 301))
    assert res.invariant
    assert res.R == pytest.approx(p.A**2 - p2.A**2, abs=1e-12)


def test_shape_invariance_negative_control():
    z = np.linspace(-4, 4, 201)
    pho = partner_potentials(pt_superpotential(PTParameters(1.0)), ConstantMass())
    other = partner_potentials(Superpotential(lambda x: x, lambda x: np.ones_like(x)), ConstantMass())
    res = shape_invariance_residual(pho, other.V1, z)
    assert not res.invariant and res.R is None and res.max_deviation > 1


def test_susy_spectrum():
    assert susy_spectrum([D] * 5, 3) == pytest.approx(3 * D)
    assert susy_spectrum([], 0) == 0.0
    with pytest.raises(DomainError):
        susy_spectrum([1.0, 2.0], 3)
    ho = HOParameters(1.0)
    for n in range(5):
        assert susy_spectrum([ho.delta] * 5, n) + ho.delta / 2 == pytest.approx((n + 0.5) * ho.delta, rel=1e-15)


def test_pt_chain_matches_spectrum():
    p = PTParameters(1.0)
    R = pt_remainders(p)
    assert R[0] == pytest.approx(0.9142136, abs=1e-7)
    assert susy_spectrum(R, 1) - 1.0 == pytest.approx(-0.0857864, abs=1e-7)
    p = PTParameters(3.3, 0.8, 2.0)
    R = pt_remainders(p)
    for n in range(p.n_max + 1):
        assert susy_spectrum(R, n) - p.A**2 == pytest.approx(pt_spectrum(p, n), abs=1e-12)


def test_ground_state_annihilation_exponential():
    prof = ExponentialMass(1, 1)
    W = exp_superpotential(1.0, D)
    pair = partner_potentials(W, prof)
    g = Grid.from_spacing(-4.0, 4.0, 0.0025)
    res = solve_pdm(pair.V1, prof, g, 2, left=Robin(annihilation_slope(W, prof, g.zmin)))
    assert abs(res.eigenvalues[0]) < 1e-5
    psi0 = ground_state(W, prof, res.nodes)
    psi0 /= math.sqrt(np.sum(res.weights * psi0**2))
    assert np.max(np.abs(psi0 - res.eigenfunctions[0])) < 1e-3


def test_ground_state_annihilation_rational():
    p = PTParameters(1.0, 1.0, 2.0)
    pair = partner_potentials(rational_superpotential(p), p.mass)
    e = solve_pdm(pair.V1, p.mass, Grid.from_spacing(-30, 30, 0.01), 1, vectors=False).eigenvalues[0]
    assert abs(e) < 1e-4
