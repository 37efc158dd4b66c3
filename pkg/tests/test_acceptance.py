"""Acceptance suite: one group of tests per criterion, summarised at the end of the run."""
import itertools
import math

import numpy as np
import pytest
import sympy as sp
from scipy import integrate

from effmass import (
    ConstantMass,
    CoordinateMap,
    ExponentialMass,
    HOParameters,
    PTParameters,
    RationalSquaredMass,
    UnitSystem,
    effective_from_solvable,
    effective_potential,
    exp_case_effective_potential,
    exp_superpotential,
    ho_potential,
    ho_spectrum,
    ho_wavefunction,
    map_wavefunction,
    modification_term,
    ordering_params_for,
    partner_potentials,
    pt_potential,
    pt_spectrum,
    rational_case_effective_potential,
    shape_invariance_residual,
    solve_band_offset,
    susy_spectrum,
)
from effmass.analytic import exp_case_modification_term
from effmass.bandoffset import Carrier, WellModel, sech2_template
from effmass.model import HamiltonianPreset
from effmass.solver import (
    Grid,
    Robin,
    auto_domain,
    certify_domain,
    richardson,
    solve_constant_mass,
    solve_pdm,
)
from effmass.susy import annihilation_slope
from effmass.verify import REPORT_HEADER, run_bandoffset

from conftest import SHIPPED_PROFILES

PRESETS = HamiltonianPreset.named()
UNITS = UnitSystem()
SQ2 = math.sqrt(2.0)


def pairwise(spectra):
    return max(float(np.max(np.abs(a - b))) for a, b in itertools.combinations(spectra, 2))


# --------------------------------------------------------------------------- 1


@pytest.mark.criterion(1, "isospectrality across orderings, exponential mass")
def test_c1_isospectral_exponential(capsys):
    prof = ExponentialMass(1.0, 1.0)
    V0, k = 4.0, 4
    spectra = []
    for X in PRESETS:
        bare = exp_case_effective_potential(X, V0, 1.0)
        veff = effective_potential(bare, prof, ordering_params_for(X))
        g = auto_domain(veff, prof, k)
        base, _, change, ok = certify_domain(lambda gr, v=veff: solve_pdm(v, prof, gr, k, vectors=False), g, k)
        assert ok, f"{X.short}: box doubling moved levels by {change:.2e}"
        spectra.append(base.eigenvalues)
    dev = pairwise(spectra)
    ladder = (np.arange(k) + 0.5) * SQ2
    with capsys.disabled():
        print(f"\n  c1 pairwise deviation {dev:.2e}; deviation from (n+1/2)sqrt2 "
              f"{np.max(np.abs(spectra[0] - ladder)):.3f} (half-line image, recorded in the verify report)")
    assert dev < 1e-6


# --------------------------------------------------------------------------- 2


@pytest.mark.criterion(2, "transformation route equals closed form")
def test_c2_transformation_consistency():
    prof = ExponentialMass(1.0, 1.0)
    z = np.linspace(-6.0, 4.0, 1001)
    composed = effective_from_solvable(ho_potential(HOParameters(1.0)), CoordinateMap(prof))
    closed = exp_case_effective_potential("BDD", 4.0, 1.0)
    assert np.max(np.abs(composed(z) - closed(z))) < 1e-12


# --------------------------------------------------------------------------- 3


@pytest.mark.criterion(3, "constant-mass oracle")
def test_c3_constant_mass_oracle():
    V = ho_potential(HOParameters(0.5))
    e = solve_constant_mass(V, Grid(-12.0, 12.0, 4000), 1, vectors=False).eigenvalues[0]
    assert abs(e - 0.5) < 1e-5
    g = Grid(-12.0, 12.0, 499)
    e1 = solve_constant_mass(V, g, 1, vectors=False).eigenvalues[0] - 0.5
    e2 = solve_constant_mass(V, g.refined(), 1, vectors=False).eigenvalues[0] - 0.5
    assert abs(e1 / e2 - 4.0) <= 0.8


# --------------------------------------------------------------------------- 4


@pytest.mark.criterion(4, "Poschl-Teller case")
def test_c4a_reduction_to_poschl_teller():
    p = PTParameters(1.0, 1.0, 1.0)
    z = np.linspace(-8.0, 8.0, 1601)
    for X in PRESETS:
        assert np.max(np.abs(rational_case_effective_potential(X, p)(z) - pt_potential(p)(z))) < 1e-12
    e = solve_constant_mass(pt_potential(p), Grid(-20.0, 20.0, 8000), 1, vectors=False).eigenvalues[0]
    assert abs(e + 1.0) < 1e-5


@pytest.mark.criterion(4, "Poschl-Teller case")
@pytest.mark.parametrize("A", [1.0, 2.0])
def test_c4b_rational_isospectral_squared_spectrum(A):
    p = PTParameters(A, 1.0, 2.0)
    nb = p.n_max + 1
    exact = np.array([pt_spectrum(p, n) for n in range(nb)])
    raw, ext = [], []
    for X in PRESETS:
        veff = effective_potential(rational_case_effective_potential(X, p), p.mass, ordering_params_for(X))
        g = auto_domain(veff, p.mass, nb)
        raw.append(solve_pdm(veff, p.mass, g, nb, vectors=False).eigenvalues)
        e, _, _ = richardson(lambda gr, v=veff: solve_pdm(v, p.mass, gr, nb, vectors=False), g.refined(), nb)
        ext.append(e)
    assert nb >= 2
    assert pairwise(raw) < 1e-6
    assert max(float(np.max(np.abs(e - exact))) for e in ext) < 1e-5
    # the unsquared reading -(A - n step) is far from every computed level above the ground state
    assert abs(ext[0][1] + (p.A - p.step)) > 1e-2


# --------------------------------------------------------------------------- 5


@pytest.mark.criterion(5, "SUSY partner identities")
def test_c5_susy_partners():
    prof = ExponentialMass(1.0, 1.0)
    ho = HOParameters(1.0)
    delta = ho.delta
    W = exp_superpotential(1.0, delta)
    pair = partner_potentials(W, prof)
    z = np.linspace(-4.0, 4.0, 801)
    assert np.max(np.abs(pair.V2(z) - pair.V1(z) - delta)) < 1e-10
    si = shape_invariance_residual(pair, pair.V1, z)
    assert si.invariant and abs(si.R - delta) < 1e-10

    k = 4
    alg = np.array([susy_spectrum([delta] * k, n) + 0.5 * delta for n in range(k)])
    exact = np.array([ho_spectrum(ho, n) for n in range(k)])
    assert np.max(np.abs(alg - exact)) <= 4 * np.finfo(float).eps * exact[-1]
    fd, _, _ = richardson(lambda g: solve_constant_mass(ho_potential(ho), g, k, vectors=False),
                          Grid.from_spacing(-12.0, 12.0, 0.01), k)
    assert np.max(np.abs(alg - fd)) < 1e-5

    g = Grid.from_spacing(-4.0, 4.0, 0.0025)
    e0 = solve_pdm(pair.V1, prof, g, 1, left=Robin(annihilation_slope(W, prof, g.zmin)), vectors=False)
    assert abs(e0.eigenvalues[0]) < 1e-5


# --------------------------------------------------------------------------- 6


@pytest.mark.criterion(6, "wavefunction mapping")
def test_c6_wavefunction_mapping():
    prof = ExponentialMass(1.0, 1.0)
    ho = HOParameters(1.0)
    cmap = CoordinateMap(prof)
    z = np.linspace(-8.0, 3.0, 22001)
    lo, hi = (float(v) for v in cmap.forward(np.array([z[0], z[-1]])))
    zt = np.linspace(lo, hi, 40001)
    psi = map_wavefunction(ho_wavefunction(ho, 0, zt), zt, cmap, z)
    norm_z = integrate.simpson(psi * psi, x=z)
    norm_zt, _ = integrate.quad(lambda t: ho_wavefunction(ho, 0, t) ** 2, lo, hi, epsabs=1e-14, epsrel=1e-13)
    assert abs(norm_z - norm_zt) < 1e-6

    veff = exp_case_effective_potential("BDD", 4.0, 1.0)
    h = z[1] - z[0]
    flux = np.diff(psi) / (h * prof(z[:-1] + 0.5 * h))
    Hpsi = -0.5 * np.diff(flux) / h + veff(z[1:-1]) * psi[1:-1]
    res = np.linalg.norm(Hpsi - ho_spectrum(ho, 0) * psi[1:-1]) / np.linalg.norm(psi[1:-1])
    assert res < 1e-4


# --------------------------------------------------------------------------- 7

_zs = sp.symbols("z", real=True)


def _symbolic_mass(name):
    p = SHIPPED_PROFILES[name]
    if isinstance(p, ConstantMass):
        return sp.Float(p.m0) + 0 * _zs
    if isinstance(p, ExponentialMass):
        return sp.Float(p.m0) * sp.exp(sp.Float(p.lam) * _zs)
    if isinstance(p, RationalSquaredMass):
        q = sp.Float(p.lam_bar) * _zs
        return sp.Float(p.m0) * ((sp.Float(p.a) + q**2) / (1 + q**2)) ** 2
    raise AssertionError(name)


def _symbolic_U(m, preset):
    op = ordering_params_for(preset)
    a, g = sp.Rational(op.alpha), sp.Rational(op.gamma)
    m1, m2 = sp.diff(m, _zs), sp.diff(m, _zs, 2)
    return sp.lambdify(_zs, -((a + g) * m * m2 - 2 * (a * g + a + g) * m1**2) / (4 * m**3), "numpy")


Z7 = np.linspace(-3.0, 3.0, 601)


@pytest.mark.criterion(7, "modification-term algebra")
@pytest.mark.parametrize("name", sorted(SHIPPED_PROFILES))
def test_c7_closed_forms(name):
    prof = SHIPPED_PROFILES[name]
    assert np.all(modification_term(prof, ordering_params_for("BDD"), Z7) == 0.0)
    m = _symbolic_mass(name)
    for X in ("GW", "ZK"):
        U = modification_term(prof, ordering_params_for(X), Z7)
        ref = np.broadcast_to(_symbolic_U(m, X)(Z7), Z7.shape)
        assert np.max(np.abs(U - ref) / np.maximum(1.0, np.abs(ref))) < 1e-12
        if isinstance(prof, ExponentialMass):
            closed = exp_case_modification_term(X, prof.lam, UnitSystem(m0=prof.m0))(Z7)
            assert np.max(np.abs(U - closed) / np.maximum(1.0, np.abs(closed))) < 1e-12


@pytest.mark.criterion(7, "modification-term algebra")
@pytest.mark.parametrize("name", sorted(SHIPPED_PROFILES))
def test_c7_zk_equals_lk(name):
    prof = SHIPPED_PROFILES[name]
    zk = modification_term(prof, ordering_params_for("ZK"), Z7)
    lk = modification_term(prof, ordering_params_for("LK"), Z7)
    dev = float(np.max(np.abs(zk - lk)))
    assert dev < 1e-12, f"max |U_ZK - U_LK| = {dev:.6g} for {name}"


@pytest.mark.criterion(7, "modification-term algebra")
def test_c7_decomposition():
    prof = ExponentialMass(1.0, 1.0)
    bdd = exp_case_effective_potential("BDD", 4.0, 1.0)(Z7)
    for X in PRESETS:
        U = modification_term(prof, ordering_params_for(X), Z7)
        lhs = exp_case_effective_potential(X, 4.0, 1.0)(Z7)
        assert np.max(np.abs(lhs - (bdd - U)) / np.maximum(1.0, np.abs(bdd))) < 1e-12


# --------------------------------------------------------------------------- 8


@pytest.mark.criterion(8, "band-offset equality")
def test_c8_constant_mass_band_offset():
    t = sech2_template(1.0)
    well = WellModel(Carrier(ConstantMass(1.0), t), Carrier(ConstantMass(4.0), t), 15.0, 10.0, Grid(-10, 10, 999))
    for A, B in itertools.permutations(PRESETS, 2):
        r = solve_band_offset(well, A, B, 0.6)
        assert r.status == "converged" and abs(r.Q_A - 0.6) <= 1e-8


@pytest.mark.criterion(8, "band-offset equality")
def test_c8_exponential_well_recorded():
    checks = {c.name: c for c in run_bandoffset()}
    for coupling in ("effective", "bare"):
        for A in ("GW", "ZK", "LK"):
            c = checks[f"band.exponential_{coupling}_{A}_vs_BDD"]
            assert len(c.data["g_profile"]) >= 41 and c.data["status"] == "converged"
            assert isinstance(c.passed, bool)
    assert "transition energ" in REPORT_HEADER
