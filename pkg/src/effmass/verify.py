"""
Self-verification suite: isospectrality, transformation, SUSY and
band-offset checks for the exponential and rational-squared cases.

Every check records its tolerance and the deviation actually achieved.
Checks marked ``required=False`` are findings: they are reported with the
measured numbers but do not decide the overall verdict.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate

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
from .bandoffset import Carrier, WellModel, sech2_template, solve_band_offset
from .effpot import effective_potential, modification_term
from .model import ConstantMass, ExponentialMass, HamiltonianPreset, UnitSystem, ordering_params_for
from .solver import Grid, Robin, auto_domain, certify_domain, richardson, solve_constant_mass, solve_pdm, solve_von_roos
from .susy import (
    annihilation_slope,
    exp_superpotential,
    partner_potentials,
    pt_remainders,
    pt_superpotential,
    rational_superpotential,
    shape_invariance_residual,
    susy_spectrum,
)
from .transform import CoordinateMap, effective_from_solvable, map_wavefunction

__all__ = ["Check", "Report", "run_exponential", "run_rational", "run_bandoffset", "run_suite", "REPORT_HEADER"]

REPORT_HEADER = (
    "Band offsets and the choice of ordering. When every kinetic-energy ordering is paired with "
    "the bare potential that gives it the same effective potential, all orderings share one "
    "spectrum, transitions between corresponding levels have the same energy, and any ordering "
    "returns the same band-offset ratio. When instead a single bare well, with its depth set by "
    "the ratio Q, is shared by all orderings, the mass-gradient correction moves the levels by "
    "an ordering-dependent amount, and fitting one measured transition energy assigns a different "
    "Q to each ordering. A band-offset ratio inferred from transition energies is then only as "
    "reliable as the ordering assumed. Both couplings are computed below."
)


@dataclass
class Check:
    name: str
    passed: bool
    tolerance: float | None
    deviation: float | None
    detail: str = ""
    required: bool = True
    data: dict = field(default_factory=dict)


@dataclass
class Report:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.required)

    def failures(self) -> list:
        return [c for c in self.checks if c.required and not c.passed]

    def to_dict(self) -> dict:
        return {
            "header": REPORT_HEADER,
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_required_failed": len(self.failures()),
            "checks": [asdict(c) for c in self.checks],
        }


def _check(name, deviation, tol, detail="", required=True, **data):
    dev = float(deviation)
    return Check(name, bool(dev <= tol), float(tol), dev, detail, required, data)


def _pairwise(spectra: dict) -> float:
    return max(
        float(np.max(np.abs(spectra[a] - spectra[b]))) for a, b in itertools.combinations(spectra, 2)
    )


# --------------------------------------------------------------------------- exponential


def run_exponential(lam: float = 1.0, B: float = 1.0, units: UnitSystem = UnitSystem(), k: int = 4) -> list:
    checks = []
    ho = HOParameters(B, units)
    prof = ExponentialMass(units.m0, lam)
    V0 = 4.0 * B / lam**2
    delta = ho.delta
    zs = np.linspace(-6.0, 4.0, 1001) / abs(lam)

    # transformation route against the closed form
    cmap = CoordinateMap(prof, units)
    composed = effective_from_solvable(ho_potential(ho), cmap)
    closed = exp_case_effective_potential("BDD", V0, lam, units)
    dev = np.max(np.abs(composed(zs) - closed(zs)) / np.maximum(1.0, np.abs(closed(zs))))
    checks.append(_check("exp.transformation_matches_closed_form", dev, 1e-12,
                         "mapped oscillator minus V_m against the BDD closed form, relative to max(1,|V|)"))

    # ordering corrections
    zz = np.linspace(-3.0, 3.0, 601) / abs(lam)
    worst = 0.0
    for X in HamiltonianPreset.named():
        U = modification_term(prof, ordering_params_for(X), zz, units)
        ref = exp_case_modification_term(X, lam, units)(zz)
        worst = max(worst, float(np.max(np.abs(U - ref) / np.maximum(1.0, np.abs(ref)))))
        lhs = exp_case_effective_potential(X, V0, lam, units)(zz)
        rhs = closed(zz) - U
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs)))))
    checks.append(_check("exp.modification_terms_closed_form", worst, 1e-12,
                         "U for every ordering and V_X = V_BDD - U_X"))

    # isospectrality of the four orderings
    spectra, grids = {}, {}
    for X in HamiltonianPreset.named():
        bare = exp_case_effective_potential(X, V0, lam, units)
        veff = effective_potential(bare, prof, ordering_params_for(X), units)
        g = auto_domain(veff, prof, k, units)
        base, wide, change, ok = certify_domain(
            lambda gr, v=veff: solve_pdm(v, prof, gr, k, units, vectors=False), g, k)
        spectra[X.short] = base.eigenvalues
        grids[X.short] = (g, change)
    checks.append(_check("exp.isospectral_pairwise", _pairwise(spectra), 1e-6,
                         f"lowest {k} Dirichlet levels of the four orderings",
                         eigenvalues={x: list(map(float, e)) for x, e in spectra.items()}))
    change = max(c for _, c in grids.values())
    g0 = grids["BDD"][0]
    checks.append(_check("exp.domain_doubling", change, 1e-6,
                         f"box [{g0.zmin:.6g}, {g0.zmax:.6g}] doubled at fixed spacing h={g0.h:.4g}"))

    E = spectra["BDD"]
    full = np.array([ho_spectrum(ho, n) for n in range(k)])
    odd = np.array([ho_spectrum(ho, 2 * n + 1) for n in range(k)])
    checks.append(_check(
        "exp.levels_vs_full_line_ladder", np.max(np.abs(E - full)), 1e-6,
        "Dirichlet levels compared with (n+1/2) hbar omega; the mapped coordinate covers only a half-line, "
        "so the truncated box reproduces the odd-parity members of the ladder instead",
        required=False, eigenvalues=list(map(float, E)), full_line=list(map(float, full))))
    veff = effective_potential(closed, prof, ordering_params_for("BDD"), units)
    ext, _, _ = richardson(lambda gr: solve_pdm(veff, prof, gr, k, units, vectors=False), g0, k)
    checks.append(_check(
        "exp.levels_vs_odd_ladder", np.max(np.abs(ext - odd)), 1e-5,
        "Richardson-extrapolated Dirichlet levels compared with (2n+3/2) hbar omega",
        required=False, odd_ladder=list(map(float, odd)), extrapolated=list(map(float, ext))))

    # direct von Roos discretisation: independent of the U formula
    g = Grid.from_spacing(-20.0 / abs(lam), 3.0 / abs(lam), 0.005 / abs(lam))
    ref, _, _ = richardson(lambda gr: solve_pdm(closed, prof, gr, 3, units, vectors=False), g, 3)
    worst = 0.0
    for X in HamiltonianPreset.named():
        bare = exp_case_effective_potential(X, V0, lam, units)
        ext, _, _ = richardson(
            lambda gr, b=bare, p=ordering_params_for(X): solve_von_roos(b, prof, p, gr, 3, units), g, 3)
        worst = max(worst, float(np.max(np.abs(ext - ref))))
    checks.append(_check("exp.von_roos_direct_discretisation", worst, 1e-6,
                         "symmetrised m^a p m^b p m^g scheme with bare V_X against the divergence form, "
                         "both Richardson-extrapolated", reference=list(map(float, ref))))

    # SUSY
    W = exp_superpotential(lam, delta, units)
    pair = partner_potentials(W, prof, units)
    z4 = np.linspace(-4.0, 4.0, 801) / abs(lam)
    shift = pair.V2(z4) - pair.V1(z4)
    checks.append(_check("exp.susy_uniform_shift", np.max(np.abs(shift - delta)), 1e-10,
                         "V2 - V1 equals hbar omega on [-4, 4]"))
    si = shape_invariance_residual(pair, pair.V1, z4)
    checks.append(_check("exp.shape_invariance_R", abs((si.R if si.R is not None else math.inf) - delta),
                         1e-10, "R(a1) with a2 = a1", R=si.mean))
    dev = np.max(np.abs(pair.V1(z4) - (closed(z4) - 0.5 * delta)) / np.maximum(1.0, np.abs(closed(z4))))
    checks.append(_check("exp.partner_V1_matches_closed_form", dev, 1e-12, "V1 = V_BDD - hbar omega / 2"))

    n_lev = k
    alg = np.array([susy_spectrum([delta] * n_lev, n) + 0.5 * delta for n in range(n_lev)])
    exact = np.array([ho_spectrum(ho, n) for n in range(n_lev)])
    checks.append(_check("exp.susy_spectrum_closed_form", np.max(np.abs(alg - exact)),
                         8 * np.finfo(float).eps * max(1.0, float(exact[-1])),
                         "sum of remainders plus offset against (n+1/2) hbar omega"))
    span = math.sqrt((2 * n_lev + 1) * delta / B) + 12.0 / math.sqrt(ho.eta)
    gz = Grid.from_spacing(-span, span, 0.01 / math.sqrt(ho.eta))
    fd, _, _ = richardson(lambda gr: solve_constant_mass(ho_potential(ho), gr, n_lev, units, vectors=False), gz, n_lev)
    checks.append(_check("exp.susy_spectrum_vs_fd_oracle", np.max(np.abs(alg - fd)), 1e-5,
                         "constant-mass oscillator B zt^2 on the full line, Richardson-extrapolated"))

    zmin, zmax = -4.0 / abs(lam), 4.0 / abs(lam)
    gr = Grid.from_spacing(zmin, zmax, 0.0025 / abs(lam))
    kap = annihilation_slope(W, prof, zmin, units)
    robin = solve_pdm(pair.V1, prof, gr, 3, units, left=Robin(kap))
    dirichlet = solve_pdm(pair.V1, prof, gr, 1, units, vectors=False)
    checks.append(_check(
        "exp.susy_ground_state_zero", abs(robin.eigenvalues[0]), 1e-5,
        "lowest level of V1 with the annihilation condition A psi = 0 imposed at the left end",
        dirichlet_value=float(dirichlet.eigenvalues[0]), robin_levels=list(map(float, robin.eigenvalues))))

    checks.extend(_wavefunction_checks(ho, prof, units, closed))
    return checks


def _wavefunction_checks(ho, prof, units, veff):
    lam = prof.lam
    cmap = CoordinateMap(prof, units)
    z = np.linspace(-8.0 / abs(lam), 3.0 / abs(lam), 22001)
    zt_lo, zt_hi = sorted(float(v) for v in cmap.forward(np.array([z[0], z[-1]])))
    zt = np.linspace(zt_lo, zt_hi, 40001)
    psi = map_wavefunction(ho_wavefunction(ho, 0, zt), zt, cmap, z)
    norm_z = integrate.simpson(psi * psi, x=z)
    norm_zt, _ = integrate.quad(lambda t: ho_wavefunction(ho, 0, t) ** 2, zt_lo, zt_hi, epsabs=1e-14, epsrel=1e-13)
    out = [_check("exp.wavefunction_norm_preserved", abs(norm_z - norm_zt), 1e-6,
                  "int psi^2 dz over the z-window against int psit^2 dzt over its image",
                  norm_z=float(norm_z), norm_zt=float(norm_zt))]
    h = z[1] - z[0]
    mh = prof(z[:-1] + 0.5 * h)
    flux = (psi[1:] - psi[:-1]) / (h * mh)
    H = -0.5 * units.hbar**2 * (flux[1:] - flux[:-1]) / h + veff(z[1:-1]) * psi[1:-1]
    E = ho_spectrum(ho, 0)
    res = np.linalg.norm(H - E * psi[1:-1]) / np.linalg.norm(psi[1:-1])
    out.append(_check("exp.wavefunction_pdm_residual", res, 1e-4,
                      "||(H - E) psi|| / ||psi|| of the mapped ground state on the z-grid"))
    return out


# --------------------------------------------------------------------------- rational


def run_rational(A: float = 1.0, lam_bar: float = 1.0, a: float = 2.0, units: UnitSystem = UnitSystem()) -> list:
    checks = []
    z = np.linspace(-6.0, 6.0, 1201) / lam_bar

    # a = 1 reduction
    p1 = PTParameters(A, lam_bar, 1.0, units)
    vpt = pt_potential(p1)
    worst = max(
        float(np.max(np.abs(rational_case_effective_potential(X, p1)(z) - vpt(z))))
        for X in HamiltonianPreset.named()
    )
    checks.append(_check("rat.a1_reduces_to_poschl_teller", worst, 1e-12, "all orderings at a = 1"))
    g = Grid(-20.0 / lam_bar, 20.0 / lam_bar, 8000)
    e0 = solve_constant_mass(vpt, g, 1, units, vectors=False).eigenvalues[0]
    checks.append(_check("rat.a1_fd_ground_state", abs(e0 - pt_spectrum(p1, 0)), 1e-5,
                         f"constant-mass finite differences, n={g.n}", value=float(e0)))

    # a != 1: isospectrality and the squared spectrum
    p = PTParameters(A, lam_bar, a, units)
    nb = p.n_max + 1
    exact = np.array([pt_spectrum(p, n) for n in range(nb)])
    spectra, extrap = {}, {}
    for X in HamiltonianPreset.named():
        bare = rational_case_effective_potential(X, p)
        veff = effective_potential(bare, p.mass, ordering_params_for(X), units)
        gx = auto_domain(veff, p.mass, nb, units)
        ext, coarse, _ = richardson(lambda gr, v=veff: solve_pdm(v, p.mass, gr, nb, units, vectors=False), gx, nb)
        spectra[X.short], extrap[X.short] = coarse, ext
    checks.append(_check("rat.isospectral_pairwise", _pairwise(spectra), 1e-6,
                         f"all {nb} bound levels, a={a}",
                         eigenvalues={x: list(map(float, e)) for x, e in spectra.items()}))
    worst = max(float(np.max(np.abs(e - exact))) for e in extrap.values())
    checks.append(_check("rat.matches_squared_spectrum", worst, 1e-5,
                         "Richardson-extrapolated levels against -(A - n step)^2",
                         expected=list(map(float, exact))))
    if nb > 1:
        unsquared = -(A - p.step)
        gap = abs(extrap["BDD"][1] - unsquared)
        checks.append(Check("rat.unsquared_formula_rejected", bool(gap > 1e-2), 1e-2, float(gap),
                            "level 1 lies far (more than the tolerance) from the unsquared form -(A - step)",
                            True, {"unsquared": unsquared, "computed": float(extrap["BDD"][1])}))

    # ordering differences: Z-K against L-K
    zk = modification_term(p.mass, ordering_params_for("ZK"), z, units)
    lk = modification_term(p.mass, ordering_params_for("LK"), z, units)
    checks.append(_check("rat.zk_lk_modification_terms_equal", np.max(np.abs(zk - lk)), 1e-12,
                         "pointwise U_ZK - U_LK = hbar^2 (m m'' - m'^2) / (8 m^3) for the rational-squared "
                         "mass; it vanishes only where (ln m)'' = 0, as for the exponential mass",
                         required=False))

    # SUSY and the choice of inverse function inside the superpotential
    target = rational_case_effective_potential("BDD", p)
    pair = partner_potentials(rational_superpotential(p, "arctan"), p.mass, units)
    dev_atan = float(np.max(np.abs(pair.V1(z) - (target(z) - exact[0]))))
    zi = np.linspace(-0.99, 0.99, 199) / lam_bar
    pair_h = partner_potentials(rational_superpotential(p, "artanh"), p.mass, units)
    dev_atanh = float(np.max(np.abs(pair_h.V1(zi) - (target(zi) - exact[0]))))
    checks.append(_check("rat.susy_V1_arctan", dev_atan, 1e-6,
                         "V1 from the arctan superpotential equals V_BDD - E_0"))
    checks.append(_check("rat.susy_V1_artanh", dev_atanh, 1e-6,
                         "same identity with artanh in place of arctan (|q| < 1 only)", required=False))

    # shape invariance along A -> A - step, constant and variable mass
    A2 = A - p.step
    if A2 > 0:
        for aa, label in ((1.0, "a1"), (a, "a")):
            pa = PTParameters(A, lam_bar, aa, units)
            pb = PTParameters(A2, lam_bar, aa, units)
            Wa = pt_superpotential(pa) if aa == 1.0 else rational_superpotential(pa)
            Wb = pt_superpotential(pb) if aa == 1.0 else rational_superpotential(pb)
            si = shape_invariance_residual(partner_potentials(Wa, pa.mass, units),
                                           partner_potentials(Wb, pb.mass, units).V1, z)
            R_exact = A * A - A2 * A2
            dev = abs(si.R - R_exact) if si.R is not None else si.max_deviation
            checks.append(_check(f"rat.shape_invariance_{label}", dev, 1e-8,
                                 f"V2(A) - V1(A - step) constant and equal to A^2 - (A - step)^2 at a={aa}"))
        chain = pt_remainders(p)
        alg = np.array([susy_spectrum(chain, n) - A * A for n in range(nb)])
        checks.append(_check("rat.susy_chain_spectrum", np.max(np.abs(alg - exact)), 1e-12,
                             "sum of remainders shifted by -A^2"))
    return checks


# --------------------------------------------------------------------------- band offset


def run_bandoffset(units: UnitSystem = UnitSystem(), Q_B: float = 0.6, lam: float = 0.3,
                   m_e: float = 1.0, m_h: float = 4.0, EG: float = 15.0, deltaEg: float = 10.0,
                   width: float = 1.0) -> list:
    checks = []
    grid = Grid(-10.0, 10.0, 1999)
    tmpl = sech2_template(width)
    const = WellModel(Carrier(ConstantMass(m_e), tmpl), Carrier(ConstantMass(m_h), tmpl), EG, deltaEg, grid)
    worst = 0.0
    for A, B in itertools.permutations(HamiltonianPreset.named(), 2):
        r = solve_band_offset(const, A, B, Q_B, units=units)
        worst = max(worst, abs(r.Q_A - Q_B) if r.Q_A is not None else math.inf)
    checks.append(_check("band.constant_mass_Q_equal", worst, 1e-8, "all ordered preset pairs"))

    for coupling in ("effective", "bare"):
        well = WellModel(Carrier(ExponentialMass(m_e, lam), tmpl), Carrier(ExponentialMass(m_h, lam), tmpl),
                         EG, deltaEg, grid, coupling)
        for A in ("GW", "ZK", "LK"):
            r = solve_band_offset(well, A, "BDD", Q_B, units=units)
            dev = abs(r.Q_A - Q_B) if r.Q_A is not None else math.inf
            checks.append(_check(
                f"band.exponential_{coupling}_{A}_vs_BDD", dev, 1e-8,
                f"exponential-mass sech^2 well, lambda={lam}, depth coupled to the {coupling} potential",
                required=False, Q_A=r.Q_A, status=r.status, iterations=r.iterations, g_profile=r.g_profile))
        if coupling == "bare":
            r1 = solve_band_offset(well, "GW", "BDD", Q_B, units=units)
            r2 = solve_band_offset(well, "BDD", "GW", r1.Q_A, units=units)
            checks.append(_check("band.round_trip", abs(r2.Q_A - Q_B), 1e-6,
                                 "BDD -> GW -> BDD recovers Q_B"))
    return checks


def run_suite(cases=("exponential", "rational", "bandoffset"), units: UnitSystem = UnitSystem(), **params) -> Report:
    """Run the selected cases; ``params`` are forwarded by name to each case."""
    runners = {"exponential": run_exponential, "rational": run_rational, "bandoffset": run_bandoffset}
    checks = []
    for case in cases:
        fn = runners[case]
        names = fn.__code__.co_varnames[: fn.__code__.co_argcount]
        kw = {k: v for k, v in params.items() if k in names and v is not None}
        checks.extend(fn(units=units, **kw))
    return Report(checks)
