"""
Command-line front end.

    effmass <command> [--config FILE] [options] [--output DIR]

Commands: potential, transform, spectrum, susy, verify, bandoffset.
A JSON config supplies any option by its long name (dashes or underscores);
flags given on the command line override it. Every run writes the merged
configuration next to its results so it can be replayed with --config.

Exit status: 0 success, 1 invalid input, 2 numerical failure, 3 a required
verification check failed.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys

import numpy as np

from .analytic import (
    HOParameters,
    PTParameters,
    exp_case_effective_potential,
    ho_spectrum,
    pt_spectrum,
    rational_case_effective_potential,
)
from .bandoffset import Carrier, WellModel, sech2_template, smooth_square_template, solve_band_offset
from .effpot import effective_potential
from .exceptions import ConfigurationError, EffMassError, NumericalError
from .model import (
    ConstantMass,
    ExponentialMass,
    HamiltonianPreset,
    RationalSquaredMass,
    UnitSystem,
    ordering_params_for,
)
from .solver import Grid, Robin, auto_domain, solve_pdm
from .susy import (
    annihilation_slope,
    exp_superpotential,
    partner_potentials,
    pt_remainders,
    rational_superpotential,
    shape_invariance_residual,
    susy_spectrum,
)
from .transform import CoordinateMap, mass_term_potential, nu_factor
from .verify import run_suite

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_VERIFY = 0, 1, 2, 3

_UNITS = {
    "hbar": (float, 1.0, None, "reduced Planck constant"),
    "m0": (float, 1.0, None, "reference mass"),
}
_EXP = {
    "lambda": (float, 1.0, None, "exponential-mass rate"),
    "B": (float, 1.0, None, "oscillator stiffness, V = B zt^2"),
}
_RAT = {
    "A": (float, 1.0, None, "Poschl-Teller depth parameter"),
    "lambdaBar": (float, 1.0, None, "inverse width of the rational mass"),
    "a": (float, 2.0, None, "rational-mass parameter"),
}
_CASE = {"case": (str, "exponential", ("exponential", "rational"), "application case")}
_SAMPLES = {
    "zmin": (float, -4.0, None, "first sample"),
    "zmax": (float, 4.0, None, "last sample"),
    "points": (int, 801, None, "number of samples"),
}

SCHEMA = {
    "potential": {
        **_UNITS, **_CASE, **_EXP, **_RAT, **_SAMPLES,
        "preset": (str, "all", None, "ordering preset or 'all'"),
    },
    "transform": {
        **_UNITS, **_SAMPLES,
        "profile": (str, "exponential", ("constant", "exponential", "rational"), "mass profile"),
        "lambda": (float, 1.0, None, "exponential-mass rate"),
        "lambdaBar": (float, 1.0, None, "inverse width of the rational mass"),
        "a": (float, 2.0, None, "rational-mass parameter"),
        "quadrature": (bool, False, None, "evaluate the map by adaptive quadrature"),
    },
    "spectrum": {
        **_UNITS, **_CASE, **_EXP, **_RAT,
        "preset": (str, "BDD", None, "ordering preset"),
        "k": (int, 4, None, "number of states"),
        "zmin": (float, None, None, "box start (automatic when omitted)"),
        "zmax": (float, None, None, "box end (automatic when omitted)"),
        "n": (int, None, None, "interior points (automatic when omitted)"),
        "wavefunctions": (bool, False, None, "also write eigenfunctions as CSV"),
    },
    "susy": {
        **_UNITS, **_CASE, **_EXP, **_RAT, **_SAMPLES,
        "variant": (str, "arctan", ("arctan", "artanh"), "inverse function in the rational superpotential"),
        "levels": (int, 4, None, "levels of the algebraic spectrum"),
    },
    "verify": {
        **_UNITS,
        "case": (str, "all", ("all", "exponential", "rational", "bandoffset"), "which suite"),
        **_EXP, **_RAT,
        "k": (int, 4, None, "levels in the exponential isospectrality check"),
    },
    "bandoffset": {
        **_UNITS,
        "profile": (str, "exponential", ("constant", "exponential"), "mass profile of both carriers"),
        "lambda": (float, 0.3, None, "exponential-mass rate"),
        "me": (float, 1.0, None, "electron mass scale"),
        "mh": (float, 4.0, None, "hole mass scale"),
        "EG": (float, 15.0, None, "band gap"),
        "deltaEg": (float, 10.0, None, "band-gap difference"),
        "template": (str, "sech2", ("sech2", "smooth_square"), "well shape"),
        "width": (float, 1.0, None, "well width"),
        "smoothness": (float, 0.1, None, "edge length of the smooth square well"),
        "coupling": (str, "bare", ("bare", "effective"), "how the depth enters"),
        "presetA": (str, "GW", None, "ordering to solve for"),
        "presetB": (str, "BDD", None, "reference ordering"),
        "QB": (float, 0.6, None, "reference band-offset ratio"),
        "ne": (int, 0, None, "electron level"),
        "nh": (int, 0, None, "hole level"),
        "zmin": (float, -10.0, None, "box start"),
        "zmax": (float, 10.0, None, "box end"),
        "n": (int, 1999, None, "interior points"),
    },
}


# --------------------------------------------------------------------------- formatting


def fmt(x) -> str:
    """Fixed 17-significant-digit text; round-trips every double exactly."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _json_text(obj, indent=0) -> str:
    pad, inner = " " * indent, " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_json_text(v, indent + 2)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.floating, np.integer)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(_json_text(v) for v in seq) + "]"
        return "[\n" + ",\n".join(inner + _json_text(v, indent + 2) for v in seq) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return fmt(x) if math.isfinite(x) else json.dumps(fmt(x))
    return json.dumps(str(obj))


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_json_text(obj) + "\n")


def write_csv(path, header, columns):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([fmt(v) for v in row])


# --------------------------------------------------------------------------- configuration


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def load_config(path: str, command: str) -> dict:
    """Read a JSON config and validate its keys against ``command``.

    Raises
    ------
    ConfigurationError
        With the file name and line number of the offending entry.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"{path}: cannot read config ({exc.strerror})") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{path}:1: top level must be an object")
    schema = SCHEMA[command]
    out = {}
    for key, val in raw.items():
        line = _line_of(text, key)
        where = f"{path}:{line}" if line else path
        if key == "command":
            if val != command:
                raise ConfigurationError(f"{where}: config is for command {val!r}, not {command!r}")
            continue
        name = key.replace("-", "_")
        if name not in schema:
            raise ConfigurationError(f"{where}: unknown key {key!r} for command {command!r}")
        out[name] = _coerce(name, val, schema[name], where)
    return out


def _coerce(name, val, spec, where):
    typ, _, choices, _ = spec
    if val is None:
        return None
    try:
        if typ is bool:
            if not isinstance(val, bool):
                raise TypeError
            v = val
        elif typ is int:
            if isinstance(val, bool) or not float(val).is_integer():
                raise TypeError
            v = int(val)
        elif typ is float:
            if isinstance(val, bool):
                raise TypeError
            v = float(val)
        else:
            if not isinstance(val, str):
                raise TypeError
            v = val
    except (TypeError, ValueError):
        raise ConfigurationError(f"{where}: {name!r} must be of type {typ.__name__}, got {val!r}") from None
    if choices and v not in choices:
        raise ConfigurationError(f"{where}: {name!r} must be one of {list(choices)}, got {v!r}")
    return v


def _build_parser():
    parser = argparse.ArgumentParser(prog="effmass", description="Position-dependent effective-mass toolkit",
                                     allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, schema in SCHEMA.items():
        sp = sub.add_parser(cmd, allow_abbrev=False)
        sp.add_argument("--config", help="JSON configuration file")
        sp.add_argument("--output", "-o", default=".", help="output directory")
        for name, (typ, default, choices, help_) in schema.items():
            flag = "--" + name
            if typ is bool:
                sp.add_argument(flag, dest=name, action=argparse.BooleanOptionalAction, default=None,
                                help=f"{help_} (default {default})")
            else:
                sp.add_argument(flag, dest=name, type=typ, choices=choices, default=None,
                                help=f"{help_} (default {default})")
    return parser


def resolve(args) -> dict:
    schema = SCHEMA[args.command]
    cfg = {k: spec[1] for k, spec in schema.items()}
    if args.config:
        cfg.update(load_config(args.config, args.command))
    for k in schema:
        v = getattr(args, k)
        if v is not None:
            cfg[k] = v
    return cfg


def _units(cfg):
    return UnitSystem(cfg["hbar"], cfg["m0"])


def _presets(name):
    if str(name).lower() == "all":
        return HamiltonianPreset.named()
    return [HamiltonianPreset.parse(name)]


def _samples(cfg):
    if cfg["points"] < 2:
        raise ConfigurationError("points must be at least 2")
    if not cfg["zmax"] > cfg["zmin"]:
        raise ConfigurationError("zmax must exceed zmin")
    return np.linspace(cfg["zmin"], cfg["zmax"], cfg["points"])


def _case_setup(cfg, preset):
    """(bare potential, profile) for one preset of the selected case."""
    units = _units(cfg)
    if cfg["case"] == "exponential":
        lam = cfg["lambda"]
        if lam == 0:
            raise ConfigurationError("lambda must be nonzero for the exponential case")
        HOParameters(cfg["B"], units)
        V0 = 4.0 * cfg["B"] / lam**2
        return exp_case_effective_potential(preset, V0, lam, units), ExponentialMass(units.m0, lam)
    p = PTParameters(cfg["A"], cfg["lambdaBar"], cfg["a"], units)
    return rational_case_effective_potential(preset, p), p.mass


# --------------------------------------------------------------------------- commands


def cmd_potential(cfg, out):
    z = _samples(cfg)
    header, cols = ["z"], [z]
    for X in _presets(cfg["preset"]):
        bare, _ = _case_setup(cfg, X)
        header.append(f"V_{X.short}")
        cols.append(bare.sample(z))
    path = os.path.join(out, "potential.csv")
    write_csv(path, header, cols)
    return EXIT_OK, [path]


def _profile_from(cfg):
    units = _units(cfg)
    if cfg["profile"] == "constant":
        return ConstantMass(units.m0)
    if cfg["profile"] == "exponential":
        return ExponentialMass(units.m0, cfg["lambda"])
    return RationalSquaredMass(units.m0, cfg["a"], cfg["lambdaBar"])


def cmd_transform(cfg, out):
    units = _units(cfg)
    z = _samples(cfg)
    cmap = CoordinateMap(_profile_from(cfg), units)
    zt = cmap.forward_quadrature(z) if cfg["quadrature"] else cmap.forward(z)
    path = os.path.join(out, "transform.csv")
    write_csv(path, ["z", "z_tilde", "nu", "V_m"], [z, zt, nu_factor(cmap, z), mass_term_potential(cmap.profile, z, units)])
    return EXIT_OK, [path]


def cmd_spectrum(cfg, out):
    units = _units(cfg)
    (X,) = _presets(cfg["preset"])
    bare, prof = _case_setup(cfg, X)
    veff = effective_potential(bare, prof, ordering_params_for(X), units)
    k = cfg["k"]
    if k < 1:
        raise ConfigurationError("k must be at least 1")
    manual = [cfg[key] is not None for key in ("zmin", "zmax", "n")]
    if any(manual) and not all(manual):
        raise ConfigurationError("zmin, zmax and n must be given together (or all omitted)")
    grid = Grid(cfg["zmin"], cfg["zmax"], cfg["n"]) if all(manual) else auto_domain(veff, prof, k, units)
    res = solve_pdm(veff, prof, grid, k, units)
    report = {"preset": X.value, "case": cfg["case"], **res.to_dict()}
    if cfg["case"] == "exponential":
        ho = HOParameters(cfg["B"], units)
        report["reference_full_line"] = [ho_spectrum(ho, n) for n in range(k)]
    else:
        p = PTParameters(cfg["A"], cfg["lambdaBar"], cfg["a"], units)
        report["reference"] = [pt_spectrum(p, n) for n in range(min(k, p.n_max + 1))]
    files = [os.path.join(out, "spectrum.json")]
    write_json(files[0], report)
    if cfg["wavefunctions"]:
        files.append(os.path.join(out, "spectrum_wavefunctions.csv"))
        write_csv(files[1], ["z"] + [f"psi_{i}" for i in range(k)], [res.nodes, *res.eigenfunctions])
    return EXIT_OK, files


def cmd_susy(cfg, out):
    units = _units(cfg)
    z = _samples(cfg)
    nlev = cfg["levels"]
    if cfg["case"] == "exponential":
        ho = HOParameters(cfg["B"], units)
        lam = cfg["lambda"]
        prof = ExponentialMass(units.m0, lam)
        W = exp_superpotential(lam, ho.delta, units)
        pair = partner_potentials(W, prof, units)
        si = shape_invariance_residual(pair, pair.V1, z)
        R = [ho.delta] * nlev
        offset = 0.5 * ho.delta
        reference = [ho_spectrum(ho, n) for n in range(nlev)]
        g = Grid.from_spacing(-4.0 / abs(lam), 4.0 / abs(lam), 0.0025 / abs(lam))
        fd = solve_pdm(pair.V1, prof, g, 1, units, left=Robin(annihilation_slope(W, prof, g.zmin, units)),
                       vectors=False)
        ground = {"value": float(fd.eigenvalues[0]), "grid": fd.to_dict()["grid"], "left_condition": "annihilation"}
    else:
        p = PTParameters(cfg["A"], cfg["lambdaBar"], cfg["a"], units)
        W = rational_superpotential(p, cfg["variant"])
        pair = partner_potentials(W, p.mass, units)
        A2 = p.A - p.step
        if A2 > 0:
            V1b = partner_potentials(rational_superpotential(PTParameters(A2, p.lam_bar, p.a, units), cfg["variant"]),
                                     p.mass, units).V1
            si = shape_invariance_residual(pair, V1b, z)
        else:
            si = None
        R = pt_remainders(p)
        nlev = min(nlev, len(R) + 1)
        offset = -p.A**2
        reference = [pt_spectrum(p, n) for n in range(nlev)]
        gz = auto_domain(pair.V1, p.mass, 1, units)
        ground = {"value": float(solve_pdm(pair.V1, p.mass, gz, 1, units, vectors=False).eigenvalues[0]),
                  "grid": {"zmin": gz.zmin, "zmax": gz.zmax, "n": gz.n, "h": gz.h}, "left_condition": "dirichlet"}
    spectrum = [susy_spectrum(R, n) + offset for n in range(nlev)]
    report = {
        "case": cfg["case"],
        "shape_invariant": None if si is None else si.invariant,
        "R": None if si is None else si.R,
        "max_deviation": None if si is None else si.max_deviation,
        "remainders": list(R),
        "ground_state_offset": offset,
        "spectrum": spectrum,
        "reference": reference,
        "V1_ground_state_fd": ground,
    }
    files = [os.path.join(out, "susy.json"), os.path.join(out, "susy_potentials.csv")]
    write_json(files[0], report)
    write_csv(files[1], ["z", "W", "V1", "V2"], [z, W(z), pair.V1(z), pair.V2(z)])
    return EXIT_OK, files


def cmd_verify(cfg, out):
    cases = ("exponential", "rational", "bandoffset") if cfg["case"] == "all" else (cfg["case"],)
    report = run_suite(cases, _units(cfg), lam=cfg["lambda"], B=cfg["B"], k=cfg["k"], A=cfg["A"],
                       lam_bar=cfg["lambdaBar"], a=cfg["a"])
    path = os.path.join(out, "verify.json")
    write_json(path, report.to_dict())
    for c in report.checks:
        tag = "PASS" if c.passed else ("FAIL" if c.required else "NOTE")
        print(f"{tag} {c.name}: deviation {c.deviation:.3e} (tolerance {c.tolerance:.1e})")
    return (EXIT_OK if report.passed else EXIT_VERIFY), [path]


def cmd_bandoffset(cfg, out):
    units = _units(cfg)
    if cfg["template"] == "sech2":
        tmpl = sech2_template(cfg["width"])
    else:
        tmpl = smooth_square_template(cfg["width"], cfg["smoothness"])
    if cfg["profile"] == "constant":
        pe, ph = ConstantMass(cfg["me"]), ConstantMass(cfg["mh"])
    else:
        pe, ph = ExponentialMass(cfg["me"], cfg["lambda"]), ExponentialMass(cfg["mh"], cfg["lambda"])
    well = WellModel(Carrier(pe, tmpl), Carrier(ph, tmpl), cfg["EG"], cfg["deltaEg"],
                     Grid(cfg["zmin"], cfg["zmax"], cfg["n"]), cfg["coupling"])
    res = solve_band_offset(well, cfg["presetA"], cfg["presetB"], cfg["QB"], (cfg["ne"], cfg["nh"]), units)
    path = os.path.join(out, "bandoffset.json")
    write_json(path, {"presetA": HamiltonianPreset.parse(cfg["presetA"]).value,
                      "presetB": HamiltonianPreset.parse(cfg["presetB"]).value,
                      "Q_B": cfg["QB"], "coupling": cfg["coupling"], **res.to_dict()})
    return EXIT_OK, [path]


COMMANDS = {
    "potential": cmd_potential,
    "transform": cmd_transform,
    "spectrum": cmd_spectrum,
    "susy": cmd_susy,
    "verify": cmd_verify,
    "bandoffset": cmd_bandoffset,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        os.makedirs(args.output, exist_ok=True)
        echo = os.path.join(args.output, f"{args.command}_config.json")
        write_json(echo, {"command": args.command, **cfg})
        status, files = COMMANDS[args.command](cfg, args.output)
    except NumericalError as exc:
        print(f"effmass {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (EffMassError, ValueError) as exc:
        print(f"effmass {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    for f in files:
        print(f)
    return status


if __name__ == "__main__":
    sys.exit(main())
