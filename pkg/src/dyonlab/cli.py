"""Command-line front end: ``dyonlab <command> [flags] [--config FILE] [--report FILE] [--csv FILE]``.

Exit codes: 0 success, 1 a check failed (or a run was invalid), 2 usage,
configuration or I/O error.
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from typing import Callable, Optional

import numpy as np

from . import __version__, checks, dynamics, gauge, interferometry, phases, scattering, units, vacua
from .config import COMMANDS, ConfigError, RunConfig, build_run_config, load_config_file
from .errors import DomainError, DyonlabError
from .report import RunReport, emit_report, write_csv

ALGEBRA_TOL = phases.ALGEBRA_TOL
LOOP_TOL = 1e-8
TWO_PATH_TOL = 1e-2
FRINGE_TOL = 0.02
ORACLE_TOL = 1e-3
VACUUM_TOL = 1e-12
NORM_TOL = 1e-10

# (flag, params key, type, help); type "flag" is a store_true switch
_CHARGE_FLAGS = [
    ("--alpha", "alpha", float, "fine-structure constant"),
    ("--nq", "n_q", int, "electric charge number"),
    ("--ng", "n_g", int, "magnetic charge number"),
    ("--theta", "theta", float, "vacuum angle (rad)"),
    ("--q", "q", float, "raw electric charge"),
    ("--g", "g", float, "raw magnetic charge"),
]
_FLUX_FLAGS = [
    ("--flux-quanta", "flux_quanta", "flag", "one magnetic and one electric flux quantum"),
    ("--n-phi-e", "n_phi_e", int, "electric flux number"),
    ("--n-phi-m", "n_phi_m", int, "magnetic flux number"),
    ("--phi-m", "phi_m", float, "raw magnetic flux"),
    ("--phi-e", "phi_e", float, "raw electric flux"),
    ("--radius-eps", "radius_eps", float, "tube exclusion radius"),
]
FLAGS: dict[str, list] = {
    "phase": _CHARGE_FLAGS + _FLUX_FLAGS + [("--n", "n", int, "winding number")],
    "charges": _CHARGE_FLAGS + [
        ("--partner-nq", "partner_n_q", int, "second dyon charge number"),
        ("--partner-ng", "partner_n_g", int, "second dyon magnetic number"),
        ("--xi", "xi", float, "duality rotation angle")],
    "flux": [f for f in _CHARGE_FLAGS if f[1] in ("alpha", "theta")] + _FLUX_FLAGS[1:3] + _FLUX_FLAGS[5:],
    "loop-integral": _CHARGE_FLAGS + _FLUX_FLAGS + [
        ("--field", "field", str, "beta or dyon"),
        ("--path", "path_csv", str, "CSV path with columns x,y"),
        ("--radius", "radius", float, "circle radius"),
        ("--turns", "turns", int, "signed circle turns"),
        ("--quadrature-step", "quadrature_step", float, "midpoint step")],
    "vacuum": [("--theta", "theta", float, "vacuum angle (rad)"),
               ("--M", "M", int, "truncation"),
               ("--normalize", "normalize", "flag", "scale by 1/sqrt(2M+1)"),
               ("--shifts", "shifts", int, "winding shifts to apply")],
    "evolve": [("--grid", "grid", int, "cells per side"), ("--dx", "dx", float, "spacing"),
               ("--mass", "mass", float, "mass"), ("--dt", "dt", float, "time step"),
               ("--steps", "steps", int, "steps"), ("--absorb-margin", "absorb_margin", int, "absorber cells"),
               ("--alpha-eff", "alpha_eff", float, "tube flux"), ("--width", "width", float, "packet width")],
    "two-path": [("--alpha-eff", "alpha_eff", float, "tube flux"),
                 ("--theta", "theta", float, "vacuum case angle"),
                 ("--resolution", "resolution", str, "reference or small")],
    "fringe": [("--L", "L", float, "screen distance"), ("--d", "d", float, "slit separation"),
               ("--w", "w", float, "slit width"), ("--wavelength", "wavelength", float, "wavelength"),
               ("--delta0-bar", "delta0_bar", float, "geometric phase offset / 2 pi"),
               ("--theta", "theta", float, "vacuum angle (rad)")],
    "scatter": [("--theta", "theta", float, "vacuum angle (rad)"),
                ("--alpha-eff", "alpha_eff", float, "flux parameter"),
                ("--k", "k", float, "wave number"), ("--phi", "phi", float, "scattering angle"),
                ("--m-max", "m_max", int, "partial-wave cutoff"),
                ("--regularization", "regularization", str, "abel or cesaro"),
                ("--no-oracle", "oracle", "noflag", "skip the partial-wave sum")],
    "check": [("--suite", "suite", str, "suite name or all"),
              ("--skip-two-path", "two_path", "noflag", "skip the small-grid two-path runs")],
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dyonlab", description="Dyon topological phases and their numerical oracles.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--report", help="write the JSON report here (default: stdout)")
        p.add_argument("--csv", help="write array output here")
        p.add_argument("--seed", type=int, help="seed for randomized sampling")
        p.add_argument("--timing", action="store_true", help="include wall time in the report")
        for flag, key, kind, text in FLAGS[name]:
            if kind == "flag":
                p.add_argument(flag, dest=key, action="store_const", const=True, default=None, help=text)
            elif kind == "noflag":
                p.add_argument(flag, dest=key, action="store_const", const=False, default=None, help=text)
            else:
                p.add_argument(flag, dest=key, type=kind, default=None, help=text)
    return parser


# ---------------------------------------------------------------- parameter helpers

def _consts(p: dict) -> units.PhysicalConstants:
    return units.make_constants(p.get("alpha", units.ALPHA_CODATA))


def _charge(p: dict, c) -> units.DyonCharge:
    if "q" in p or "g" in p:
        return units.DyonCharge(q=p.get("q", 0.0), g=p.get("g", 0.0))
    return units.witten_charges(p.get("n_q", 1), p.get("n_g", 0), p.get("theta", 0.0), c)


def _flux(p: dict, c) -> units.FluxTube:
    eps = p.get("radius_eps", 1.0)
    if p.get("flux_quanta"):
        return units.elementary_flux(c, eps)
    if "n_phi_e" in p or "n_phi_m" in p:
        return units.flux_from_integers(p.get("n_phi_e", 0), p.get("n_phi_m", 0), p.get("theta", 0.0), eps, c)
    return units.FluxTube(phi_m=p.get("phi_m", 0.0), phi_e=p.get("phi_e", 0.0), radius_eps=eps)


def _phase_dict(r: phases.PhaseResult) -> dict:
    return {"value": r.value, "reduced": r.reduced, "winding_n": r.winding_n}


# ---------------------------------------------------------------- commands

def cmd_phase(cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    c = _consts(p)
    d, f, n = _charge(p, c), _flux(p, c), p.get("n", 1)
    delta = phases.dyon_phase(d, f, n)
    rep.add("delta_D", _phase_dict(delta), ALGEBRA_TOL)
    rep.add("effective_alpha", phases.effective_alpha(d, f), ALGEBRA_TOL)
    if "q" not in p and "g" not in p:
        nq, ng, th = p.get("n_q", 1), p.get("n_g", 0), p.get("theta", 0.0)
        std, part = phases.dyon_phase_split(nq, ng, th, f, n, c)
        rep.add("standard_part", _phase_dict(std), ALGEBRA_TOL)
        rep.add("theta_part", _phase_dict(part), ALGEBRA_TOL)
        recombined = std.value + part.value
        rep.add("split_recombination", recombined, ALGEBRA_TOL, expected=delta.value,
                error=abs(recombined - delta.value) / max(1.0, abs(delta.value)))
        if "n_phi_e" in p or "n_phi_m" in p:
            ph, N = phases.flux_rule_phase(nq, ng, p.get("n_phi_e", 0), p.get("n_phi_m", 0), th, n, c)
            rep.add("flux_rule_N", N)
            rep.add("flux_rule_phase", _phase_dict(ph), phases.INTEGER_TOL, expected=2 * math.pi * N,
                    error=abs(ph.value - 2 * math.pi * N) / max(1.0, abs(2 * math.pi * N)))


def cmd_charges(cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    c = _consts(p)
    d = _charge(p, c)
    rep.add("constants", {"alpha": c.alpha, "e": c.e, "g0": c.g0, "phi_m0": c.phi_m0, "phi_e0": c.phi_e0})
    rep.add("charge", {"q": d.q, "g": d.g}, ALGEBRA_TOL)
    if "partner_n_q" in p or "partner_n_g" in p:
        other = units.witten_charges(p.get("partner_n_q", 0), p.get("partner_n_g", 0), p.get("theta", 0.0), c)
        rep.add("partner", {"q": other.q, "g": other.g}, ALGEBRA_TOL)
        pairing = units.sz_pairing(d, other)
        N = units.sz_check(d, other)
        rep.add("sz_pairing", pairing, units.SZ_TOL)
        rep.add("sz_N", N, units.SZ_TOL, expected="integer", error=0.0 if N is not None else math.inf)
        hp, hN = phases.heuristic_string_phase(d, other)
        rep.add("heuristic_string_phase", {**_phase_dict(hp), "N": hN, "heuristic": True}, units.SZ_TOL)
    if "xi" in p:
        rot, _ = units.duality_rotate(d, units.FluxTube(0.0, 0.0), p["xi"])
        rep.add("rotated_charge", {"q": rot.q, "g": rot.g}, ALGEBRA_TOL)


def cmd_flux(cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    c = _consts(p)
    f = units.flux_from_integers(p.get("n_phi_e", 0), p.get("n_phi_m", 1), p.get("theta", 0.0),
                                 p.get("radius_eps", 1.0), c)
    rep.add("flux", {"phi_m": f.phi_m, "phi_e": f.phi_e, "radius_eps": f.radius_eps}, ALGEBRA_TOL)
    rep.add("quanta", {"phi_m0": c.phi_m0, "phi_e0": c.phi_e0}, ALGEBRA_TOL)


def cmd_loop_integral(cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    c = _consts(p)
    if "path_csv" in p:
        path = gauge.read_path_csv(p["path_csv"])
    else:
        turns = p.get("turns", 1)
        center = tuple(p.get("center", (0.0, 0.0)))
        path = gauge.PlanePath.circle(p.get("radius", 2.0), turns, center)
    winding = gauge.winding_number(path)
    if p.get("field", "beta") == "beta":
        theta = p.get("theta", 0.0)
        field = gauge.beta_gradient(theta, p.get("radius_eps", 1e-12))
        expected = winding * theta
    else:
        d, f = _charge(p, c), _flux(p, c)
        field = gauge.conjugate_momentum_field(d, f)
        expected = winding * (d.q * f.phi_m - d.g * f.phi_e)
    value = gauge.line_integral(field, path, p.get("quadrature_step"))
    rep.add("winding_number", winding)
    rep.add("loop_integral", value, LOOP_TOL, "oracle", expected, abs(value - expected))


def cmd_vacuum(cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    theta, M = p.get("theta", 0.0), p.get("M", 10)
    vac = vacua.build_theta_vacuum(theta, M, p.get("normalize", False))
    state = vac.state
    for _ in range(p.get("shifts", 0)):
        state = vacua.winding_shift(state)
    rep.add("norm2", state.norm2(), ALGEBRA_TOL)
    if M >= 2:
        r = vacua.eigenvalue_residual(vac)
        rep.add("eigenvalue_residual", r, VACUUM_TOL, expected=0.0, error=r)
    if state.boundary_loss:
        rep.add("boundary_loss", [[v.real, v.imag] for v in state.boundary_loss])
    rep.data["state"] = state.to_records()
    if cfg.csv:
        write_csv(cfg.csv, ["n", "re", "im"], state.to_records())


def cmd_evolve(cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    n = p.get("grid", 128)
    grid = dynamics.Grid2D(n, n, p.get("dx", 1.0), (0.0, 0.0), p.get("radius_eps", 1.0))
    c = units.make_constants()
    alpha = p.get("alpha_eff", 0.0)
    links = dynamics.build_link_phases(grid, units.DyonCharge(c.e, 0.0), units.FluxTube(alpha * c.phi_m0, 0.0))
    off, tube = dynamics.check_plaquettes(grid, links, alpha)
    rep.add("plaquette_curl_free", off, NORM_TOL, error=off)
    rep.add("plaquette_tube_flux", tube, NORM_TOL, error=tube)
    econf = dynamics.EvolveConfig(mass=p.get("mass", 1.0), dt=p.get("dt", 0.1), steps=p.get("steps", 100),
                                  absorb_margin=p.get("absorb_margin", 0), links=links)
    center = p.get("center", (-0.25 * n * grid.dx, 0.0))
    packet = dynamics.gaussian_packet(grid, center, p.get("width", 8.0) * grid.dx, p.get("k", (0.0, 0.0)))
    out = dynamics.evolve(packet, econf)
    drift = abs(out.norm2() - packet.norm2()) / max(1, econf.steps)
    rep.add("norm", out.norm2())
    if econf.absorb_margin == 0:
        rep.add("norm_drift_per_step", drift, NORM_TOL, error=drift)
    rep.add("moments", out.moments())
    if cfg.csv:
        X, Y = grid.mesh()
        write_csv(cfg.csv, ["x", "y", "re", "im"],
                  zip(X.ravel(), Y.ravel(), out.psi.real.ravel(), out.psi.imag.ravel()))


def cmd_two_path(cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    c = units.make_constants()
    if "theta" in p:
        d, f = units.witten_charges(1, 1, p["theta"], c), units.elementary_flux(c)
    else:
        d, f = units.DyonCharge(c.e, 0.0), units.FluxTube(p.get("alpha_eff", 0.5) * c.phi_m0, 0.0)
    if p.get("resolution", "reference") == "reference":
        setup = (interferometry.REFERENCE_GRID, interferometry.REFERENCE_CONFIG, interferometry.PacketGeometry())
    else:
        setup = (interferometry.SMALL_GRID, interferometry.SMALL_CONFIG, interferometry.SMALL_GEOMETRY)
    res = interferometry.two_path_phase(setup[0], d, f, setup[1], setup[2])
    rep.add("alpha_eff", res.alpha_eff)
    rep.add("measured_phase", res.measured_phase, TWO_PATH_TOL, "oracle", res.expected_phase, res.error)
    rep.add("fringe_phase", res.fringe_phase, TWO_PATH_TOL, "oracle", res.expected_phase, res.fringe_error)
    rep.add("zone_probability", res.zone_probability, interferometry.ZONE_PROBABILITY_LIMIT,
            error=res.zone_probability)
    if cfg.csv:
        write_csv(cfg.csv, ["x", "intensity"], zip(res.x, res.intensity))


def cmd_fringe(cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    geom = interferometry.SlitGeometry(p.get("L", 1000.0), p.get("d", 10.0), p.get("w", 1.0),
                                       p.get("wavelength", 1.0), p.get("delta0_bar", 0.0))
    res = interferometry.fringe_shift(geom, p.get("theta", 0.0), p.get("periods", 2),
                                      p.get("points_per_period", 128))
    rep.add("fringe_period", res.period)
    rep.add("delta_x", res.delta_x, FRINGE_TOL * res.period, "oracle", res.predicted,
            abs(res.delta_x - res.predicted))
    if cfg.csv:
        write_csv(cfg.csv, ["x", "intensity"], zip(res.x, res.intensity))


def cmd_scatter(cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    if "alpha_eff" in p:
        alpha = p["alpha_eff"]
    else:
        alpha = p.get("theta", math.pi) / (2 * math.pi)
    k = p.get("k", 1.0)
    angles = p["angles"] if "angles" in p else [p.get("phi", math.pi)]
    cutoff = p.get("forward_cutoff", scattering.FORWARD_CUTOFF)
    m_max, reg = p.get("m_max", 2000), p.get("regularization", "abel")
    integer_part, frac = scattering.split_alpha(alpha)
    rep.add("alpha_eff", alpha)
    rep.add("alpha_integer_part", integer_part)
    rows = []
    for phi in angles:
        closed = float(scattering.ab_cross_section(alpha, k, phi, cutoff))
        oracle, rel = math.nan, math.nan
        if p.get("oracle", True):
            oracle = scattering.partial_wave_cross_section(alpha, k, phi, m_max, reg)
            rel = abs(oracle - closed) / closed if closed else abs(oracle)
            rep.add(f"partial_wave[phi={phi:.17g}]", oracle, ORACLE_TOL, "oracle", closed, rel)
        rep.add(f"closed_form[phi={phi:.17g}]", closed, ALGEBRA_TOL)
        rows.append((float(phi), closed, oracle, rel))
    if cfg.csv:
        write_csv(cfg.csv, ["phi", "closed_form", "partial_wave", "rel_error"], rows)


def cmd_check(cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    suite = p.get("suite", "all")
    names = list(checks.SUITES) if suite == "all" else [suite]
    for i, name in enumerate(checks.SUITES):
        if name not in names:
            continue
        rng = np.random.default_rng([cfg.seed, i])
        kw = {"include_two_path": p.get("two_path", True)} if name == "dynamics" else {}
        for r in checks.SUITES[name](rng, **kw):
            entry = rep.add(r.name, r.error, r.tolerance, r.provenance, 0.0, r.error)
            entry.passed = r.passed


HANDLERS: dict[str, Callable[[RunConfig, RunReport], None]] = {
    "phase": cmd_phase, "charges": cmd_charges, "flux": cmd_flux, "loop-integral": cmd_loop_integral,
    "vacuum": cmd_vacuum, "evolve": cmd_evolve, "two-path": cmd_two_path, "fringe": cmd_fringe,
    "scatter": cmd_scatter, "check": cmd_check,
}


def run(argv: Optional[list[str]] = None) -> int:
    """Execute one subcommand; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    overrides = {key: getattr(args, key) for _, key, _, _ in FLAGS[args.command]}
    try:
        doc = load_config_file(args.config) if args.config else None
        cfg = build_run_config(args.command, doc, overrides, args.seed, args.report, args.csv)
        dynamics.configure_threads()
    except (ConfigError, DomainError, ValueError) as exc:
        print(f"dyonlab {args.command}: configuration error: {exc}", file=sys.stderr)
        return 2
    rep = RunReport(command=cfg.command, version=__version__, seed=cfg.seed, inputs=cfg.params)
    start = time.perf_counter()
    try:
        HANDLERS[cfg.command](cfg, rep)
    except DomainError as exc:
        print(f"dyonlab {cfg.command}: domain error: {exc}", file=sys.stderr)
        return 2
    except DyonlabError as exc:
        print(f"dyonlab {cfg.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"dyonlab {cfg.command}: I/O error: {exc}", file=sys.stderr)
        return 2
    if args.timing:
        rep.wall_time = time.perf_counter() - start
    try:
        text = emit_report(rep, cfg.report)
    except OSError as exc:
        print(f"dyonlab {cfg.command}: cannot write report: {exc}", file=sys.stderr)
        return 2
    if cfg.report is None:
        sys.stdout.write(text)
    else:
        status = "PASS" if rep.passed else "FAIL " + ", ".join(rep.failures)
        print(f"{cfg.command}: {status} (report {cfg.report})")
    return 0 if rep.passed else 1


def main(argv: Optional[list[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
