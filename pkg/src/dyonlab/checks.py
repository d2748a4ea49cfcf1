"""Seeded invariant checks for every module, aggregated by ``dyonlab check``."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import dynamics, gauge, interferometry, phases, scattering, units, vacua
from .phases import TWO_PI, circular_distance


@dataclass
class CheckResult:
    name: str
    passed: bool
    error: float
    tolerance: float
    provenance: str  # "analytic" or "oracle"
    detail: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def _result(name, err, tol, provenance="analytic", detail=""):
    err = float(err)
    return CheckResult(name, bool(err <= tol), err, tol, provenance, detail)


def _rel(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _random_charge(rng) -> units.DyonCharge:
    return units.DyonCharge(q=rng.normal(), g=rng.normal())


def _random_flux(rng) -> units.FluxTube:
    return units.FluxTube(phi_m=rng.normal() * 10, phi_e=rng.normal() * 10)


# ------------------------------------------------------------------ units / phases

def check_units(rng, samples: int = 1000) -> list[CheckResult]:
    c = units.make_constants()
    out = []
    anti = max(abs(units.sz_pairing(a, b) + units.sz_pairing(b, a))
               for a, b in ((_random_charge(rng), _random_charge(rng)) for _ in range(samples)))
    out.append(_result("units.sz_antisymmetry", anti, 0.0))

    worst = 0.0
    for _ in range(samples):
        nq, ng, nq2, ng2 = rng.integers(-20, 21, 4)
        th = rng.uniform(-20, 20)
        val = units.sz_pairing(units.witten_charges(nq, ng, th, c), units.witten_charges(nq2, ng2, th, c))
        worst = max(worst, abs(val - (nq * ng2 - nq2 * ng) / 2))
    out.append(_result("units.sz_theta_independence", worst, 1e-9))

    worst = 0.0
    for _ in range(samples):
        d, f, xi = _random_charge(rng), _random_flux(rng), rng.uniform(-10, 10)
        d2, f2 = units.duality_rotate(d, f, xi)
        scale = max(1.0, (abs(d.q) + abs(d.g)) * (abs(f.phi_m) + abs(f.phi_e)))
        lhs, rhs = d.q * f.phi_m - d.g * f.phi_e, d2.q * f2.phi_m - d2.g * f2.phi_e
        worst = max(worst, abs(lhs - rhs) / scale)
    out.append(_result("units.duality_invariant", worst, 1e-12))

    worst = 0.0
    for _ in range(samples):
        nq, ng = rng.integers(-20, 21, 2)
        th = rng.uniform(-10, 10)
        a = units.witten_charges(nq, ng, th + TWO_PI, c)
        b = units.witten_charges(nq + ng, ng, th, c)
        worst = max(worst, _rel(a.q, b.q), _rel(a.g, b.g))
    out.append(_result("units.witten_theta_periodicity", worst, 1e-12))
    return out


def check_phases(rng, samples: int = 1000) -> list[CheckResult]:
    c = units.make_constants()
    quanta = units.elementary_flux(c)
    out = []

    worst = 0.0
    for _ in range(samples):
        d, f = _random_charge(rng), _random_flux(rng)
        n1, n2 = (int(v) for v in rng.integers(-50, 51, 2))
        total = phases.dyon_phase(d, f, n1 + n2).value
        parts = phases.dyon_phase(d, f, n1).value + phases.dyon_phase(d, f, n2).value
        worst = max(worst, _rel(total, parts))
    out.append(_result("phases.winding_additivity", worst, 1e-12))

    worst = 0.0
    for _ in range(samples):
        d, f, xi = _random_charge(rng), _random_flux(rng), rng.uniform(-10, 10)
        n = int(rng.integers(-10, 11))
        d2, f2 = units.duality_rotate(d, f, xi)
        scale = max(1.0, abs(n) * (abs(d.q) + abs(d.g)) * (abs(f.phi_m) + abs(f.phi_e)))
        worst = max(worst, abs(phases.dyon_phase(d, f, n).value - phases.dyon_phase(d2, f2, n).value) / scale)
    out.append(_result("phases.duality_invariance", worst, 1e-12))

    worst = 0.0
    for _ in range(samples):
        nq, ng, n = (int(v) for v in rng.integers(-10, 11, 3))
        th = rng.uniform(-10, 10)
        f = units.FluxTube(phi_m=rng.uniform(-3, 3) * c.phi_m0, phi_e=rng.uniform(-3, 3) * c.phi_e0)
        a = phases.dyon_phase(units.witten_charges(nq, ng, th + TWO_PI, c), f, n).value
        b = phases.dyon_phase(units.witten_charges(nq + ng, ng, th, c), f, n).value
        worst = max(worst, _rel(a, b))
    out.append(_result("phases.theta_periodicity", worst, 1e-12))

    worst = 0.0
    for _ in range(samples):
        nq, ng, npe, npm, n = (int(v) for v in rng.integers(-10, 11, 5))
        th = rng.uniform(-10, 10)
        ph, N = phases.flux_rule_phase(nq, ng, npe, npm, th, n, c)
        worst = max(worst, abs(ph.value - TWO_PI * N) / max(1.0, abs(TWO_PI * N)),
                    circular_distance(ph.value, 0.0))
    out.append(_result("phases.flux_rule_theta_cancellation", worst, 1e-9))

    worst = 0.0
    for _ in range(samples):
        n, ng = (int(v) for v in rng.integers(-10, 11, 2))
        phi_m, th = rng.uniform(-3, 3) * c.phi_m0, rng.uniform(-10, 10)
        a = phases.theta_phase(n, ng, phi_m, th, c).value
        b = phases.theta_phase_from_g(n, ng * c.g0, phi_m, th, c).value
        worst = max(worst, _rel(a, b))
    out.append(_result("phases.theta_phase_forms_agree", worst, 1e-12))

    worst = 0.0
    for n in range(-10, 11):
        for th in (0.1, 1.0, math.pi, 5.0):
            std, part = phases.dyon_phase_split(1, 1, th, quanta, n, c)
            worst = max(worst, abs(part.value - n * th), abs(std.value))
    out.append(_result("phases.quantised_theta_phase", worst, 1e-12))
    return out


# ------------------------------------------------------------------ gauge

def random_loop(rng, turns: int, samples_per_turn: int = 256) -> gauge.PlanePath:
    """Smooth star-shaped loop around (or, for ``turns == 0``, beside) the origin."""
    t = np.linspace(0.0, TWO_PI * (turns if turns else 1), samples_per_turn * max(1, abs(turns)) + 1)
    a = rng.uniform(0, 0.25, 2)
    p = rng.uniform(0, TWO_PI, 2)
    r0 = rng.uniform(1.0, 3.0)
    r = r0 * (1 + a[0] * np.cos(2 * t + p[0]) + a[1] * np.cos(3 * t + p[1]))
    if turns == 0:
        cx = rng.choice([-1, 1]) * (r0 * 1.5 + 2.0)
        x, y = cx + r * np.cos(t), r * np.sin(t)
    else:
        shift = rng.uniform(-0.3, 0.3, 2) * r0
        x, y = shift[0] + r * np.cos(t), shift[1] + r * np.sin(t)
    x[-1], y[-1] = x[0], y[0]
    return gauge.PlanePath(x, y, closed=True)


def check_gauge(rng, loops: int = 50) -> list[CheckResult]:
    out = []
    worst = 0.0
    for _ in range(loops):
        d = _random_charge(rng)
        f = units.FluxTube(phi_m=rng.normal() * 5, phi_e=rng.normal() * 5, radius_eps=0.1)
        path = random_loop(rng, int(rng.integers(-3, 4)))
        value = gauge.line_integral(gauge.conjugate_momentum_field(d, f), path)
        expected = gauge.winding_number(path) * (d.q * f.phi_m - d.g * f.phi_e)
        worst = max(worst, abs(value - expected))
    out.append(_result("gauge.loop_integral_equals_dyon_phase", worst, 1e-8, "oracle"))

    worst = 0.0
    for _ in range(loops):
        th = rng.uniform(-TWO_PI, TWO_PI)
        path = random_loop(rng, int(rng.integers(-3, 4)))
        value = gauge.line_integral(gauge.beta_gradient(th, 0.1), path)
        worst = max(worst, abs(value - gauge.winding_number(path) * th))
    out.append(_result("gauge.loop_integral_theta", worst, 1e-8, "oracle"))

    field = gauge.beta_gradient(1.3, 0.1)
    worst = 0.0
    for _ in range(loops):
        path = random_loop(rng, 1)
        cut = int(rng.integers(1, path.x.size - 1))
        first = gauge.PlanePath(path.x[:cut + 1], path.y[:cut + 1])
        second = gauge.PlanePath(path.x[cut:], path.y[cut:])
        whole = gauge.line_integral(field, first.concat(second))
        worst = max(worst, abs(whole - gauge.line_integral(field, first) - gauge.line_integral(field, second)))
    out.append(_result("gauge.line_integral_additivity", worst, 1e-10))

    f = units.FluxTube(phi_m=7.0, phi_e=-3.0, radius_eps=0.1)
    worst = 0.0
    for _ in range(loops):
        cx, cy = rng.uniform(0.5, 3) * rng.choice([-1, 1]), rng.uniform(0.5, 3) * rng.choice([-1, 1])
        h = rng.uniform(0.01, 0.2)
        sq = gauge.PlanePath.from_points([(cx, cy), (cx + h, cy), (cx + h, cy + h), (cx, cy + h)], closed=True)
        for which in (0, 1):
            pot = (lambda x, y, w=which: gauge.vector_potentials(f, x, y)[w])
            worst = max(worst, abs(gauge.line_integral(pot, sq, h / 64)))
    out.append(_result("gauge.curl_free_exterior", worst, 1e-8))
    return out


# ------------------------------------------------------------------ vacua

def check_vacua(rng, samples: int = 1000) -> list[CheckResult]:
    out = []
    worst = 0.0
    for M in (10, 100, 1000, 10000):
        for th in rng.uniform(-10, 10, 5):
            worst = max(worst, vacua.eigenvalue_residual(vacua.build_theta_vacuum(th, M)))
    out.append(_result("vacua.interior_eigenvalue", worst, 1e-12))

    worst = 0.0
    for th in rng.uniform(-10, 10, 20):
        a = vacua.build_theta_vacuum(th, 50).state.amplitudes
        b = vacua.build_theta_vacuum(th + TWO_PI, 50).state.amplitudes
        worst = max(worst, float(np.max(np.abs(a - b))))
    out.append(_result("vacua.theta_periodicity", worst, 1e-12))

    worst = 0.0
    for _ in range(samples):
        n = int(rng.integers(-20, 21))
        th, phi = rng.uniform(-10, 10), rng.uniform(-10, 10)
        worst = max(worst, abs(vacua.dyon_state_factor(n, th, phi + TWO_PI) - vacua.dyon_state_factor(n + 1, th, phi)))
    out.append(_result("vacua.reindexing_identity", worst, 1e-12))
    return out


# ------------------------------------------------------------------ scattering

def check_scattering(rng) -> list[CheckResult]:
    out = []
    th = rng.uniform(-10, 10, 200)
    phi = rng.uniform(0.1, TWO_PI - 0.1, 200)
    k = float(rng.uniform(0.1, 5))
    a = scattering.theta_cross_section(th, k, phi)
    b = scattering.theta_cross_section(th + TWO_PI, k, phi)
    out.append(_result("scattering.theta_periodicity", np.max(np.abs(a - b) / np.maximum(1, a)), 1e-12))
    scaled = scattering.theta_cross_section(th, k, phi) * k
    unit = scattering.theta_cross_section(th, 1.0, phi)
    out.append(_result("scattering.k_scaling", np.max(np.abs(scaled - unit) / np.maximum(1, unit)), 1e-12))
    refl = scattering.theta_cross_section(th, k, TWO_PI - phi)
    out.append(_result("scattering.reflection_symmetry", np.max(np.abs(a - refl) / np.maximum(1, a)), 1e-12))

    alphas = np.arange(1, 10) / 10
    angles = np.linspace(math.pi / 6, math.pi, 6)
    rows = scattering.compare_table(alphas, angles, k=1.0, m_max=2000)
    out.append(_result("scattering.partial_wave_oracle", max(r["rel_error"] for r in rows), 1e-3, "oracle"))
    return out


# ------------------------------------------------------------------ dynamics

SMALL_GRID = interferometry.SMALL_GRID
SMALL_CONFIG = interferometry.SMALL_CONFIG
SMALL_GEOMETRY = interferometry.SMALL_GEOMETRY


def check_dynamics(rng, include_two_path: bool = True) -> list[CheckResult]:
    c = units.make_constants()
    out = []
    ref = interferometry.REFERENCE_GRID
    worst_off, worst_tube = 0.0, 0.0
    for d, f in ((units.witten_charges(1, 1, 1.0, c), units.elementary_flux(c)),
                 (units.DyonCharge(c.e, 0.0), units.FluxTube(c.phi_m0, 0.0)),
                 (_random_charge(rng), _random_flux(rng))):
        links = dynamics.build_link_phases(ref, d, f)
        off, tube = dynamics.check_plaquettes(ref, links, phases.effective_alpha(d, f))
        worst_off, worst_tube = max(worst_off, off), max(worst_tube, tube)
    out.append(_result("dynamics.plaquette_curl_free", worst_off, 1e-10))
    out.append(_result("dynamics.plaquette_tube_flux", worst_tube, 1e-10))

    grid = dynamics.Grid2D(64, 64)
    d, f = units.DyonCharge(c.e, 0.0), units.FluxTube(0.37 * c.phi_m0, 0.0)
    links = dynamics.build_link_phases(grid, d, f)
    packet = dynamics.gaussian_packet(grid, (-12.0, -10.0), 5.0, (0.4, 0.3))
    cfg = dynamics.EvolveConfig(dt=0.2, steps=60, links=links)
    lam = rng.uniform(-math.pi, math.pi, (grid.nx, grid.ny))
    a = dynamics.evolve(packet, cfg)
    b = dynamics.evolve(packet.gauge_transform(lam),
                        dynamics.EvolveConfig(dt=0.2, steps=60, links=links.gauge_transform(lam)))
    out.append(_result("dynamics.gauge_covariance", np.max(np.abs(np.abs(a.psi) ** 2 - np.abs(b.psi) ** 2)), 1e-10))

    ev = dynamics.Evolver(grid, cfg)
    drift, psi = 0.0, packet
    for _ in range(20):
        nxt = ev.run(psi, steps=1)
        drift = max(drift, abs(nxt.norm2() - psi.norm2()))
        psi = nxt
    out.append(_result("dynamics.norm_drift_per_step", drift, 1e-10))

    if include_two_path:
        errs = []
        for alpha in (0.3, 1.3):
            res = interferometry.two_path_phase(SMALL_GRID, units.DyonCharge(c.e, 0.0),
                                                units.FluxTube(alpha * c.phi_m0, 0.0),
                                                SMALL_CONFIG, SMALL_GEOMETRY)
            errs.append(res)
        out.append(_result("dynamics.two_path_alpha_periodicity",
                           circular_distance(errs[0].measured_phase, errs[1].measured_phase), 1e-2, "oracle",
                           f"small grid, phases {errs[0].measured_phase:.6f} / {errs[1].measured_phase:.6f}"))
        out.append(_result("dynamics.two_path_small_grid", max(e.error for e in errs), 1e-2, "oracle"))
    return out


SUITES: dict[str, Callable] = {
    "units": check_units,
    "phases": check_phases,
    "gauge": check_gauge,
    "vacua": check_vacua,
    "scattering": check_scattering,
    "dynamics": check_dynamics,
}


def run_suite(name: str = "all", seed: int = 42) -> list[CheckResult]:
    names = list(SUITES) if name == "all" else [name]
    results = []
    for n in names:
        results.extend(SUITES[n](np.random.default_rng([seed, list(SUITES).index(n)])))
    return results
