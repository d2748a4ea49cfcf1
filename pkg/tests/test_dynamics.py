import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dyonlab import dynamics
from dyonlab.dynamics import (EvolveConfig, Evolver, Grid2D, LinkPhases, WaveField, build_link_phases,
                              check_plaquettes, evolve, gaussian_packet, tube_circulation)
from dyonlab.errors import DomainError, InstabilityError
from dyonlab.units import DyonCharge, FluxTube, elementary_flux, make_constants, witten_charges

C = make_constants()
SMALL = Grid2D(48, 48)


def tube(alpha):
    return DyonCharge(C.e, 0.0), FluxTube(alpha * C.phi_m0, 0.0)


def test_grid_validation():
    with pytest.raises(DomainError):
        Grid2D(11, 16)
    with pytest.raises(DomainError):
        Grid2D(16, 16, dx=0.0)
    with pytest.raises(DomainError):
        Grid2D(2, 16)
    g = Grid2D(6, 8, 0.5)
    assert g.x[0] == -1.25 and g.y[-1] == 1.75


def test_excluded_sites():
    g = Grid2D(16, 16, radius_eps=1.0)
    assert g.excluded.sum() == 4  # the four sites at distance sqrt(1/2)
    assert Grid2D(16, 16, radius_eps=0.5).excluded.sum() == 0


def test_tube_on_lattice_line_rejected():
    g = Grid2D(32, 32, tube_center=(0.5, 0.25))
    with pytest.raises(DomainError, match="lattice line"):
        build_link_phases(g, *tube(0.3))


def test_zero_flux_links_trivial():
    links = build_link_phases(SMALL, DyonCharge(1.0, 1.0), FluxTube(0.0, 0.0))
    assert not np.any(links.theta_x) and not np.any(links.theta_y)


def test_single_flux_quantum_circulation():
    links = build_link_phases(SMALL, *tube(1.0))
    assert abs(tube_circulation(SMALL, links) - 2 * math.pi) < 1e-10


def test_cp_conserving_links_flat():
    links = build_link_phases(SMALL, DyonCharge(C.e, C.g0), elementary_flux(C))
    circ = links.circulation()
    assert np.max(np.abs(np.remainder(circ + math.pi, 2 * math.pi) - math.pi)) < 1e-10


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-2, 2), st.floats(-2, 2))
@settings(max_examples=25)
def test_plaquette_invariants(q, g, a, b):
    d, f = DyonCharge(q * C.e, g * C.g0), FluxTube(a * C.phi_m0, b * C.phi_e0)
    alpha = (d.q * f.phi_m - d.g * f.phi_e) / (2 * math.pi)
    off, tube_err = check_plaquettes(SMALL, build_link_phases(SMALL, d, f), alpha)
    assert off < 1e-10 and tube_err < 1e-10


def test_vacuum_plaquettes_at_reference_resolution():
    from dyonlab.interferometry import REFERENCE_GRID
    d, f = witten_charges(1, 1, 1.0, C), elementary_flux(C)
    off, tube_err = check_plaquettes(REFERENCE_GRID, build_link_phases(REFERENCE_GRID, d, f), 1 / (2 * math.pi))
    assert off < 1e-10 and tube_err < 1e-10


def test_gauge_transform_of_links():
    rng = np.random.default_rng(3)
    lam = rng.uniform(-5, 5, (SMALL.nx, SMALL.ny))
    links = build_link_phases(SMALL, *tube(0.41))
    assert np.allclose(links.gauge_transform(lam).circulation(), links.circulation(), atol=1e-12)


def test_packet_normalised_and_zero_on_wall():
    p = gaussian_packet(SMALL, (1.0, 0.0), 4.0, (0.3, 0.0))
    assert p.norm2() == pytest.approx(1.0, abs=1e-14)
    assert not np.any(p.psi[SMALL.excluded])


def test_free_dispersion():
    grid = Grid2D(128, 128, radius_eps=1e-3)
    sigma0, m, dt, steps = 6.0, 1.0, 0.2, 500
    packet = gaussian_packet(grid, (0.0, 0.0), sigma0)
    out = evolve(packet, EvolveConfig(mass=m, dt=dt, steps=steps))
    t = dt * steps
    expected = sigma0 ** 2 + (t / (2 * m * sigma0)) ** 2
    mom = out.moments()
    assert abs(mom["var_x"] - expected) / expected < 0.01
    assert abs(mom["var_y"] - expected) / expected < 0.01


def test_stationary_mode_phase():
    n, dt, steps = 32, 0.1, 100
    grid = Grid2D(n, n, radius_eps=1e-3)
    s = np.sin(math.pi * np.arange(1, n + 1) / (n + 1))
    psi = np.outer(s, s).astype(complex)
    psi /= math.sqrt(np.sum(np.abs(psi) ** 2))
    out = evolve(WaveField(psi, grid), EvolveConfig(dt=dt, steps=steps)).psi
    assert np.max(np.abs(np.abs(out) - np.abs(psi))) < 1e-12
    ratio = out / psi
    assert np.max(np.abs(ratio - ratio[0, 0])) < 1e-12
    energy = 2 * (1 - math.cos(math.pi / (n + 1)))
    assert abs(np.angle(ratio[0, 0]) + energy * dt * steps) < 1e-6


@given(st.integers(0, 2 ** 32 - 1), st.floats(-2, 2))
@settings(max_examples=8)
def test_gauge_covariance(seed, alpha):
    rng = np.random.default_rng(seed)
    lam = rng.uniform(-math.pi, math.pi, (SMALL.nx, SMALL.ny))
    links = build_link_phases(SMALL, *tube(alpha))
    packet = gaussian_packet(SMALL, (-8.0, -6.0), 4.0, (0.5, 0.4))
    densities = {}

    def recorder(key):
        def obs(step, psi):
            densities.setdefault(key, []).append(np.abs(psi) ** 2)
        return obs

    evolve(packet, EvolveConfig(dt=0.2, steps=40, links=links), observer=recorder("a"), observe_every=10)
    evolve(packet.gauge_transform(lam), EvolveConfig(dt=0.2, steps=40, links=links.gauge_transform(lam)),
           observer=recorder("b"), observe_every=10)
    assert len(densities["a"]) == 5
    for a, b in zip(densities["a"], densities["b"]):
        assert np.max(np.abs(a - b)) < 1e-10


def test_norm_drift_per_step():
    links = build_link_phases(SMALL, *tube(0.37))
    ev = Evolver(SMALL, EvolveConfig(dt=0.3, links=links))
    psi = gaussian_packet(SMALL, (-6.0, 3.0), 3.0, (0.8, -0.3))
    for _ in range(30):
        nxt = ev.run(psi, steps=1)
        assert abs(nxt.norm2() - psi.norm2()) < 1e-10
        psi = nxt


def test_flux_periodicity_of_densities():
    packet = gaussian_packet(SMALL, (-8.0, 0.0), 3.0, (0.6, 0.0))
    a = evolve(packet, EvolveConfig(dt=0.2, steps=60, links=build_link_phases(SMALL, *tube(0.3))))
    # one extra flux quantum is the pure gauge exp(i phi)
    X, Y = SMALL.mesh()
    dressed = packet.gauge_transform(np.arctan2(Y, X))
    b = evolve(dressed, EvolveConfig(dt=0.2, steps=60, links=build_link_phases(SMALL, *tube(1.3))))
    assert np.max(np.abs(np.abs(a.psi) ** 2 - np.abs(b.psi) ** 2)) < 1e-10


def test_absorber_removes_outgoing_packet():
    grid = Grid2D(64, 64, radius_eps=1e-3)
    packet = gaussian_packet(grid, (15.0, 0.0), 3.0, (1.0, 0.0))
    out = evolve(packet, EvolveConfig(dt=0.3, steps=200, absorb_margin=10))
    assert out.norm2() < 1e-3


def test_instability_detected(monkeypatch):
    ev = Evolver(SMALL, EvolveConfig(dt=0.1, absorb_margin=4))
    monkeypatch.setattr(ev, "_absorb", lambda psi: psi.__imul__(1.001))
    with pytest.raises(InstabilityError, match="reduce dt"):
        ev.run(gaussian_packet(SMALL, (5.0, 5.0), 3.0), steps=20)


def test_config_validation():
    with pytest.raises(DomainError):
        EvolveConfig(dt=0.0)
    with pytest.raises(DomainError):
        EvolveConfig(steps=-1)


def test_thread_env(monkeypatch):
    monkeypatch.delenv("DYONLAB_THREADS", raising=False)
    assert dynamics.configure_threads() is None
    monkeypatch.setenv("DYONLAB_THREADS", "1")
    assert dynamics.configure_threads() == 1
    monkeypatch.setenv("DYONLAB_THREADS", "0")
    with pytest.raises(DomainError):
        dynamics.configure_threads()


def test_deterministic():
    links = build_link_phases(SMALL, *tube(0.2))
    packet = gaussian_packet(SMALL, (-8.0, -6.0), 4.0, (0.5, 0.4))
    cfg = EvolveConfig(dt=0.2, steps=30, links=links, absorb_margin=5)
    assert np.array_equal(evolve(packet, cfg).psi, evolve(packet, cfg).psi)
