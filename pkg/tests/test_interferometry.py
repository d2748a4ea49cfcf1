import math

import numpy as np
import pytest

from dyonlab.errors import DomainError, InvalidRunError
from dyonlab.interferometry import (SMALL_CONFIG, SMALL_GEOMETRY, SMALL_GRID, PacketGeometry, SlitGeometry,
                                    branch_azimuth, fringe_shift, slit_pattern, two_path_phase)
from dyonlab.phases import circular_distance
from dyonlab.units import DyonCharge, FluxTube, elementary_flux, make_constants, witten_charges

C = make_constants()


def small_run(d, f, geometry=SMALL_GEOMETRY):
    return two_path_phase(SMALL_GRID, d, f, SMALL_CONFIG, geometry)


def tube(alpha):
    return DyonCharge(C.e, 0.0), FluxTube(alpha * C.phi_m0, 0.0)


def test_branch_cut_above_tube():
    phi = branch_azimuth(SMALL_GRID)
    X, Y = SMALL_GRID.mesh()
    assert np.all(phi <= 0.5 * math.pi) and np.all(phi > -1.5 * math.pi)
    # away from the tube the only jump is across x = 0 above it
    far = SMALL_GRID.radius() > 4
    jy = np.abs(np.diff(phi, axis=1))[far[:, 1:] & far[:, :-1]]
    jx = np.abs(np.diff(phi, axis=0))
    pairs = far[1:, :] & far[:-1, :]
    assert np.max(jy) < 0.5
    assert np.max(jx[pairs & (Y[1:, :] < 0)]) < 0.5
    assert np.max(jx[pairs & (Y[1:, :] > 0)]) > 6


@pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5])
def test_small_grid_two_path(alpha):
    res = small_run(*tube(alpha))
    assert res.error < 1e-2
    assert res.fringe_error < 1e-2
    assert res.zone_probability < 1e-6
    assert circular_distance(res.measured_phase, 2 * math.pi * alpha) < 1e-2


def test_small_grid_vacuum_case():
    res = small_run(witten_charges(1, 1, 1.0, C), elementary_flux(C))
    assert res.alpha_eff == pytest.approx(1 / (2 * math.pi))
    assert abs(res.measured_phase - 1.0) < 1e-2


def test_small_grid_flux_periodicity():
    a = small_run(*tube(0.3))
    b = small_run(*tube(1.3))
    assert circular_distance(a.measured_phase, b.measured_phase) < 1e-2


def test_packets_over_the_tube_invalidate_run():
    geo = PacketGeometry(width=8.0, half_separation=20.0, source_y=-100.0, cross_y=100.0)
    with pytest.raises(InvalidRunError, match="near the tube"):
        small_run(*tube(0.3), geometry=geo)


def test_packet_geometry_validation():
    with pytest.raises(DomainError):
        PacketGeometry(width=4.0)
    with pytest.raises(DomainError):
        PacketGeometry(half_separation=150.0, source_y=-100.0, cross_y=100.0).momenta(SMALL_CONFIG.__class__(
            dt=0.01, steps=100), 1.0)


def test_fringe_zero_phase():
    res = fringe_shift(SlitGeometry(), 0.0)
    assert abs(res.delta_x) < 0.02 * res.period


def test_fringe_half_turn():
    res = fringe_shift(SlitGeometry(L=1000, d=10, w=1, wavelength=1, delta0_bar=0), math.pi)
    assert res.period == 100
    assert abs(res.delta_x - 50) < 1


@pytest.mark.parametrize("theta", [0.0, math.pi / 2, math.pi, 4.0])
@pytest.mark.parametrize("delta0_bar", [0.0, 0.15])
def test_fringe_matches_prediction(theta, delta0_bar):
    geom = SlitGeometry(L=800, d=8, w=0.8, wavelength=0.5, delta0_bar=delta0_bar)
    res = fringe_shift(geom, theta)
    assert abs(res.delta_x - res.predicted) <= 0.02 * res.period


def test_fringe_full_turn_is_one_period():
    geom = SlitGeometry()
    a, b = fringe_shift(geom, 0.7), fringe_shift(geom, 0.7 + 2 * math.pi)
    assert b.delta_x - a.delta_x == pytest.approx(geom.fringe_period, abs=1e-6 * geom.fringe_period)
    assert np.allclose(a.intensity, b.intensity, rtol=1e-9)


def test_pattern_symmetric_without_phase():
    x = np.linspace(-300, 300, 601)
    I = slit_pattern(SlitGeometry(), 0.0, x)
    assert np.allclose(I, I[::-1], rtol=1e-10)


@pytest.mark.parametrize("kwargs", [dict(L=100, d=10), dict(w=10, d=10), dict(wavelength=0)])
def test_slit_geometry_validation(kwargs):
    with pytest.raises(DomainError):
        SlitGeometry(**kwargs)
