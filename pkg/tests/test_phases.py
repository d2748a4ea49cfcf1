import math

import pytest
from hypothesis import given, strategies as st

from dyonlab.phases import (PhaseResult, dyon_phase, dyon_phase_split, effective_alpha,
                            flux_rule_phase, heuristic_string_phase, reduce_phase, theta_phase,
                            theta_phase_from_g)
from dyonlab.units import DyonCharge, FluxTube, duality_rotate, elementary_flux, make_constants, witten_charges

TWO_PI = 2 * math.pi
small = st.integers(-10, 10)
angles = st.floats(-20, 20, allow_nan=False)
reals = st.floats(-100, 100, allow_nan=False)
C = make_constants()


def rel(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


def test_vanishing_phase_for_elementary_dyon(codata):
    r = dyon_phase(DyonCharge(codata.e, codata.g0), elementary_flux(codata), 1)
    assert abs(r.value) < 1e-12


@given(reals, reals, reals, reals)
def test_zero_winding(q, g, pm, pe):
    assert dyon_phase(DyonCharge(q, g), FluxTube(pm, pe), 0).value == 0.0


def test_quarter_flux_three_turns(codata):
    r = dyon_phase(DyonCharge(codata.e, 0.0), FluxTube(0.25 * codata.phi_m0, 123.0), 3)
    assert r.value == pytest.approx(1.5 * math.pi, abs=1e-12)
    assert r.winding_n == 3


@given(st.floats(-1e4, 1e4, allow_nan=False))
def test_reduced_in_range(value):
    r = PhaseResult.of(value, 1)
    assert 0 <= r.reduced < TWO_PI
    assert abs(math.remainder(r.reduced - value, TWO_PI)) < 1e-12 * max(1, abs(value))


@pytest.mark.parametrize("value", [-1e-18, -0.0, -TWO_PI, 3 * TWO_PI])
def test_reduce_stays_below_two_pi(value):
    assert 0 <= reduce_phase(value) < TWO_PI


@given(reals, reals, reals, reals, small, small)
def test_winding_additivity(q, g, pm, pe, n1, n2):
    d, f = DyonCharge(q, g), FluxTube(pm, pe)
    total = dyon_phase(d, f, n1 + n2).value
    assert rel(total, dyon_phase(d, f, n1).value + dyon_phase(d, f, n2).value) < 1e-12


@given(reals, reals, reals, reals, angles, small)
def test_duality_invariance(q, g, pm, pe, xi, n):
    d, f = DyonCharge(q, g), FluxTube(pm, pe)
    d2, f2 = duality_rotate(d, f, xi)
    # rotated terms are of size |n| (|q|+|g|)(|pm|+|pe|) and cancel
    scale = max(1.0, abs(n) * (abs(q) + abs(g)) * (abs(pm) + abs(pe)))
    assert abs(dyon_phase(d, f, n).value - dyon_phase(d2, f2, n).value) / scale < 1e-12


@given(small, small, angles, small, st.floats(-3, 3), st.floats(-3, 3))
def test_theta_periodicity_of_full_phase(nq, ng, theta, n, a, b):
    f = FluxTube(a * C.phi_m0, b * C.phi_e0)
    x = dyon_phase(witten_charges(nq, ng, theta + TWO_PI, C), f, n).value
    y = dyon_phase(witten_charges(nq + ng, ng, theta, C), f, n).value
    assert rel(x, y) < 1e-12


def test_split_at_zero_theta(codata):
    f = FluxTube(0.3 * codata.phi_m0, 0.7 * codata.phi_e0)
    std, part = dyon_phase_split(2, -1, 0.0, f, 3, codata)
    assert part.value == 0.0
    assert std.value == pytest.approx(dyon_phase(witten_charges(2, -1, 0.0, codata), f, 3).value, rel=1e-12)


@pytest.mark.parametrize("theta", [0.1, 1.0, math.pi, 5.0])
@pytest.mark.parametrize("n", range(-10, 11))
def test_quantised_theta_phase(codata, theta, n):
    std, part = dyon_phase_split(1, 1, theta, elementary_flux(codata), n, codata)
    assert abs(part.value - n * theta) < 1e-12
    assert abs(std.value) < 1e-12


@given(small, small, angles, st.floats(-5, 5), st.floats(-5, 5), small)
def test_split_recombines(nq, ng, theta, a, b, n):
    f = FluxTube(a * C.phi_m0, b * C.phi_e0)
    std, part = dyon_phase_split(nq, ng, theta, f, n, C)
    full = dyon_phase(witten_charges(nq, ng, theta, C), f, n).value
    assert rel(std.value + part.value, full) < 1e-12


def test_theta_phase_examples(codata):
    for theta in (0.3, 2.0):
        assert theta_phase(1, 1, codata.phi_m0, theta, codata).value == pytest.approx(theta, rel=1e-14)
    assert theta_phase(0, 5, codata.phi_m0, 1.0, codata).value == 0.0
    assert theta_phase(2, 3, codata.phi_m0 / 2, math.pi, codata).value == pytest.approx(3 * math.pi, rel=1e-14)


def test_theta_phase_from_g_examples(codata):
    assert theta_phase_from_g(1, codata.g0, codata.phi_m0, 0.9, codata).value == pytest.approx(0.9, rel=1e-14)
    assert theta_phase_from_g(4, 0.0, codata.phi_m0, 0.9, codata).value == 0.0
    a = theta_phase_from_g(3, 2 * codata.g0, 1.7, 2.2, codata).value
    b = theta_phase(3, 2, 1.7, 2.2, codata).value
    assert rel(a, b) < 1e-12


@given(small, small, st.floats(-50, 50), angles)
def test_theta_phase_forms_agree(n, ng, phi_m, theta):
    a = theta_phase(n, ng, phi_m, theta, C).value
    b = theta_phase_from_g(n, ng * C.g0, phi_m, theta, C).value
    assert rel(a, b) < 1e-12


def test_effective_alpha_examples(codata):
    assert effective_alpha(DyonCharge(codata.e, 0.0), FluxTube(codata.phi_m0, 0.0)) == pytest.approx(1.0)
    for theta in (0.5, 1.0, 3.0):
        a = effective_alpha(witten_charges(1, 1, theta, codata), elementary_flux(codata))
        assert a == pytest.approx(theta / TWO_PI, abs=1e-14)
    assert effective_alpha(DyonCharge(codata.e, 0.0), FluxTube(0.37 * codata.phi_m0, 0.0)) == pytest.approx(0.37)


@given(reals, reals, reals, reals)
def test_effective_alpha_matches_single_turn(q, g, pm, pe):
    d, f = DyonCharge(q, g), FluxTube(pm, pe)
    assert abs(dyon_phase(d, f, 1).value - TWO_PI * effective_alpha(d, f)) <= 1e-12 * max(1, abs(q * pm), abs(g * pe))


@given(angles)
def test_flux_rule_examples(theta):
    ph, N = flux_rule_phase(1, 1, 1, 1, theta, 1)
    assert N == 0 and abs(ph.value) < 1e-9
    ph, N = flux_rule_phase(1, 0, 0, 1, theta, 1)
    assert N == 1 and abs(ph.value - TWO_PI) < 1e-9


def test_flux_rule_composed_example():
    ph, N = flux_rule_phase(2, 1, 1, 3, 1.234, 2)
    assert N == 10
    assert abs(ph.value - 20 * math.pi) / (20 * math.pi) < 1e-9


@given(small, small, small, small, angles, small)
def test_flux_rule_theta_cancels(nq, ng, npe, npm, theta, n):
    ph, N = flux_rule_phase(nq, ng, npe, npm, theta, n)
    assert N == n * (nq * npm - ng * npe)
    assert abs(ph.value - TWO_PI * N) <= 1e-9 * max(1, abs(TWO_PI * N))
    assert min(ph.reduced, TWO_PI - ph.reduced) < 1e-9


def test_heuristic_string_phase(codata):
    ph, N = heuristic_string_phase(DyonCharge(codata.e, 0.0), DyonCharge(0.0, codata.g0))
    assert ph.heuristic and ph.value == pytest.approx(TWO_PI) and N == 1
    d = DyonCharge(0.4, 0.9)
    ph, N = heuristic_string_phase(d, d)
    assert ph.value == 0.0 and N == 0
    ph, N = heuristic_string_phase(DyonCharge(codata.e, 0.0), DyonCharge(0.0, 0.3 * codata.g0))
    assert ph.value == pytest.approx(0.6 * math.pi) and N is None
