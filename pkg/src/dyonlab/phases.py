"""Closed-form topological phases of a dyon encircling a dual flux tube.

Winding numbers count counterclockwise turns as positive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .units import (DEFAULT_CONSTANTS, DyonCharge, FluxTube, PhysicalConstants,
                    flux_from_integers, witten_charges)

TWO_PI = 2 * math.pi
ALGEBRA_TOL = 1e-12
INTEGER_TOL = 1e-9


def reduce_phase(value: float) -> float:
    """Map a phase to [0, 2 pi)."""
    r = math.fmod(value, TWO_PI)
    if r < 0:
        r += TWO_PI
    if r >= TWO_PI:  # fmod rounding at -tiny
        r = 0.0
    return r


def circular_distance(a: float, b: float) -> float:
    d = abs(reduce_phase(a) - reduce_phase(b))
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class PhaseResult:
    value: float
    reduced: float
    winding_n: int
    heuristic: bool = False

    @classmethod
    def of(cls, value: float, winding_n: int, heuristic: bool = False) -> "PhaseResult":
        return cls(value=float(value), reduced=reduce_phase(value), winding_n=int(winding_n),
                   heuristic=heuristic)

    def close_to(self, other: float, tol: float = ALGEBRA_TOL) -> bool:
        """Equality modulo 2 pi."""
        return circular_distance(self.value, other) <= tol


def dyon_phase(d: DyonCharge, f: FluxTube, n: int) -> PhaseResult:
    """Phase ``n (q phi_m - g phi_e)`` picked up after ``n`` turns around the tube."""
    return PhaseResult.of(n * (d.q * f.phi_m - d.g * f.phi_e), n)


def dyon_phase_split(n_q: int, n_g: int, theta: float, f: FluxTube, n: int,
                     consts: PhysicalConstants = DEFAULT_CONSTANTS) -> tuple[PhaseResult, PhaseResult]:
    """Split the phase of a Witten dyon into its integer-charge part and its theta part."""
    standard = n * (n_q * consts.e * f.phi_m - n_g * consts.g0 * f.phi_e)
    return PhaseResult.of(standard, n), theta_phase(n, n_g, f.phi_m, theta, consts)


def theta_phase(n: int, n_g: int, phi_m: float, theta: float,
                consts: PhysicalConstants = DEFAULT_CONSTANTS) -> PhaseResult:
    return PhaseResult.of(n * n_g * theta * consts.e * phi_m / TWO_PI, n)


def theta_phase_from_g(n: int, g: float, phi_m: float, theta: float,
                       consts: PhysicalConstants = DEFAULT_CONSTANTS) -> PhaseResult:
    """Theta phase written through the magnetic charge, using ``n_g = 2 alpha g / e``."""
    return PhaseResult.of(n * consts.alpha * theta * g * phi_m / math.pi, n)


def effective_alpha(d: DyonCharge, f: FluxTube) -> float:
    """Dimensionless flux seen by the dyon, ``(q phi_m - g phi_e) / 2 pi``."""
    return (d.q * f.phi_m - d.g * f.phi_e) / TWO_PI


def flux_rule_phase(n_q: int, n_g: int, n_phi_e: int, n_phi_m: int, theta: float, n: int,
                    consts: PhysicalConstants = DEFAULT_CONSTANTS) -> tuple[PhaseResult, int]:
    """Phase when both charges and fluxes follow Witten-type rules.

    The phase is composed from the charge and flux constructors (not from
    the closed form) and returned together with ``N = n (n_q n_phi_m - n_g n_phi_e)``.
    """
    d = witten_charges(n_q, n_g, theta, consts)
    f = flux_from_integers(n_phi_e, n_phi_m, theta, consts=consts)
    return dyon_phase(d, f, n), n * (n_q * n_phi_m - n_g * n_phi_e)


def heuristic_string_phase(d1: DyonCharge, d2: DyonCharge,
                           tol: float = INTEGER_TOL) -> tuple[PhaseResult, Optional[int]]:
    """Phase of dyon ``d1`` encircling the Dirac string of dyon ``d2`` once.

    Heuristic: the string is semi-infinite, so no global potentials exist
    for it, a trivial phase does not make the string unobservable, and a
    semi-infinite string is not homeomorphic to the infinite tube the dyon
    phase was derived for.  The result is flagged ``heuristic=True``.

    Returns ``(phase, N)`` where ``N`` is the integer with ``phase = 2 pi N``
    or ``None`` when the pair violates the quantisation condition.
    """
    value = 4 * math.pi * (d1.q * d2.g - d2.q * d1.g)
    phase = PhaseResult.of(value, 1, heuristic=True)
    turns = value / TWO_PI
    n = round(turns)
    return phase, (int(n) if abs(turns - n) <= tol else None)
