"""Constants, dyon charges, dual flux tubes and duality rotations.

Natural units hbar = c = 1 with Gaussian-style ``alpha = e**2``.  In these
units every phase below is a pure number of radians.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError

ALPHA_CODATA = 1 / 137.035999084
SZ_TOL = 1e-9


@dataclass(frozen=True)
class PhysicalConstants:
    alpha: float
    e: float
    g0: float
    phi_m0: float
    phi_e0: float


def make_constants(alpha: float = ALPHA_CODATA) -> PhysicalConstants:
    """Derive the charge and flux quanta from the fine-structure constant.

    ``e = sqrt(alpha)``, ``g0 = e / (2 alpha)``, ``phi_m0 = 2 pi / e`` and
    ``phi_e0 = 2 pi / g0``.
    """
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError(f"alpha must be positive and finite, got {alpha!r}")
    e = math.sqrt(alpha)
    g0 = e / (2 * alpha)
    return PhysicalConstants(alpha=alpha, e=e, g0=g0,
                             phi_m0=2 * math.pi / e, phi_e0=2 * math.pi / g0)


DEFAULT_CONSTANTS = make_constants()


@dataclass(frozen=True)
class DyonCharge:
    q: float
    g: float
    n_q: Optional[int] = None
    n_g: Optional[int] = None
    theta: Optional[float] = None

    @property
    def has_provenance(self) -> bool:
        return self.n_q is not None


@dataclass(frozen=True)
class FluxTube:
    phi_m: float
    phi_e: float
    radius_eps: float = 1.0
    n_phi_e: Optional[int] = None
    n_phi_m: Optional[int] = None
    theta: Optional[float] = None

    def __post_init__(self):
        if not self.radius_eps > 0:
            raise DomainError(f"radius_eps must be positive, got {self.radius_eps!r}")


def witten_charges(n_q: int, n_g: int, theta: float,
                   consts: PhysicalConstants = DEFAULT_CONSTANTS) -> DyonCharge:
    """Charges of a dyon in a vacuum with angle ``theta`` (Witten effect)."""
    q = n_q * consts.e + n_g * consts.e * theta / (2 * math.pi)
    return DyonCharge(q=q, g=n_g * consts.g0, n_q=int(n_q), n_g=int(n_g), theta=float(theta))


def elementary_flux(consts: PhysicalConstants = DEFAULT_CONSTANTS,
                    radius_eps: float = 1.0) -> FluxTube:
    """Tube carrying one magnetic and one electric flux quantum."""
    return FluxTube(phi_m=consts.phi_m0, phi_e=consts.phi_e0, radius_eps=radius_eps)


def flux_from_integers(n_phi_e: int, n_phi_m: int, theta: float, radius_eps: float = 1.0,
                       consts: PhysicalConstants = DEFAULT_CONSTANTS) -> FluxTube:
    """Fluxes obeying the hypothetical Witten-like flux quantisation rule."""
    if not radius_eps > 0:
        raise DomainError(f"radius_eps must be positive, got {radius_eps!r}")
    phi_e = n_phi_e * consts.phi_e0 + n_phi_m * consts.phi_e0 * theta / (2 * math.pi)
    return FluxTube(phi_m=n_phi_m * consts.phi_m0, phi_e=phi_e, radius_eps=radius_eps,
                    n_phi_e=int(n_phi_e), n_phi_m=int(n_phi_m), theta=float(theta))


def sz_pairing(d1: DyonCharge, d2: DyonCharge) -> float:
    return d1.q * d2.g - d2.q * d1.g


def sz_check(d1: DyonCharge, d2: DyonCharge, tol: float = SZ_TOL) -> Optional[int]:
    """Return the integer N with ``q1 g2 - q2 g1 = N/2``, or None on violation."""
    twice = 2 * sz_pairing(d1, d2)
    n = round(twice)
    if abs(twice - n) <= 2 * tol:
        return int(n)
    return None


def duality_rotate(d: DyonCharge, f: FluxTube, xi: float) -> tuple[DyonCharge, FluxTube]:
    """SO(2) duality rotation of the charge and flux doublets by angle ``xi``.

    Convention: ``q' = q cos xi + g sin xi``, ``g' = -q sin xi + g cos xi`` and
    ``phi_e' = phi_e cos xi + phi_m sin xi``, ``phi_m' = -phi_e sin xi + phi_m cos xi``,
    so ``q phi_m - g phi_e`` is left unchanged.  Integer provenance is dropped.
    """
    c, s = math.cos(xi), math.sin(xi)
    d2 = DyonCharge(q=d.q * c + d.g * s, g=-d.q * s + d.g * c)
    f2 = FluxTube(phi_m=-f.phi_e * s + f.phi_m * c, phi_e=f.phi_e * c + f.phi_m * s,
                  radius_eps=f.radius_eps)
    return d2, f2
