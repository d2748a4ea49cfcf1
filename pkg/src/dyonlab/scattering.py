"""Scattering of a dyon by a dual flux line in the plane.

Closed form: ``dsigma/dOmega = sin^2(pi alpha) / (2 pi k sin^2(phi/2))`` with
``alpha`` the effective flux (``theta / 2 pi`` in the CP-violating vacuum).
The independent oracle sums the flux-line partial waves with phase shifts
``delta_m = (pi/2)(|m| - |m - alpha|)``.  That series is not absolutely
convergent, so it is summed with Abel weights ``t**|m|`` extrapolated to
``t -> 1`` or with Cesaro means.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import binom

from .errors import ConvergenceError, DivergenceError, DomainError

FORWARD_CUTOFF = 1e-3


@dataclass(frozen=True)
class ScatteringSpec:
    alpha_eff: float
    k: float
    angles: tuple = field(default=())
    forward_cutoff: float = FORWARD_CUTOFF

    def __post_init__(self):
        if not self.k > 0:
            raise DomainError(f"wave number must be positive, got {self.k}")
        for phi in self.angles:
            _check_angle(phi, self.forward_cutoff)


def _check_angle(phi, cutoff: float = FORWARD_CUTOFF):
    phi = np.asarray(phi, dtype=float)
    reduced = np.mod(phi, 2 * math.pi)
    if np.any(np.minimum(reduced, 2 * math.pi - reduced) < cutoff):
        raise DivergenceError(
            f"angle within {cutoff} rad of the forward direction: the cross section "
            "has a 1/sin^2(phi/2) pole at phi = 0")


def split_alpha(alpha: float) -> tuple[int, float]:
    """Integer part (no scattering) and fractional part in [0, 1)."""
    n = math.floor(alpha)
    return int(n), alpha - n


def theta_cross_section(theta, k: float, phi, cutoff: float = FORWARD_CUTOFF):
    if not k > 0:
        raise DomainError(f"wave number must be positive, got {k}")
    _check_angle(phi, cutoff)
    return np.sin(np.asarray(theta) / 2) ** 2 / (2 * math.pi * k * np.sin(np.asarray(phi) / 2) ** 2)


def ab_cross_section(alpha_eff, k: float, phi, cutoff: float = FORWARD_CUTOFF):
    return theta_cross_section(2 * math.pi * np.asarray(alpha_eff), k, phi, cutoff)


def phase_shifts(m: np.ndarray, alpha: float) -> np.ndarray:
    return 0.5 * math.pi * (np.abs(m) - np.abs(m - alpha))


def _folded_terms(alpha: float, phi: float, m_max: int) -> np.ndarray:
    """Series terms grouped by |m|: ``b_0 = a_0``, ``b_j = a_j e^{ij phi} + a_-j e^{-ij phi}``."""
    j = np.arange(m_max + 1)
    plus = (np.exp(2j * phase_shifts(j, alpha)) - 1) * np.exp(1j * j * phi)
    minus = (np.exp(2j * phase_shifts(-j, alpha)) - 1) * np.exp(-1j * j * phi)
    terms = plus + minus
    terms[0] = plus[0]
    return terms


def _neville_at_zero(h: np.ndarray, values: np.ndarray) -> complex:
    """Polynomial extrapolation of ``values(h)`` to ``h = 0``."""
    p = list(values.astype(complex))
    n = len(p)
    for level in range(1, n):
        for i in range(n - level):
            p[i] = (h[i + level] * p[i] - h[i] * p[i + 1]) / (h[i + level] - h[i])
    return p[0]


def abel_sum(terms: np.ndarray, h_values, tol: float = 1e-10) -> complex:
    """Abel sum of ``sum_j terms[j]`` from weights ``(1-h)**j``, extrapolated to ``h -> 0``.

    Each ``h`` must make the discarded weighted tail, bounded by
    ``max|b| (1-h)**(J+1) / h``, smaller than ``tol``.
    """
    h = np.asarray(h_values, dtype=float)
    j = np.arange(terms.size)
    bound = np.max(np.abs(terms))
    values = np.empty(h.size, dtype=complex)
    for i, hi in enumerate(h):
        t = 1.0 - hi
        tail = bound * t ** terms.size / hi
        if tail > tol:
            raise ConvergenceError(
                f"Abel tail estimate {tail:.3g} > {tol:.3g} at t={t} with {terms.size} terms; "
                "raise M_max or use larger 1-t")
        values[i] = np.sum(terms * t ** j)
    return _neville_at_zero(h, values)


def cesaro_mean(terms: np.ndarray, order: int = 3) -> complex:
    """Cesaro (C, order) mean of the partial sums of ``terms``."""
    J = terms.size - 1
    j = np.arange(J + 1)
    weights = binom(J - j + order, order) / binom(J + order, order)
    return complex(np.sum(weights * terms))


def cesaro_sum(terms: np.ndarray, order: int = 3, levels: int = 4) -> complex:
    """Cesaro means over nested truncations, extrapolated in ``1/J``.

    Plain (C, r) means of a unimodular geometric series approach the limit
    only like ``1/J``; the smooth part of that error is removed by
    extrapolating ``J = J_max / 2**i`` for ``i < levels`` to ``1/J -> 0``.
    """
    J = terms.size - 1
    sizes = [J // 2 ** i for i in range(levels)]
    h = np.array([1.0 / (n + 1) for n in sizes])
    values = np.array([cesaro_mean(terms[:n + 1], order) for n in sizes])
    return _neville_at_zero(h, values)


def default_abel_h(m_max: int, levels: int = 6, tail_exponent: float = 30.0) -> np.ndarray:
    """Ladder ``1 - t = h0, 2 h0, ...`` with ``h0`` damping the truncated tail by ``e**-tail_exponent``."""
    h0 = tail_exponent / m_max
    return h0 * np.arange(1, levels + 1)


def partial_wave_amplitude(alpha_eff: float, k: float, phi: float, m_max: int = 2000,
                           regularization: str = "abel", **options) -> complex:
    """Regularized ``(2 pi i k)^(-1/2) sum_m (e^{2 i delta_m} - 1) e^{i m phi}``."""
    if m_max < 100:
        raise DomainError("M_max must be >= 100")
    if not k > 0:
        raise DomainError(f"wave number must be positive, got {k}")
    _check_angle(phi, options.pop("cutoff", FORWARD_CUTOFF))
    _, frac = split_alpha(alpha_eff)
    if frac == 0.0:
        return 0j
    terms = _folded_terms(frac, phi, m_max)
    if regularization == "abel":
        h = options.get("h_values")
        if h is None:
            h = default_abel_h(m_max, options.get("levels", 6))
        total = abel_sum(terms, h, options.get("tol", 1e-10))
    elif regularization == "cesaro":
        total = cesaro_sum(terms, options.get("order", 3), options.get("levels", 4))
    else:
        raise DomainError(f"unknown regularization {regularization!r}")
    return total / np.sqrt(2j * math.pi * k)


def partial_wave_cross_section(alpha_eff: float, k: float, phi: float, m_max: int = 2000,
                               regularization: str = "abel", **options) -> float:
    amp = partial_wave_amplitude(alpha_eff, k, phi, m_max, regularization, **options)
    return float(abs(amp) ** 2)


def compare_table(alphas, angles, k: float = 1.0, m_max: int = 2000,
                  regularization: str = "abel") -> list[dict]:
    """Rows ``(alpha, phi, closed_form, partial_wave, rel_error)``."""
    rows = []
    for a in alphas:
        for phi in angles:
            exact = float(ab_cross_section(a, k, phi))
            oracle = partial_wave_cross_section(a, k, phi, m_max, regularization)
            rel = abs(oracle - exact) / exact if exact else abs(oracle)
            rows.append({"alpha": float(a), "phi": float(phi), "closed_form": exact,
                         "partial_wave": oracle, "rel_error": rel})
    return rows
