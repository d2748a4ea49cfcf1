"""Winding-basis states, the Abelian theta-vacuum and the winding shift.

States are truncated to windings ``n`` in ``[-M, M]``.  One extra turn of
the dyon (``phi -> phi + 2 pi``) maps ``|n>`` to ``|n+1>``; under the
convention ``c'_{n+1} = c_n`` the theta-vacuum is an eigenvector of that
shift with eigenvalue ``exp(-i theta)`` on every interior index.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class WindingState:
    M: int
    amplitudes: np.ndarray  # index n + M
    boundary_loss: tuple = field(default=())

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if self.M < 0 or amps.shape != (2 * self.M + 1,):
            raise DomainError(f"need 2M+1 = {2 * self.M + 1} amplitudes, got shape {amps.shape}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def delta(cls, n: int, M: int) -> "WindingState":
        if abs(n) > M:
            raise DomainError(f"winding {n} outside truncation [-{M}, {M}]")
        amps = np.zeros(2 * M + 1, dtype=complex)
        amps[n + M] = 1.0
        return cls(M, amps)

    @property
    def windings(self) -> np.ndarray:
        return np.arange(-self.M, self.M + 1)

    def __getitem__(self, n: int) -> complex:
        if abs(n) > self.M:
            return 0j
        return complex(self.amplitudes[n + self.M])

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def to_records(self) -> list[list[float]]:
        """``[[n, re, im], ...]`` for JSON export."""
        return [[int(n), float(c.real), float(c.imag)] for n, c in zip(self.windings, self.amplitudes)]

    def to_json(self) -> str:
        return json.dumps(self.to_records())


@dataclass(frozen=True)
class ThetaVacuum:
    theta: float
    M: int
    state: WindingState
    normalized: bool = False


def dyon_state_factor(n: int, theta: float, phi: float) -> complex:
    """Phase ``exp(i n theta) exp(i phi theta / 2 pi)`` multiplying the free state."""
    return cmath.exp(1j * (n * theta + phi * theta / (2 * math.pi)))


def build_theta_vacuum(theta: float, M: int, normalize: bool = False) -> ThetaVacuum:
    """Truncated ``sum_n exp(i n theta) |n>``; unnormalized unless asked."""
    if M < 1:
        raise DomainError(f"truncation M must be >= 1, got {M}")
    n = np.arange(-M, M + 1)
    # extended-precision product keeps neighbouring phases consistent for large |n|
    turns = np.fmod(n.astype(np.longdouble) * np.longdouble(theta), np.longdouble(2 * math.pi))
    amps = np.exp(1j * turns.astype(float))
    if normalize:
        amps = amps / math.sqrt(2 * M + 1)
    return ThetaVacuum(theta=float(theta), M=M, state=WindingState(M, amps), normalized=normalize)


def winding_shift(s: WindingState | ThetaVacuum) -> WindingState:
    """Send ``|n>`` to ``|n+1>``; the amplitude pushed past ``+M`` is kept as boundary loss."""
    if isinstance(s, ThetaVacuum):
        s = s.state
    amps = np.empty_like(s.amplitudes)
    amps[0] = 0
    amps[1:] = s.amplitudes[:-1]
    return WindingState(s.M, amps, s.boundary_loss + (complex(s.amplitudes[-1]),))


def overlap(a: WindingState | ThetaVacuum, b: WindingState | ThetaVacuum) -> complex:
    """Inner product ``sum_n conj(a_n) b_n`` over the common window."""
    if isinstance(a, ThetaVacuum):
        a = a.state
    if isinstance(b, ThetaVacuum):
        b = b.state
    M = min(a.M, b.M)
    sa = a.amplitudes[a.M - M:a.M + M + 1]
    sb = b.amplitudes[b.M - M:b.M + M + 1]
    return complex(np.vdot(sa, sb))


def eigenvalue_residual(v: ThetaVacuum) -> float:
    """Max interior deviation of ``shift(v)`` from ``exp(-i theta) v``."""
    if not isinstance(v, ThetaVacuum):
        raise TypeError("eigenvalue_residual expects a ThetaVacuum")
    if v.M < 2:
        raise DomainError("need M >= 2 for a non-empty interior")
    shifted = winding_shift(v.state).amplitudes[1:-1]
    expected = cmath.exp(-1j * v.theta) * v.state.amplitudes[1:-1]
    return float(np.max(np.abs(shifted - expected)))
