"""Gauge-coupled Schrodinger evolution on a square lattice around a flux line.

Minimal coupling enters only through link phases ``theta_ij = int_i^j (qA + gC).dl``
on the lattice edges, so the enclosed flux is carried exactly by plaquette
circulations.  The hopping term is ``-(1/2 m dx^2) exp(-i theta_ij) psi_j``,
which makes ``exp(i Lambda) psi_0`` the solution for a pure-gauge link set
``theta_ij = Lambda_j - Lambda_i``.

Time stepping is Strang-split Crank-Nicolson: each direction is advanced by
its Cayley transform ``(1 + i tau H_x/2)^-1 (1 - i tau H_x/2)``, exactly
unitary per factor.  The scheme is unconditionally stable; for accurate
phases keep ``dt * E_max << 1`` with ``E_max`` the largest kinetic energy
carried by the packet (``dt <= m dx^2`` is a safe rule of thumb).
"""
from __future__ import annotations

import dataclasses
import logging
import math
import os
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .errors import DomainError, InstabilityError
from .gauge import conjugate_momentum_field
from .phases import effective_alpha
from .units import DyonCharge, FluxTube

log = logging.getLogger(__name__)

GL_ORDER = 24
INSTABILITY_GROWTH = 1e-6


def _small_prime_factors_only(n: int) -> bool:
    for p in (2, 3, 5, 7):
        while n % p == 0:
            n //= p
    return n == 1


def configure_threads() -> Optional[int]:
    """Cap numba threads from ``DYONLAB_THREADS``; returns the cap, or None when unset.

    The solver kernels are serial sweeps, so results do not depend on the count.
    """
    raw = os.environ.get("DYONLAB_THREADS")
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise DomainError(f"DYONLAB_THREADS must be a positive integer, got {raw!r}")
    import numba

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", numba.NumbaWarning)
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
    return n


@dataclass(frozen=True)
class Grid2D:
    """Cell-centred lattice; site ``(i, j)`` sits at ``((i - (nx-1)/2) dx, (j - (ny-1)/2) dx)``.

    With even ``nx, ny`` and the default tube centre the tube threads the
    central plaquette.  Sites closer than ``radius_eps`` to the tube centre
    are excluded (hard wall).
    """
    nx: int
    ny: int
    dx: float = 1.0
    tube_center: tuple = (0.0, 0.0)
    radius_eps: float = 1.0

    def __post_init__(self):
        if self.nx < 4 or self.ny < 4:
            raise DomainError("grid needs at least 4x4 sites")
        if not (_small_prime_factors_only(self.nx) and _small_prime_factors_only(self.ny)):
            raise DomainError("nx, ny must factor into primes <= 7")
        if not self.dx > 0:
            raise DomainError("dx must be positive")

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.nx) - (self.nx - 1) / 2) * self.dx

    @property
    def y(self) -> np.ndarray:
        return (np.arange(self.ny) - (self.ny - 1) / 2) * self.dx

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y, indexing="ij")

    def radius(self) -> np.ndarray:
        X, Y = self.mesh()
        return np.hypot(X - self.tube_center[0], Y - self.tube_center[1])

    @property
    def excluded(self) -> np.ndarray:
        return self.radius() < self.radius_eps

    def tube_plaquette(self) -> tuple[int, int]:
        """Lower-left site index of the plaquette containing the tube centre."""
        fx = (self.tube_center[0] - self.x[0]) / self.dx
        fy = (self.tube_center[1] - self.y[0]) / self.dx
        if fx == round(fx) or fy == round(fy):
            raise DomainError("tube centre lies on a lattice line; link integrals would be singular")
        i, j = int(math.floor(fx)), int(math.floor(fy))
        if not (0 <= i < self.nx - 1 and 0 <= j < self.ny - 1):
            raise DomainError("tube centre outside the grid")
        return i, j


@dataclass(frozen=True)
class LinkPhases:
    """``theta_x[i, j]``: edge (i,j)->(i+1,j); ``theta_y[i, j]``: edge (i,j)->(i,j+1)."""
    theta_x: np.ndarray
    theta_y: np.ndarray

    @classmethod
    def zeros(cls, grid: Grid2D) -> "LinkPhases":
        return cls(np.zeros((grid.nx - 1, grid.ny)), np.zeros((grid.nx, grid.ny - 1)))

    def circulation(self) -> np.ndarray:
        """Counterclockwise phase sum around every plaquette (not reduced mod 2 pi)."""
        tx, ty = self.theta_x, self.theta_y
        return tx[:, :-1] + ty[1:, :] - tx[:, 1:] - ty[:-1, :]

    def gauge_transform(self, lam: np.ndarray) -> "LinkPhases":
        """Links matching ``psi -> exp(i lam) psi``."""
        return LinkPhases(self.theta_x + lam[1:, :] - lam[:-1, :],
                          self.theta_y + lam[:, 1:] - lam[:, :-1])


def build_link_phases(grid: Grid2D, d: DyonCharge, f: FluxTube, order: int = GL_ORDER) -> LinkPhases:
    """Integrate ``q A + g C`` along every lattice edge (Gauss-Legendre, ``order`` nodes).

    Edges are integrated in the flux-line limit, so the potentials are used
    right up to the singular line; excluded sites are handled by the
    Hamiltonian, not here.
    """
    grid.tube_plaquette()
    line = dataclasses.replace(f, radius_eps=1e-300)
    field = conjugate_momentum_field(d, line, center=grid.tube_center)
    nodes, weights = np.polynomial.legendre.leggauss(order)
    t = 0.5 * (nodes + 1)
    w = 0.5 * weights
    x, y, h = grid.x, grid.y, grid.dx

    xs = x[:-1, None, None] + h * t[None, None, :]
    ys = np.broadcast_to(y[None, :, None], (grid.nx - 1, grid.ny, order))
    fx, _ = field(xs, ys)
    theta_x = h * np.einsum("ijk,k->ij", fx, w)

    xs = np.broadcast_to(x[:, None, None], (grid.nx, grid.ny - 1, order))
    ys = y[None, :-1, None] + h * t[None, None, :]
    _, fy = field(xs, ys)
    theta_y = h * np.einsum("ijk,k->ij", fy, w)
    return LinkPhases(theta_x, theta_y)


def tube_circulation(grid: Grid2D, links: LinkPhases) -> float:
    return float(links.circulation()[grid.tube_plaquette()])


def check_plaquettes(grid: Grid2D, links: LinkPhases, alpha_eff: float) -> tuple[float, float]:
    """Return (max |circulation| off the tube, |tube circulation - 2 pi alpha|)."""
    circ = links.circulation()
    i, j = grid.tube_plaquette()
    tube = circ[i, j]
    circ = circ.copy()
    circ[i, j] = 0.0
    return float(np.max(np.abs(circ))), float(abs(tube - 2 * math.pi * alpha_eff))


def absorbing_mask(grid: Grid2D, margin: int, power: float = 0.125) -> np.ndarray:
    """Per-step amplitude mask ``cos(pi/2 (1 - s/margin))**power`` inside a margin of ``s < margin`` cells."""
    if margin <= 0:
        return np.ones((grid.nx, grid.ny))

    def ramp(n):
        s = np.minimum(np.arange(n), np.arange(n)[::-1]).astype(float)
        m = np.ones(n)
        inside = s < margin
        m[inside] = np.cos(0.5 * math.pi * (1 - s[inside] / margin)) ** power
        return m

    return ramp(grid.nx)[:, None] * ramp(grid.ny)[None, :]


@dataclass(frozen=True)
class WaveField:
    psi: np.ndarray
    grid: Grid2D

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * self.grid.dx ** 2)

    def gauge_transform(self, lam: np.ndarray) -> "WaveField":
        return WaveField(self.psi * np.exp(1j * lam), self.grid)

    def moments(self) -> dict:
        """Mean position and variances of ``|psi|^2``."""
        p = np.abs(self.psi) ** 2
        p = p / p.sum()
        X, Y = self.grid.mesh()
        mx, my = float((p * X).sum()), float((p * Y).sum())
        return {"mean_x": mx, "mean_y": my,
                "var_x": float((p * (X - mx) ** 2).sum()), "var_y": float((p * (Y - my) ** 2).sum())}


def gaussian_packet(grid: Grid2D, center, width: float, k=(0.0, 0.0),
                    gauge: Optional[np.ndarray] = None) -> WaveField:
    """Normalized packet ``exp(-r^2 / 4 width^2 + i k.x)``; ``width`` is the std of ``|psi|^2``.

    ``gauge`` multiplies the packet by ``exp(i gauge)`` (the local phase that
    makes it a solution in the presence of pure-gauge potentials).
    """
    X, Y = grid.mesh()
    psi = np.exp(-((X - center[0]) ** 2 + (Y - center[1]) ** 2) / (4 * width ** 2)
                 + 1j * (k[0] * X + k[1] * Y))
    if gauge is not None:
        psi = psi * np.exp(1j * gauge)
    psi[grid.excluded] = 0
    psi /= math.sqrt(np.sum(np.abs(psi) ** 2) * grid.dx ** 2)
    return WaveField(psi, grid)


@dataclass(frozen=True)
class EvolveConfig:
    mass: float = 1.0
    dt: float = 0.1
    steps: int = 100
    absorb_margin: int = 0
    links: Optional[LinkPhases] = None
    potential: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if not (self.mass > 0 and self.dt > 0):
            raise DomainError("mass and dt must be positive")
        if self.steps < 0 or self.absorb_margin < 0:
            raise DomainError("steps and absorb_margin must be non-negative")


class _Direction:
    """Cayley factor data for sweeps along axis 0 of a (lines-last) array."""

    def __init__(self, theta, diag_h, hop, active, a):
        n, nl = diag_h.shape
        self.c = np.zeros((n, nl), dtype=complex)
        self.c[:-1, :] = hop * np.exp(-1j * theta) * active
        self.d = np.ascontiguousarray(diag_h, dtype=float)
        self.a = float(a)
        self.inv_d = _kernels.factor(self.c, self.d, self.a)

    def apply(self, psi: np.ndarray, prev: np.ndarray):
        _kernels.sweep(psi, self.c, self.d, self.inv_d, self.a, prev)

    def apply_t(self, psi: np.ndarray):
        _kernels.sweep_t(psi, self.c, self.d, self.inv_d, self.a, 16)


class Evolver:
    """Pre-factorized propagator for a fixed grid and configuration."""

    def __init__(self, grid: Grid2D, cfg: EvolveConfig):
        self.grid, self.cfg = grid, cfg
        links = cfg.links or LinkPhases.zeros(grid)
        excl = grid.excluded
        keep = ~excl
        hop = -1.0 / (2 * cfg.mass * grid.dx ** 2)
        diag = np.where(keep, 1.0 / (cfg.mass * grid.dx ** 2), 0.0)
        if cfg.potential is not None:
            diag = diag + np.where(keep, 0.5 * np.asarray(cfg.potential, dtype=float), 0.0)
        act_x = (keep[:-1, :] & keep[1:, :]).astype(float)
        act_y = (keep[:, :-1] & keep[:, 1:]).astype(float)
        tau = cfg.dt
        self._x_half = _Direction(links.theta_x, diag, hop, act_x, tau / 4)
        self._x_full = _Direction(links.theta_x, diag, hop, act_x, tau / 2)
        # y coefficients stored (ny, nx) for the blocked axis-1 kernel
        self._y_full = _Direction(links.theta_y.T, diag.T, hop, act_y.T, tau / 2)
        self.mask = absorbing_mask(grid, cfg.absorb_margin)
        self._absorbing = cfg.absorb_margin > 0
        m = min(cfg.absorb_margin, grid.nx // 2, grid.ny // 2)
        # the mask is 1 outside these four strips
        self._strips = [np.s_[:m, :], np.s_[grid.nx - m:, :], np.s_[m:grid.nx - m, :m],
                        np.s_[m:grid.nx - m, grid.ny - m:]]
        self._keep = keep

    def _absorb(self, psi: np.ndarray):
        for sl in self._strips:
            psi[sl] *= self.mask[sl]

    def run(self, field: WaveField, steps: Optional[int] = None,
            observer: Optional[Callable[[int, np.ndarray], None]] = None,
            observe_every: int = 0, check_every: int = 10) -> WaveField:
        """Advance ``steps`` time steps (Strang splitting, x half-steps merged).

        ``observer(step, psi)`` is called at ``step % observe_every == 0`` and
        at the end with a synchronized (fully stepped) field; it must not
        mutate ``psi``.
        """
        steps = self.cfg.steps if steps is None else steps
        psi = np.array(field.psi, dtype=complex, copy=True)
        psi[~self._keep] = 0
        work = np.empty(psi.shape[1], dtype=complex)
        if steps == 0:
            return WaveField(psi, self.grid)
        norm = float(np.sum(np.abs(psi) ** 2))
        last_check, last_norm = 0, norm
        if observer is not None:
            observer(0, psi)
        self._x_half.apply(psi, work)
        for s in range(1, steps + 1):
            self._y_full.apply_t(psi)
            if self._absorbing:
                self._absorb(psi)
            sync = s == steps or (observer is not None and observe_every and s % observe_every == 0)
            if sync:
                self._x_half.apply(psi, work)
                if observer is not None:
                    observer(s, psi)
                if s < steps:
                    self._x_half.apply(psi, work)
            else:
                self._x_full.apply(psi, work)
            if check_every and s % check_every == 0:
                norm = float(np.sum(np.abs(psi) ** 2))
                allowed = (1 + INSTABILITY_GROWTH) ** (s - last_check)
                if not math.isfinite(norm) or norm > last_norm * allowed:
                    raise InstabilityError(
                        f"norm grew from {last_norm:.17g} to {norm:.17g} over steps "
                        f"{last_check}..{s}; reduce dt")
                last_check, last_norm = s, norm
        return WaveField(psi, self.grid)


def evolve(field: WaveField, cfg: EvolveConfig, **kwargs) -> WaveField:
    return Evolver(field.grid, cfg).run(field, **kwargs)


def vacuum_links(grid: Grid2D, d: DyonCharge, f: FluxTube) -> tuple[LinkPhases, float]:
    """Links for ``(d, f)`` together with the effective flux they must enclose."""
    return build_link_phases(grid, d, f), effective_alpha(d, f)
