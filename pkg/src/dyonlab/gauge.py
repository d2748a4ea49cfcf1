"""Pure-gauge potentials outside a dual flux tube, line integrals and windings.

Outside the tube both fields vanish and the potentials are gradients of
multi-valued functions of the azimuth: ``A = grad(phi Phi_m / 2pi)`` and
``C = grad(-phi Phi_e / 2pi)``.  Every routine here works in the exterior
only and raises :class:`DomainError` for points inside the exclusion radius.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ContractError, DomainError
from .units import DyonCharge, FluxTube

Field = Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]

DEFAULT_STEP_FRACTION = 2.0 ** -10


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    @property
    def r(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def phi(self) -> float:
        return math.atan2(self.y, self.x)


@dataclass(frozen=True)
class PlanePath:
    """Polyline in the plane.  Closed paths repeat their first vertex at the end."""
    x: np.ndarray
    y: np.ndarray
    closed: bool = False

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.shape != y.shape or x.ndim != 1 or x.size < 2:
            raise ContractError("path needs matching 1-D coordinate arrays with >= 2 points")
        if self.closed and (x[0] != x[-1] or y[0] != y[-1]):
            raise ContractError("closed path must end at its first point")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_points(cls, points: Sequence[tuple[float, float]], closed: bool = False) -> "PlanePath":
        pts = np.asarray(points, dtype=float)
        if closed and not np.array_equal(pts[0], pts[-1]):
            pts = np.vstack([pts, pts[:1]])
        return cls(pts[:, 0], pts[:, 1], closed)

    @classmethod
    def circle(cls, radius: float, turns: int = 1, center=(0.0, 0.0), samples_per_turn: int = 256,
               start: float = 0.0) -> "PlanePath":
        """Circle traversed ``turns`` times (negative = clockwise)."""
        m = max(1, abs(turns)) * samples_per_turn
        t = start + np.linspace(0.0, 2 * math.pi * turns, m + 1)
        x = center[0] + radius * np.cos(t)
        y = center[1] + radius * np.sin(t)
        x[-1], y[-1] = x[0], y[0]
        return cls(x, y, closed=True)

    @property
    def length(self) -> float:
        return float(np.sum(np.hypot(np.diff(self.x), np.diff(self.y))))

    def unwrapped_azimuth(self, center=(0.0, 0.0)) -> np.ndarray:
        """Continuous azimuth along the path about ``center``.

        Raises if any raw jump between samples exceeds pi, which means the
        sampling is too coarse to track the branch unambiguously.
        """
        phi = np.arctan2(self.y - center[1], self.x - center[0])
        jumps = np.diff(phi)
        jumps = (jumps + np.pi) % (2 * np.pi) - np.pi
        if np.any(np.abs(jumps) >= np.pi - 1e-12):
            raise ContractError("path sampled too coarsely: azimuth jump >= pi between vertices")
        return np.concatenate([[phi[0]], phi[0] + np.cumsum(jumps)])

    def concat(self, other: "PlanePath") -> "PlanePath":
        if self.x[-1] != other.x[0] or self.y[-1] != other.y[0]:
            raise ContractError("paths do not join")
        x = np.concatenate([self.x, other.x[1:]])
        y = np.concatenate([self.y, other.y[1:]])
        return PlanePath(x, y, closed=bool(x[0] == x[-1] and y[0] == y[-1]))


def read_path_csv(path, closed: bool | None = None) -> PlanePath:
    """Read a path from a CSV file with header columns ``x,y``."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or not {"x", "y"} <= set(rows[0]):
        raise ContractError(f"{path}: expected CSV columns x,y")
    x = np.array([float(r["x"]) for r in rows])
    y = np.array([float(r["y"]) for r in rows])
    if closed is None:
        closed = bool(x[0] == x[-1] and y[0] == y[-1])
    return PlanePath(x, y, closed)


def _check_exterior(x, y, f: FluxTube, center) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    dx = np.asarray(x, dtype=float) - center[0]
    dy = np.asarray(y, dtype=float) - center[1]
    r2 = dx * dx + dy * dy
    if np.any(r2 < f.radius_eps ** 2):
        raise DomainError("point inside the flux tube (r < radius_eps); only the exterior is modeled")
    return dx, dy, r2


def vector_potentials(f: FluxTube, x, y, center=(0.0, 0.0)):
    """Return ``(A, C)`` as pairs of arrays ``((Ax, Ay), (Cx, Cy))``.

    ``A = Phi_m / (2 pi r) phi_hat`` and ``C = -Phi_e / (2 pi r) phi_hat``
    with ``phi_hat = (-y, x) / r``.
    """
    dx, dy, r2 = _check_exterior(x, y, f, center)
    a = f.phi_m / (2 * math.pi)
    c = -f.phi_e / (2 * math.pi)
    return (-a * dy / r2, a * dx / r2), (-c * dy / r2, c * dx / r2)


def conjugate_momentum_field(d: DyonCharge, f: FluxTube, center=(0.0, 0.0)) -> Field:
    """Field ``q A + g C`` as a vectorized callable of ``(x, y)``."""
    strength = (d.q * f.phi_m - d.g * f.phi_e) / (2 * math.pi)

    def field(x, y):
        dx, dy, r2 = _check_exterior(x, y, f, center)
        return -strength * dy / r2, strength * dx / r2

    return field


def conjugate_momentum(d: DyonCharge, f: FluxTube, p: PlanePoint, center=(0.0, 0.0)) -> np.ndarray:
    (ax, ay), (cx, cy) = vector_potentials(f, p.x, p.y, center)
    return np.array([d.q * ax + d.g * cx, d.q * ay + d.g * cy], dtype=float)


def beta_gradient(theta: float, radius_eps: float = 1e-12, center=(0.0, 0.0)) -> Field:
    """Gradient of ``beta = theta phi / 2 pi``; the vacuum conjugate momentum."""
    s = theta / (2 * math.pi)

    def field(x, y):
        dx = np.asarray(x, dtype=float) - center[0]
        dy = np.asarray(y, dtype=float) - center[1]
        r2 = dx * dx + dy * dy
        if np.any(r2 < radius_eps ** 2):
            raise DomainError("point inside the flux tube")
        return -s * dy / r2, s * dx / r2

    return field


def _midpoint_sum(field: Field, path: PlanePath, step: float, refine: int) -> float:
    x0, y0 = path.x[:-1], path.y[:-1]
    sx, sy = np.diff(path.x), np.diff(path.y)
    seg = np.hypot(sx, sy)
    counts = np.maximum(1, np.ceil(seg / step).astype(np.int64)) * refine
    idx = np.repeat(np.arange(seg.size), counts)
    # position of each sub-interval within its segment
    offsets = np.arange(idx.size) - np.repeat(np.cumsum(counts) - counts, counts)
    t = (offsets + 0.5) / counts[idx]
    fx, fy = field(x0[idx] + t * sx[idx], y0[idx] + t * sy[idx])
    return float(np.sum((fx * sx[idx] + fy * sy[idx]) / counts[idx]))


def line_integral(field: Field, path: PlanePath, quadrature_step: float | None = None,
                  levels: int = 3) -> float:
    """Line integral of ``field`` along ``path`` by the composite midpoint rule.

    Each polyline segment is cut into ``ceil(len / step)`` equal pieces; the
    default step is ``2**-10`` of the total path length.  ``levels > 1``
    repeats the rule with the step halved and Richardson-extrapolates
    (Romberg table in even powers of h); ``levels=1`` is the plain rule.
    """
    if quadrature_step is None:
        quadrature_step = DEFAULT_STEP_FRACTION * path.length
    if not quadrature_step > 0:
        raise DomainError("quadrature_step must be positive")
    row = [_midpoint_sum(field, path, quadrature_step, 2 ** i) for i in range(max(1, levels))]
    for k in range(1, len(row)):
        factor = 4.0 ** k
        row = [(factor * row[i + 1] - row[i]) / (factor - 1) for i in range(len(row) - 1)]
    return row[0]


def winding_number(path: PlanePath, center=(0.0, 0.0)) -> int:
    """Signed number of counterclockwise turns of a closed path around ``center``."""
    if not path.closed:
        raise ContractError("winding number needs a closed path")
    phi = path.unwrapped_azimuth(center)
    return int(round((phi[-1] - phi[0]) / (2 * math.pi)))
