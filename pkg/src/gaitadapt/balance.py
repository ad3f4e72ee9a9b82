"""ZMP, support polygon and friction checks on a point-mass-per-link model.

Each link contributes its mass at its CoM; link rotational inertia is
ignored, which is what makes the ZMP expression below exact for the model.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import GRAVITY, RobotGeometry, Side, SupportPhase, TaskSpaceState
from .errors import NoStanceFootError, NoSupportError

_GEOM_TOL = 1e-12


@dataclass(frozen=True)
class LinkState:
    com_position: tuple[float, float, float]
    com_acceleration: tuple[float, float, float]
    mass: float

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"link mass must be positive, got {self.mass!r}")
        if not all(math.isfinite(a) for a in self.com_acceleration):
            raise ValueError("link acceleration must be finite")


def _stack(links: Sequence[LinkState]):
    m = np.array([l.mass for l in links], dtype=float)
    p = np.array([l.com_position for l in links], dtype=float)
    a = np.array([l.com_acceleration for l in links], dtype=float)
    return m, p, a


def zmp_arrays(masses: np.ndarray, pos: np.ndarray, acc: np.ndarray,
               gravity: float = GRAVITY) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized ZMP and required friction.

    Args:
        masses: ``(n_links,)``.
        pos, acc: ``(..., n_links, 3)`` world CoM positions and accelerations.

    Returns:
        ``(x_zmp, y_zmp, mu_req)`` with the leading shape of ``pos``.  Samples
        whose net vertical force is not positive come back as NaN.
    """
    fz = (masses * (acc[..., 2] + gravity)).sum(axis=-1)
    fx = (masses * acc[..., 0]).sum(axis=-1)
    fy = (masses * acc[..., 1]).sum(axis=-1)
    wz = masses * (acc[..., 2] + gravity)
    mx = (wz * pos[..., 0] - masses * acc[..., 0] * pos[..., 2]).sum(axis=-1)
    my = (wz * pos[..., 1] - masses * acc[..., 1] * pos[..., 2]).sum(axis=-1)
    ok = fz > 0
    safe = np.where(ok, fz, 1.0)
    nan = np.full(np.shape(fz), np.nan)
    return (np.where(ok, mx / safe, nan), np.where(ok, my / safe, nan),
            np.where(ok, np.hypot(fx, fy) / safe, nan))


def compute_zmp(links: Sequence[LinkState], gravity: float = GRAVITY) -> tuple[float, float]:
    m, p, a = _stack(links)
    if float((m * (a[:, 2] + gravity)).sum()) <= 0:
        raise NoSupportError("net vertical support force is not positive")
    x, y, _ = zmp_arrays(m, p, a, gravity)
    return float(x), float(y)


def required_friction(links: Sequence[LinkState], gravity: float = GRAVITY) -> float:
    """Tangential-to-normal ground force ratio needed to avoid slipping."""
    m, p, a = _stack(links)
    if float((m * (a[:, 2] + gravity)).sum()) <= 0:
        raise NoSupportError("net vertical support force is not positive")
    return float(zmp_arrays(m, p, a, gravity)[2])


def second_difference(x: np.ndarray, dt: float) -> np.ndarray:
    """Central second derivative along axis 0, second-order one-sided at the ends."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    if len(x) < 4:
        if len(x) == 3:
            out[:] = (x[2] - 2 * x[1] + x[0]) / dt ** 2
        else:
            out[:] = 0.0
        return out
    out[1:-1] = (x[2:] - 2 * x[1:-1] + x[:-2]) / dt ** 2
    out[0] = (2 * x[0] - 5 * x[1] + 4 * x[2] - x[3]) / dt ** 2
    out[-1] = (2 * x[-1] - 5 * x[-2] + 4 * x[-3] - x[-4]) / dt ** 2
    return out


# --- support polygon -----------------------------------------------------------

def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list[tuple[float, float]]:
    """Monotone-chain hull, counterclockwise, collinear points dropped."""
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) < 3:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= _GEOM_TOL:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= _GEOM_TOL:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class SupportPolygon:
    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.vertices) < 3 or self.area <= 0:
            raise ValueError("support polygon must have positive area")
        n = len(self.vertices)
        for i in range(n):
            if _cross(self.vertices[i], self.vertices[(i + 1) % n], self.vertices[(i + 2) % n]) < -_GEOM_TOL:
                raise ValueError("support polygon must be convex and counterclockwise")

    @property
    def area(self) -> float:
        v = self.vertices
        return 0.5 * sum(v[i][0] * v[(i + 1) % len(v)][1] - v[(i + 1) % len(v)][0] * v[i][1]
                         for i in range(len(v)))

    @classmethod
    def from_points(cls, points) -> "SupportPolygon":
        return cls(tuple(convex_hull(points)))

    def contains(self, point, tol: float = 0.0) -> bool:
        return zmp_margin(point, self) >= -tol


def foot_corners(x: float, y: float, yaw: float, g: RobotGeometry) -> list[tuple[float, float]]:
    """Sole rectangle corners in the world xy plane."""
    hl, hw = g.foot_length / 2, g.foot_width / 2
    c, s = math.cos(yaw), math.sin(yaw)
    return [(x + c * dx - s * dy, y + s * dx + c * dy)
            for dx, dy in ((hl, hw), (-hl, hw), (-hl, -hw), (hl, -hw))]


def stance_sides(state: TaskSpaceState) -> tuple[Side, ...]:
    if state.phase is SupportPhase.DSP:
        return (Side.LEFT, Side.RIGHT)
    return (state.swing_side.other,)


def support_polygon(state: TaskSpaceState, g: RobotGeometry,
                    feet: Sequence[Side] | None = None) -> SupportPolygon:
    """Hull of the stance-foot soles.

    ``feet`` overrides the phase-derived stance set, e.g. when a swing foot
    has not yet found the ground during double support.
    """
    feet = stance_sides(state) if feet is None else tuple(feet)
    if not feet:
        raise NoStanceFootError("no foot is in stance")
    pts = []
    for side in feet:
        f = state.foot(side)
        pts.extend(foot_corners(f.x, f.y, f.yaw, g))
    return SupportPolygon.from_points(pts)


def _segment_distance(p, a, b) -> float:
    ax, ay = b[0] - a[0], b[1] - a[1]
    L2 = ax * ax + ay * ay
    t = 0.0 if L2 == 0 else max(0.0, min(1.0, ((p[0] - a[0]) * ax + (p[1] - a[1]) * ay) / L2))
    return math.hypot(p[0] - a[0] - t * ax, p[1] - a[1] - t * ay)


def zmp_margin(zmp, polygon: SupportPolygon) -> float:
    """Signed distance to the polygon boundary, positive inside."""
    v = polygon.vertices
    n = len(v)
    inside = True
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        if _cross(a, b, zmp) < 0:
            inside = False
            break
    d = min(_segment_distance(zmp, v[i], v[(i + 1) % n]) for i in range(n))
    return d if inside else -d
