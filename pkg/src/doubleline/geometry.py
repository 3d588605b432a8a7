"""Small planar/spatial geometry helpers shared across modules.

Angles are radians internally everywhere; conversion to degrees happens
only at the CLI/file-format boundary.
"""
from __future__ import annotations

import math

import numpy as np

TAU = 2.0 * math.pi


def unit(azimuth: float) -> np.ndarray:
    return np.array([math.cos(azimuth), math.sin(azimuth)])


def perp(v: np.ndarray) -> np.ndarray:
    """Rotate a 2-vector by +90 degrees."""
    return np.array([-v[1], v[0]])


def rot2(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.fmod(a, TAU)
    if a <= -math.pi:
        a += TAU
    elif a > math.pi:
        a -= TAU
    return a


def angle_ccw(a_from: float, a_to: float) -> float:
    """Counterclockwise angle from azimuth a_from to a_to, in [0, 2*pi)."""
    d = math.fmod(a_to - a_from, TAU)
    if d < 0.0:
        d += TAU
    return d


def intersect_lines(p0: np.ndarray, d0: np.ndarray, p1: np.ndarray, d1: np.ndarray) -> np.ndarray:
    """Intersection of two lines given as point + direction. Raises on parallel."""
    # Solve p0 + s*d0 = p1 + u*d1.
    det = d0[0] * (-d1[1]) - (-d1[0]) * d0[1]
    if abs(det) < 1e-14 * (np.linalg.norm(d0) * np.linalg.norm(d1) + 1.0):
        raise ValueError("lines are parallel")
    rhs = p1 - p0
    s = (rhs[0] * (-d1[1]) - (-d1[0]) * rhs[1]) / det
    return p0 + s * d0


def segments_intersect(a0, a1, b0, b1, eps: float = 1e-12) -> bool:
    """True if open segments a0-a1 and b0-b1 properly cross or overlap.

    Shared endpoints do not count as an intersection.
    """
    a0 = np.asarray(a0, dtype=float)
    a1 = np.asarray(a1, dtype=float)
    b0 = np.asarray(b0, dtype=float)
    b1 = np.asarray(b1, dtype=float)

    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    scale = max(
        abs(a1 - a0).max(), abs(b1 - b0).max(), abs(b0 - a0).max(), 1.0
    )
    tol = eps * scale * scale

    d1 = orient(a0, a1, b0)
    d2 = orient(a0, a1, b1)
    d3 = orient(b0, b1, a0)
    d4 = orient(b0, b1, a1)

    if ((d1 > tol and d2 < -tol) or (d1 < -tol and d2 > tol)) and (
        (d3 > tol and d4 < -tol) or (d3 < -tol and d4 > tol)
    ):
        return True

    def on_segment_interior(p, q, r):
        # r collinear with p-q: is it strictly inside?
        if abs(orient(p, q, r)) > tol:
            return False
        t_lo = min(p[0], q[0]) + eps * scale
        t_hi = max(p[0], q[0]) - eps * scale
        s_lo = min(p[1], q[1]) + eps * scale
        s_hi = max(p[1], q[1]) - eps * scale
        inside_x = t_lo < r[0] < t_hi if abs(p[0] - q[0]) > eps * scale else True
        inside_y = s_lo < r[1] < s_hi if abs(p[1] - q[1]) > eps * scale else True
        return inside_x and inside_y

    for p, q, r in ((a0, a1, b0), (a0, a1, b1), (b0, b1, a0), (b0, b1, a1)):
        if on_segment_interior(p, q, r):
            return True
    return False


def polygon_area(points: np.ndarray) -> float:
    """Signed area (positive for counterclockwise winding)."""
    pts = np.asarray(points, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def rot_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rotation_about_axis(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix about a unit axis."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    k = np.array(
        [
            [0.0, -axis[2], axis[1]],
            [axis[2], 0.0, -axis[0]],
            [-axis[1], axis[0], 0.0],
        ]
    )
    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


class Isometry:
    """Rigid motion x -> R x + t of 3-space."""

    __slots__ = ("rot", "trans")

    def __init__(self, rot: np.ndarray | None = None, trans: np.ndarray | None = None):
        self.rot = np.eye(3) if rot is None else np.asarray(rot, dtype=float)
        self.trans = np.zeros(3) if trans is None else np.asarray(trans, dtype=float)

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = pts @ self.rot.T + self.trans
        return out[0] if np.asarray(points).ndim == 1 else out

    def compose(self, other: "Isometry") -> "Isometry":
        """self after other: (self*other)(x) = self(other(x))."""
        return Isometry(self.rot @ other.rot, self.rot @ other.trans + self.trans)

    @staticmethod
    def about_line(point: np.ndarray, axis: np.ndarray, angle: float) -> "Isometry":
        """Rotation by angle about the line through `point` with direction `axis`."""
        point = np.asarray(point, dtype=float)
        rot = rotation_about_axis(axis, angle)
        return Isometry(rot, point - rot @ point)

    def distance_to(self, other: "Isometry") -> float:
        return float(
            np.linalg.norm(self.rot - other.rot) + np.linalg.norm(self.trans - other.trans)
        )
