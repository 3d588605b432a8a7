"""Closed-form kinematics of flat-foldable degree-4 vertices.

A flat-foldable degree-4 vertex has sectors (α, β, π−α, π−β)
counterclockwise, with crease e_1 between α and β.  Along each of its two
folding modes the tangents of the half fold angles stay proportional:
tan(ρ_i/2) = m_i·t.  The parameter t is canonical everywhere in this
package; fold angles are derived from it, never integrated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from .pattern import VertexStar, is_flat_foldable_deg4

DEGENERACY_TOL = 1e-12


class KinematicsError(ValueError):
    """Raised for kinematically invalid inputs (poles, wrong vertex type)."""


class FoldMode(Enum):
    A = "a"
    B = "b"


def tan_half(angle: float) -> float:
    """tan(angle/2) with an explicit error at the pole angle = pi."""
    if not -1e-12 <= angle <= math.pi - 1e-12:
        raise KinematicsError(f"angle {angle!r} outside [0, pi) hits a tangent pole")
    return math.tan(0.5 * max(angle, 0.0))


def p_coeff(alpha: float, beta: float) -> float:
    """(1 − tan(α/2)tan(β/2)) / (1 + tan(α/2)tan(β/2)).

    Equals cos((α+β)/2)/cos((α−β)/2); the fold-speed ratio of the minor
    creases relative to the major ones at a vertex with sectors (α, β,
    π−α, π−β).
    """
    ta, tb = tan_half(alpha), tan_half(beta)
    return (1.0 - ta * tb) / (1.0 + ta * tb)


def q_coeff(alpha: float, beta: float) -> float:
    """(−tan(α/2) + tan(β/2)) / (tan(α/2) + tan(β/2))."""
    ta, tb = tan_half(alpha), tan_half(beta)
    if ta + tb < DEGENERACY_TOL:
        raise KinematicsError("q undefined for alpha = beta = 0")
    return (tb - ta) / (ta + tb)


@dataclass(frozen=True)
class SpeedCoefficient:
    """Constant ratio tan(ρ_to/2) / tan(ρ_from/2) between adjacent creases."""

    value: float

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class ModeVector:
    """Multipliers m_0..m_3 with tan(ρ_i/2) = m_i·t, in star crease order.

    ``degenerate`` marks a vanishing minor coefficient (p or q equal to 0):
    the two frozen creases make the vector unusable for speed ratios and
    for driving doubled patterns, though the motion itself is still valid.
    """

    multipliers: tuple[float, float, float, float]
    mode: FoldMode
    degenerate: bool

    def __iter__(self):
        return iter(self.multipliers)

    def __getitem__(self, i: int) -> float:
        return self.multipliers[i]


def mode_vector(star: VertexStar, mode: FoldMode) -> ModeVector:
    """Fold-speed multipliers of one folding mode.

    Mode a: (1, −p(α,β), 1, p(α,β)) with e_0, e_2 major.
    Mode b: (−q(α,β), 1, q(α,β), 1) with e_1, e_3 major.
    """
    if not is_flat_foldable_deg4(star):
        raise KinematicsError("mode_vector requires a flat-foldable degree-4 vertex")
    alpha, beta = star.sectors[0], star.sectors[1]
    if mode is FoldMode.A:
        p = p_coeff(alpha, beta)
        return ModeVector((1.0, -p, 1.0, p), mode, abs(p) < DEGENERACY_TOL)
    q = q_coeff(alpha, beta)
    return ModeVector((-q, 1.0, q, 1.0), mode, abs(q) < DEGENERACY_TOL)


def fold_angles_at(star: VertexStar, mode: FoldMode, t: float) -> np.ndarray:
    """Fold angles ρ_i = 2·arctan(m_i·t), ordered like star.crease_ids.

    t = 0 is the unfolded state; t → ±∞ drives the major creases to ±π.
    """
    mv = mode_vector(star, mode)
    return 2.0 * np.arctan(np.array(mv.multipliers) * float(t))


def speed_coefficient(star: VertexStar, mode: FoldMode, from_crease: int) -> SpeedCoefficient:
    """Ratio m_{i+1}/m_i taking crease index i to its counterclockwise neighbor."""
    mv = mode_vector(star, mode)
    cur = mv[from_crease % 4]
    nxt = mv[(from_crease + 1) % 4]
    if abs(cur) < DEGENERACY_TOL:
        raise KinematicsError("speed coefficient from a frozen crease is undefined")
    return SpeedCoefficient(nxt / cur)


def loop_closure_product(coefficients: Iterable[SpeedCoefficient | float]) -> float:
    """Product of speed coefficients around one interior face.

    The face admits the finite rigid folding iff the product is 1.
    """
    values = [float(c) for c in coefficients]
    if not values:
        raise KinematicsError("loop closure product of an empty sequence")
    return math.prod(values)
