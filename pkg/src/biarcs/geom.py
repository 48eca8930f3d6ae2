"""Closed-form primitives on points and directions in R^3.

Vectors are numpy arrays of shape (3,). Degenerate configurations that have
no finite answer (collinear triples, points on a tangent line) return
``math.inf``; genuinely ill-posed inputs (coincident points, non-unit
directions) raise ``ValueError``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Equality of unit vectors and classification tests.
UNIT_TOL = 1e-9
# Cross products below this times (scale)^2 count as collinear.
COLLINEAR_TOL = 1e-12


def as_vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    return a


def norm(v) -> float:
    return float(np.linalg.norm(v))


def normalize(v) -> np.ndarray:
    a = as_vec3(v)
    n = norm(a)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return a / n


def require_unit(v, tol: float = UNIT_TOL) -> np.ndarray:
    a = as_vec3(v)
    if abs(norm(a) - 1.0) > tol:
        raise ValueError(f"direction is not unit length: |v| = {norm(a)!r}")
    return a


@dataclass(frozen=True)
class Line:
    """Straight line ``base + R * direction`` with a unit direction."""

    base: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", as_vec3(self.base))
        object.__setattr__(self, "direction", require_unit(self.direction, 1e-12))

    def distance_to(self, point) -> float:
        d = as_vec3(point) - self.base
        return norm(d - np.dot(d, self.direction) * self.direction)


def reflect_about(e, v) -> np.ndarray:
    """Reflect v at the axis spanned by the unit vector e: (2 e e^T - Id) v."""
    e = require_unit(e)
    v = as_vec3(v)
    return 2.0 * np.dot(e, v) * e - v


def circumradius(x, y, z) -> float:
    """Radius of the circle through three points; ``inf`` if collinear."""
    x, y, z = as_vec3(x), as_vec3(y), as_vec3(z)
    a = y - x
    b = z - x
    c = z - y
    la, lb, lc = norm(a), norm(b), norm(c)
    scale = max(la, lb, lc)
    if min(la, lb, lc) == 0.0:
        raise ValueError("circumradius needs three pairwise distinct points")
    cross = norm(np.cross(a, b))
    if cross <= COLLINEAR_TOL * scale * scale:
        return math.inf
    return la * lb * lc / (2.0 * cross)


def tangent_point_radius(p, t, q) -> float:
    """Radius of the circle through p and q that is tangent to t at p.

    Returns ``inf`` when q lies on the tangent line through p.
    """
    p = as_vec3(p)
    q = as_vec3(q)
    t = require_unit(t)
    d = q - p
    dist2 = float(np.dot(d, d))
    if dist2 == 0.0:
        raise ValueError("tangent-point radius needs two distinct points")
    h = norm(d - np.dot(d, t) * t)
    if h == 0.0:
        return math.inf
    return dist2 / (2.0 * h)


def project_onto_direction(t, v) -> np.ndarray:
    """Orthogonal projection of v onto the span of the unit vector t."""
    t = require_unit(t)
    v = as_vec3(v)
    return np.dot(v, t) * t
