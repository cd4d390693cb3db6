"""Right-triangle trigonometry in the three constant-curvature geometries.

Hyperbolic identities (right angle at C, curvature radius r):

    cosh c = cosh a cosh b
    sinh a = sinh c sin A
    tanh b = tanh c cos A
    cos A  = cosh a sin B

Replacing a, b, c by ia, ib, ic in the spherical counterparts reproduces
them: the first and last verbatim, the middle two up to a factor i.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .minkowski import (
    HPoint,
    angle_at,
    distance,
    point_at,
    random_isometry,
    Geodesic,
)
from .parallels import angle_of_parallelism

RIGHT_ANGLE_TOL = 1e-8
IDENTITY_NAMES = ("pythagorean", "sine", "tangent", "angle_cosine")
# spherical identity at (ia, ib, ic) == factor * hyperbolic identity at (a, b, c)
SUBSTITUTION_FACTORS = (1, 1j, 1j, 1)


@dataclass(frozen=True)
class TriangleMeasurements:
    a: float
    b: float
    c: float
    A: float
    B: float
    C: float
    geometry: str = "hyperbolic"  # hyperbolic | spherical | euclidean
    radius: float = 1.0

    def __post_init__(self):
        if self.geometry not in ("hyperbolic", "spherical", "euclidean"):
            raise ValueError(f"unknown geometry {self.geometry!r}")
        if min(self.a, self.b, self.c) < 0 or min(self.A, self.B, self.C) < 0:
            raise ValueError("sides and angles must be nonnegative")


class IdentityResiduals(NamedTuple):
    pythagorean: float
    sine: float
    tangent: float
    angle_cosine: float

    def max(self):
        return max(abs(v) for v in self)


def _require_right(t, geometry):
    if t.geometry != geometry:
        raise ValueError(f"expected a {geometry} triangle, got {t.geometry}")
    if abs(t.C - math.pi / 2) > RIGHT_ANGLE_TOL:
        raise ValueError(f"angle C = {t.C} is not a right angle")


def hyperbolic_identities(a, b, c, A, B, r=1.0):
    """The four right-triangle identities as (lhs - rhs) values."""
    a, b, c = a / r, b / r, c / r
    return IdentityResiduals(
        math.cosh(c) - math.cosh(a) * math.cosh(b),
        math.sinh(a) - math.sinh(c) * math.sin(A),
        math.tanh(b) - math.tanh(c) * math.cos(A),
        math.cos(A) - math.cosh(a) * math.sin(B),
    )


def spherical_identities(a, b, c, A, B, R=1.0):
    """Spherical counterparts; sides may be complex."""
    a, b, c = a / R, b / R, c / R
    return (
        cmath.cos(c) - cmath.cos(a) * cmath.cos(b),
        cmath.sin(a) - cmath.sin(c) * math.sin(A),
        cmath.tan(b) - cmath.tan(c) * math.cos(A),
        math.cos(A) - cmath.cos(a) * math.sin(B),
    )


def hyperbolic_right_residuals(t):
    _require_right(t, "hyperbolic")
    return hyperbolic_identities(t.a, t.b, t.c, t.A, t.B, t.radius)


def spherical_right_residuals(t):
    """Spherical residuals; the tangent identity is multiplied through by cos b cos c.

    That form stays finite when a side reaches a quarter great circle.
    """
    _require_right(t, "spherical")
    R = t.radius
    if max(t.a, t.b, t.c) >= math.pi * R:
        raise ValueError("spherical sides must be shorter than pi*R")
    a, b, c = t.a / R, t.b / R, t.c / R
    return IdentityResiduals(
        math.cos(c) - math.cos(a) * math.cos(b),
        math.sin(a) - math.sin(c) * math.sin(t.A),
        math.sin(b) * math.cos(c) - math.cos(b) * math.sin(c) * math.cos(t.A),
        math.cos(t.A) - math.cos(a) * math.sin(t.B),
    )


def substitution_report(a, b, c, A, B):
    """Per identity: spherical value at imaginary sides vs factor * hyperbolic value."""
    sph = spherical_identities(1j * a, 1j * b, 1j * c, A, B)
    hyp = hyperbolic_identities(a, b, c, A, B)
    rows = []
    for name, s, h, f in zip(IDENTITY_NAMES, sph, hyp, SUBSTITUTION_FACTORS):
        rows.append({
            "identity": name,
            "factor": "i" if f == 1j else "1",
            "spherical_at_imaginary": [s.real, s.imag],
            "hyperbolic": h,
            "residual": abs(s - f * h),
        })
    return rows


def imaginary_substitution_residual(a, b, c, A, B):
    return max(row["residual"] for row in substitution_report(a, b, c, A, B))


def synthesize_right_triangle(a, b, r=1.0, isometry=None):
    """Vertices (A, B, C) of a right triangle with legs BC = a, CA = b in H^2."""
    C = HPoint.origin(2, r)
    leg_a = Geodesic(C, np.array([0.0, 1.0, 0.0]))
    leg_b = Geodesic(C, np.array([0.0, 0.0, 1.0]))
    B_ = point_at(leg_a, a)
    A_ = point_at(leg_b, b)
    pts = (A_, B_, C)
    if isometry is not None:
        pts = tuple(isometry(p) for p in pts)
    return pts


def measure_triangle(A_, B_, C_, r):
    return TriangleMeasurements(
        a=distance(B_, C_), b=distance(C_, A_), c=distance(A_, B_),
        A=angle_at(A_, B_, C_), B=angle_at(B_, C_, A_), C=angle_at(C_, A_, B_),
        geometry="hyperbolic", radius=r)


def accordance_check(n, r=1.0, seed=0):
    """Measure n synthesized right triangles and evaluate the four identities on them."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    worst = [0.0] * 4
    max_right = 0.0
    for _ in range(n):
        a, b = rng.uniform(0.1, 2.0, size=2) * r
        iso = random_isometry(2, rng, max_shift=1.0)
        # Lorentz matrices act on every r-model alike
        t = measure_triangle(*synthesize_right_triangle(a, b, r, iso), r)
        max_right = max(max_right, abs(t.C - math.pi / 2))
        res = hyperbolic_right_residuals(t)
        worst = [max(w, abs(v)) for w, v in zip(worst, res)]
    return {
        "n": n,
        "r": r,
        "seed": seed,
        "max_right_angle_error": max_right,
        "max_residuals": dict(zip(IDENTITY_NAMES, worst)),
        "max_residual": max(worst),
    }


def accordance_json(n, r=1.0, seed=0):
    return json.dumps(accordance_check(n, r, seed), sort_keys=True, indent=2)


def parallelism_identity_check(d, r=1.0):
    """sin(Pi(d)) * cosh(d/r) - 1, which vanishes identically."""
    return math.sin(angle_of_parallelism(d, r)) * math.cosh(d / r) - 1.0


def pythagorean_defect(a, b, r):
    """c^2 - a^2 - b^2 for the hyperbolic right triangle with legs a, b."""
    t = measure_triangle(*synthesize_right_triangle(a, b, r), r)
    return t.c ** 2 - a ** 2 - b ** 2


def euclidean_limit_exponent(a=1.0, b=1.0, radii=(10.0, 30.0, 100.0, 300.0)):
    """Decay exponent p in |c^2 - a^2 - b^2| ~ r^(-p), from a log-log fit."""
    defects = [abs(pythagorean_defect(a, b, r)) for r in radii]
    slope = np.polyfit(np.log(radii), np.log(defects), 1)[0]
    return float(-slope), defects


def sphere_right_triangle(a, b, rng=None, R=1.0):
    """Right triangle on the sphere of radius R, measured extrinsically in R^3.

    Returns TriangleMeasurements built from great-circle arcs and the
    angles between tangent vectors at the vertices.
    """
    Q = np.eye(3)
    if rng is not None:
        Q, rr = np.linalg.qr(rng.normal(size=(3, 3)))
        Q = Q * np.sign(np.diag(rr))
    C = Q @ np.array([0.0, 0.0, 1.0])
    e1, e2 = Q @ np.array([1.0, 0.0, 0.0]), Q @ np.array([0.0, 1.0, 0.0])
    B_ = math.cos(a / R) * C + math.sin(a / R) * e1
    A_ = math.cos(b / R) * C + math.sin(b / R) * e2

    def arc(x, y):
        return R * math.atan2(np.linalg.norm(np.cross(x, y)), float(x @ y))

    def tangent(x, y):
        t = y - (x @ y) * x
        return t / np.linalg.norm(t)

    def ang(v, x, y):
        t1, t2 = tangent(v, x), tangent(v, y)
        return 2 * math.atan2(np.linalg.norm(t1 - t2), np.linalg.norm(t1 + t2))

    return TriangleMeasurements(
        a=arc(B_, C), b=arc(C, A_), c=arc(A_, B_),
        A=ang(A_, B_, C), B=ang(B_, C, A_), C=ang(C, A_, B_),
        geometry="spherical", radius=R)
