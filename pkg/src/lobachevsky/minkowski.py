"""Minkowski space R^{n,1} and the hyperboloid model of H^2 and H^3.

Points of H^n live on the upper sheet of <x, x>_M = -r^2 where

    <u, v>_M = -u_0 v_0 + u_1 v_1 + ... + u_n v_n

and r > 0 is the curvature radius (sectional curvature -1/r^2). Geodesics
are plane sections through the origin, ideal points are null rays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import null_space

from . import kernels

SHEET_TOL = 1e-9
ACOSH_GUARD = 1e-12
IDEAL_TOL = 1e-9
DEGENERATE_TOL = 1e-10


class GeometryError(ValueError):
    """Invalid geometric input."""


class DegenerateError(GeometryError):
    """Coincident points, a point on a line, a collinear angle, ..."""


def _frozen(x):
    a = np.array(x, dtype=float)
    a.setflags(write=False)
    return a


def _check_r(r):
    r = float(r)
    if not (r > 0 and math.isfinite(r)):
        raise GeometryError(f"curvature radius must be positive and finite, got {r}")
    return r


def mdot(u, v):
    """Minkowski bilinear form, broadcasting over leading axes."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape[-1] != v.shape[-1]:
        raise ValueError(f"dimension mismatch: {u.shape[-1]} vs {v.shape[-1]}")
    out = np.sum(u * v, axis=-1) - 2.0 * u[..., 0] * v[..., 0]
    return float(out) if np.ndim(out) == 0 else out


def mnorm(v):
    """Length of a spacelike vector (zero for causal vectors)."""
    return math.sqrt(max(mdot(v, v), 0.0))


def mcomplement(vectors):
    """Orthonormal-free basis (columns) of the Minkowski orthogonal complement."""
    V = np.atleast_2d(np.asarray(vectors, dtype=float))
    J = np.ones(V.shape[1])
    J[0] = -1.0
    return null_space(V * J)


def _sheet_scale(x, r):
    # rounding in <x,x> grows with the coordinate size
    return r * r * max(1.0, x[0] * x[0] / (r * r))


@dataclass(frozen=True, eq=False)
class HPoint:
    """A point of H^n (n = 2 or 3) on the upper hyperboloid sheet."""

    x: np.ndarray
    r: float = 1.0

    def __post_init__(self):
        x = _frozen(self.x)
        r = _check_r(self.r)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "r", r)
        if x.shape not in ((3,), (4,)):
            raise GeometryError(f"HPoint needs 3 or 4 coordinates, got shape {x.shape}")
        if not np.all(np.isfinite(x)) or x[0] <= 0:
            raise GeometryError("point is not on the upper sheet")
        if abs(mdot(x, x) + r * r) >= SHEET_TOL * _sheet_scale(x, r):
            raise GeometryError(f"point off the hyperboloid: <x,x> = {mdot(x, x)}, r = {r}")

    @property
    def dim(self):
        return self.x.shape[0] - 1

    @classmethod
    def project(cls, x, r=1.0):
        """Rescale a future timelike vector onto the sheet of radius ``r``."""
        x = np.asarray(x, dtype=float)
        q = -mdot(x, x)
        if q <= 0:
            raise GeometryError("vector is not timelike")
        y = x * (r / math.sqrt(q))
        if y[0] < 0:
            y = -y
        return cls(y, r)

    @classmethod
    def origin(cls, n=2, r=1.0):
        x = np.zeros(n + 1)
        x[0] = r
        return cls(x, r)

    def rescaled(self, r_new):
        """Image under x -> (r_new / r) x, which carries the r-model to the r_new-model."""
        r_new = _check_r(r_new)
        return HPoint(self.x * (r_new / self.r), r_new)

    def __repr__(self):
        return f"HPoint({np.array2string(self.x, precision=6)}, r={self.r:g})"


@dataclass(frozen=True, eq=False)
class IdealPoint:
    """A null direction, normalized to xi_0 = 1."""

    xi: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        if xi.shape not in ((3,), (4,)) or xi[0] <= 0:
            raise GeometryError("ideal point needs a future null vector")
        xi = xi / xi[0]
        if abs(mdot(xi, xi)) > 1e-8:
            raise GeometryError(f"vector is not null: <xi,xi> = {mdot(xi, xi)}")
        # land exactly on the light cone
        spatial = xi[1:] / np.linalg.norm(xi[1:])
        object.__setattr__(self, "xi", _frozen(np.concatenate(([1.0], spatial))))

    @property
    def dim(self):
        return self.xi.shape[0] - 1

    def gap(self, other):
        return float(np.max(np.abs(self.xi - other.xi)))

    def close_to(self, other, tol=IDEAL_TOL):
        return self.gap(other) < tol

    def __repr__(self):
        return f"IdealPoint({np.array2string(self.xi, precision=6)})"


@dataclass(frozen=True, eq=False)
class Geodesic:
    """x(s) = base cosh(s/r) + r dir sinh(s/r), with dir a unit tangent at base."""

    base: HPoint
    direction: np.ndarray

    def __post_init__(self):
        v = _frozen(self.direction)
        object.__setattr__(self, "direction", v)
        if v.shape != self.base.x.shape:
            raise GeometryError("direction and base dimension differ")
        scale = max(1.0, float(np.max(np.abs(self.base.x))) / self.base.r)
        if abs(mdot(self.base.x, v)) > SHEET_TOL * self.base.r * scale:
            raise GeometryError("direction is not tangent at base")
        if abs(mdot(v, v) - 1.0) > SHEET_TOL * scale * scale:
            raise GeometryError("direction is not a unit spacelike vector")

    @property
    def r(self):
        return self.base.r

    @property
    def dim(self):
        return self.base.dim

    def coords(self, s):
        """Raw coordinates for an array of arc-length parameters, shape (len(s), n+1)."""
        t = np.asarray(s, dtype=float)[..., None] / self.r
        return self.base.x * np.cosh(t) + self.r * self.direction * np.sinh(t)

    def point_at(self, s):
        return point_at(self, s)

    def tangent_at(self, s):
        t = s / self.r
        return self.base.x * math.sinh(t) / self.r + self.direction * math.cosh(t)

    def reversed(self):
        return Geodesic(self.base, -self.direction)

    def rebased(self, s):
        """The same oriented geodesic with base moved to parameter ``s``."""
        return Geodesic(self.point_at(s), self.tangent_at(s))

    def ideal_endpoints(self):
        return ideal_endpoints(self)


class Perpendicular(NamedTuple):
    foot: HPoint
    parameter: float
    distance: float
    degenerate: bool


def _same_model(p, q):
    if p.r != q.r:
        raise GeometryError(f"points live in different models (r={p.r} vs r={q.r})")
    if p.dim != q.dim:
        raise GeometryError("points have different dimensions")


def distance(p, q):
    """Hyperbolic distance r*acosh(-<p,q>/r^2), evaluated in the chord form.

    2r*asinh(|p-q|_M / 2r) is the same function but keeps full relative
    precision for nearby points.
    """
    _same_model(p, q)
    diff = p.x - q.x
    q2 = mdot(diff, diff)
    if q2 < 0:
        # q2 = 2r^2 (acosh argument - 1)
        if q2 < -2 * ACOSH_GUARD * _sheet_scale(np.maximum(p.x, q.x), p.r):
            raise GeometryError("acosh argument below 1: points are not on one sheet")
        q2 = 0.0
    return 2.0 * p.r * math.asinh(math.sqrt(q2) / (2.0 * p.r))


def tangent_toward(p, q):
    """Unit tangent at p of the geodesic toward q."""
    _same_model(p, q)
    r = p.r
    w = q.x + (mdot(p.x, q.x) / (r * r)) * p.x
    n2 = mdot(w, w)
    if n2 <= 0 or distance(p, q) < DEGENERATE_TOL * r:
        raise DegenerateError("coincident points")
    return w / math.sqrt(n2)


def geodesic_through(p, q):
    """Geodesic with point_at(0) = p and point_at(distance(p, q)) = q."""
    return Geodesic(p, tangent_toward(p, q))


def point_at(g, s):
    x = g.coords(s)
    # rescaling adds ~eps * x0^2 noise; only do it when the drift is larger
    if abs(mdot(x, x) + g.r * g.r) < 1e-12 * _sheet_scale(x, g.r):
        return HPoint(x, g.r)
    return HPoint.project(x, g.r)


def _angle_between(u1, u2):
    # stable for angles near 0 and pi
    return 2.0 * math.atan2(mnorm(u1 - u2), mnorm(u1 + u2))


def angle_at(p, q1, q2):
    """Angle at p between the geodesics toward q1 and q2, in [0, pi]."""
    return _angle_between(tangent_toward(p, q1), tangent_toward(p, q2))


def tangent_angle(u1, u2):
    """Angle between two unit tangent vectors at the same point."""
    return _angle_between(np.asarray(u1) / mnorm(u1), np.asarray(u2) / mnorm(u2))


def _plane_coefficients(p, g):
    r = g.r
    a = -mdot(p.x, g.base.x) / (r * r)
    b = mdot(p.x, g.direction)
    return a, b


def drop_perpendicular(p, l):
    """Foot of the perpendicular from p to l (the nearest point of l).

    A point on l yields the point itself with ``degenerate=True``.
    """
    _same_model(p, l.base)
    r = l.r
    a, b = _plane_coefficients(p, l)
    s = r * math.atanh(max(-1.0, min(1.0, b / (r * a))))
    foot = point_at(l, s)
    d = distance(p, foot)
    return Perpendicular(foot, s, d, d < DEGENERATE_TOL * r)


def half_plane_normal(l, ref):
    """Spacelike normal of l's plane inside span(l, ref), positive on ref's side."""
    a, b = _plane_coefficients(ref, l)
    n = ref.x - (a * l.base.x + b * l.direction)
    nn = mnorm(n)
    if nn < DEGENERATE_TOL * ref.r:
        raise DegenerateError("reference point lies on the line")
    return n / nn


def ideal_endpoints(g):
    """(forward, backward) ideal endpoints: the null rays base +- r*dir."""
    # for far-out bases the sum cancels and misses the cone by ~eps * x0^2;
    # its spatial direction is still accurate, so put it back on the cone
    def ray(v):
        return IdealPoint(np.concatenate(([1.0], v[1:] / np.linalg.norm(v[1:]))))

    return ray(g.base.x + g.r * g.direction), ray(g.base.x - g.r * g.direction)


def geodesic_joining(xi_from, xi_to, r=1.0):
    """Geodesic running from ideal point ``xi_from`` to ``xi_to``."""
    r = _check_r(r)
    a, b = xi_to.xi, xi_from.xi
    k = -2.0 * mdot(a, b)
    if k <= 1e-24:
        raise DegenerateError("ideal endpoints coincide")
    base = HPoint.project(a + b, r)
    return Geodesic(base, (a - b) / math.sqrt(k))


@dataclass(frozen=True, eq=False)
class Isometry:
    """Linear map preserving the Minkowski form and the upper sheet."""

    L: np.ndarray

    def __post_init__(self):
        L = _frozen(self.L)
        object.__setattr__(self, "L", L)
        n = L.shape[0]
        J = np.diag([-1.0] + [1.0] * (n - 1))
        err = np.max(np.abs(L.T @ J @ L - J))
        if err > 1e-9 * max(1.0, float(np.max(np.abs(L))) ** 2):
            raise GeometryError(f"matrix does not preserve the Minkowski form (err {err:.3g})")
        if L[0, 0] <= 0:
            raise GeometryError("matrix swaps the two sheets")

    def __matmul__(self, other):
        return Isometry(self.L @ other.L)

    def inverse(self):
        n = self.L.shape[0]
        J = np.diag([-1.0] + [1.0] * (n - 1))
        return Isometry(J @ self.L.T @ J)

    def __call__(self, obj):
        if isinstance(obj, HPoint):
            return HPoint.project(self.L @ obj.x, obj.r)
        if isinstance(obj, Geodesic):
            base = self(obj.base)
            v = self.L @ obj.direction
            return Geodesic(base, v - mdot(v, base.x) / mdot(base.x, base.x) * base.x)
        if isinstance(obj, IdealPoint):
            return IdealPoint(self.L @ obj.xi)
        return self.L @ np.asarray(obj, dtype=float)


def translation_to(p):
    """The boost carrying the model origin to p along the geodesic joining them."""
    n, r = p.dim, p.r
    y = p.x / r
    sh = float(np.linalg.norm(y[1:]))
    L = np.eye(n + 1)
    if sh > 0:
        w = y[1:] / sh
        ch = y[0]
        L[0, 0] = ch
        L[0, 1:] = sh * w
        L[1:, 0] = sh * w
        L[1:, 1:] += (ch - 1.0) * np.outer(w, w)
    return Isometry(L)


def rotation(Q):
    """Rotation of the spatial axes about the model origin."""
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0]
    L = np.eye(n + 1)
    L[1:, 1:] = Q
    if np.linalg.det(Q) < 0:
        L[1:, 1] *= -1
    return Isometry(L)


def random_isometry(n, rng, max_shift=1.0):
    """Rotation, boost of length <= max_shift, rotation."""
    def rot():
        q, rr = np.linalg.qr(rng.normal(size=(n, n)))
        return rotation(q * np.sign(np.diag(rr)))
    t = rng.uniform(0.0, max_shift)
    boost = translation_to(HPoint(np.concatenate(([math.cosh(t), math.sinh(t)], np.zeros(n - 1)))))
    return rot() @ boost @ rot()


def random_point(n, rng, r=1.0, spread=1.0):
    """A point at distance <= spread*r from the origin, direction uniform."""
    d = rng.uniform(0.0, spread)
    w = rng.normal(size=n)
    w /= np.linalg.norm(w)
    return HPoint(r * np.concatenate(([math.cosh(d)], math.sinh(d) * w)), r)
