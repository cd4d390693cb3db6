"""Horocycles and horospheres as level sets of -<x, xi>_M, and their flat charts.

A chart parametrizes the horosphere through xi by

    embed(u) = p + sum_i u_i e_i + |u|^2 / (2 r^2) * xi_hat

with p on the surface, xi_hat = xi * r / level (so that -<p, xi_hat> = r^2)
and e_i orthonormal spacelike vectors orthogonal to p and xi. The pullback
of the Minkowski form under this map is |du|^2, so chart coordinates are
intrinsically Euclidean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .minkowski import (
    DegenerateError,
    GeometryError,
    HPoint,
    IdealPoint,
    _check_r,
    angle_at,
    distance,
    mcomplement,
    mdot,
    mnorm,
    tangent_angle,
)

MEMBER_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Horosphere:
    """{x on the sheet : -<x, xi>_M = level * r}; a horocycle when n = 2."""

    ideal: IdealPoint
    level: float
    r: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "r", _check_r(self.r))
        if not self.level > 0:
            raise GeometryError("horosphere level must be positive")

    @property
    def dim(self):
        return self.ideal.dim

    def busemann(self, x):
        """-<x, xi>/r, constant (= level) on the surface."""
        x = x.x if isinstance(x, HPoint) else x
        return -mdot(x, self.ideal.xi) / self.r

    def contains(self, p, tol=MEMBER_TOL):
        return abs(self.busemann(p) - self.level) <= tol * self.level

    @cached_property
    def chart(self):
        return chart(self)


def horosphere_through(p, xi):
    return Horosphere(xi, -mdot(p.x, xi.xi) / p.r, p.r)


def _complement_basis(p, xi_hat, r, n):
    basis = []
    for k in range(1, n + 1):
        y = np.zeros(n + 1)
        y[k] = 1.0
        # remove span(p, xi_hat) using <p,p> = -r^2, <p,xi_hat> = -r^2, <xi_hat,xi_hat> = 0
        alpha = -mdot(y, xi_hat) / (r * r)
        beta = (mdot(y, xi_hat) - mdot(y, p)) / (r * r)
        y = y - alpha * p - beta * xi_hat
        for e in basis:
            y = y - mdot(y, e) * e
        nrm = mnorm(y)
        if nrm > 1e-6:
            basis.append(y / nrm)
        if len(basis) == n - 1:
            break
    return np.array(basis)


@dataclass(frozen=True, eq=False)
class HoroChart:
    """Flat coordinates on a horosphere."""

    horosphere: Horosphere
    base: HPoint
    xi_hat: np.ndarray
    frame: np.ndarray  # rows e_1 .. e_{n-1}

    @property
    def r(self):
        return self.horosphere.r

    def embed_many(self, U):
        U = np.atleast_2d(np.asarray(U, dtype=float))
        sq = np.sum(U * U, axis=1)[:, None]
        return self.base.x + U @ self.frame + sq / (2 * self.r ** 2) * self.xi_hat

    def embed(self, u):
        return HPoint(self.embed_many(np.reshape(u, (1, -1)))[0], self.r)

    def coords(self, x):
        x = x.x if isinstance(x, HPoint) else np.asarray(x, dtype=float)
        return np.array([mdot(x, e) for e in self.frame])

    def tangent(self, u, d):
        """Derivative of embed along chart direction d at u."""
        u = np.asarray(u, dtype=float)
        d = np.asarray(d, dtype=float)
        return d @ self.frame + (u @ d) / self.r ** 2 * self.xi_hat


def chart(h):
    """Chart based at the point of h on the geodesic from the model origin toward xi."""
    r, n = h.r, h.dim
    xi = h.ideal.xi
    o = np.zeros(n + 1)
    o[0] = r
    u = xi - o / r
    t = -math.log(h.level)  # in units of r
    p = HPoint.project(o * math.cosh(t) + r * u * math.sinh(t), r)
    xi_hat = xi * r / h.level
    return HoroChart(h, p, xi_hat, _complement_basis(p.x, xi_hat, r, n))


def _check_on(h, *points):
    for p in points:
        if not h.contains(p):
            raise GeometryError("point is not on the horosphere")


def intrinsic_distance(h, x, y):
    """Length of the shortest path inside the surface from x to y."""
    _check_on(h, x, y)
    c = h.chart
    return float(np.linalg.norm(c.coords(x) - c.coords(y)))


def path_length_oracle(h, x, y, segments=(64, 128, 256)):
    """Length of the chart segment from x to y as measured by ambient distances.

    Chord sums over the given segment counts, Richardson-extrapolated
    twice (the chord error expands in even powers of the step).
    """
    _check_on(h, x, y)
    c = h.chart
    ua, ub = c.coords(x), c.coords(y)
    sums = []
    for m in segments:
        t = np.linspace(0.0, 1.0, m + 1)[:, None]
        sums.append(kernels.chord_length(c.embed_many(ua + t * (ub - ua)), h.r))
    if len(sums) == 1:
        return sums[0]
    first = [(4 * b - a) / 3 for a, b in zip(sums, sums[1:])]
    if len(first) == 1:
        return first[0]
    return (16 * first[1] - first[0]) / 15


@dataclass(frozen=True, eq=False)
class HorocycleArc:
    """Image of the chart segment start -> end."""

    chart: HoroChart
    start: np.ndarray
    end: np.ndarray

    @property
    def direction(self):
        d = np.asarray(self.end, float) - np.asarray(self.start, float)
        return d / np.linalg.norm(d)

    def chart_point(self, t):
        """Chart point at arc length t from start."""
        return np.asarray(self.start, float) + t * self.direction

    def sample(self, ts):
        ts = np.asarray(ts, dtype=float)[:, None]
        return self.chart.embed_many(np.asarray(self.start, float) + ts * self.direction)

    def length(self):
        return float(np.linalg.norm(np.asarray(self.end, float) - np.asarray(self.start, float)))

    def flat_basis(self):
        """Spanning vectors of the linear 3-flat containing the curve and xi."""
        c = self.chart
        return np.array([c.embed(self.start).x, self.direction @ c.frame, c.xi_hat])

    def flat_normal(self):
        """Unit spacelike normal of that flat (H^3 only)."""
        if self.chart.horosphere.dim != 3:
            raise GeometryError("flat normal only defined for horospheres in H^3")
        n = mcomplement(self.flat_basis())[:, 0]
        return n / mnorm(n)


def horocycle_section(h, point, direction):
    """The horocycle on h over the chart line through ``point`` along ``direction``.

    It lies in the totally geodesic plane through its points and xi, i.e.
    the plane parallel to the pencil of xi that cuts it out of h.
    """
    d = np.atleast_1d(np.asarray(direction, dtype=float))
    if np.linalg.norm(d) == 0:
        raise DegenerateError("zero direction")
    p = np.atleast_1d(np.asarray(point, dtype=float))
    return HorocycleArc(h.chart, p, p + d)


def section_chart_line(h, normal):
    """Chart line cut out of h by the linear flat with Minkowski normal ``normal``.

    Returns (point, unit direction) or raises if the flat does not contain xi.
    """
    c = h.chart
    if abs(mdot(normal, c.xi_hat)) > 1e-9 * np.linalg.norm(c.xi_hat):
        raise GeometryError("flat does not contain the ideal point")
    g = np.array([mdot(normal, e) for e in c.frame])
    k = mdot(normal, c.base.x)
    gg = float(g @ g)
    if gg < 1e-24:
        raise GeometryError("flat is tangent to the pencil direction")
    # <normal, embed(u)> = k + g.u on the surface
    point = -k * g / gg
    d = np.array([-g[1], g[0]]) / math.sqrt(gg)
    return point, d


def surface_normal_alignment(h, u, step=1e-4):
    """|cos| of the angle between the surface normal at embed(u) and the pencil direction.

    Surface tangents come from central differences of the chart map.
    """
    c = h.chart
    u = np.asarray(u, dtype=float)
    x = c.embed(u)
    tangents = []
    for i in range(len(u)):
        du = np.zeros_like(u)
        du[i] = step
        tangents.append((c.embed_many(u + du)[0] - c.embed_many(u - du)[0]) / (2 * step))
    normal = mcomplement(np.vstack([x.x] + tangents))[:, 0]
    xi = h.ideal.xi
    lam = -h.r ** 2 / mdot(xi, x.x)
    toward = (lam * xi - x.x) / h.r
    return abs(mdot(normal, toward)) / (mnorm(normal) * mnorm(toward))


class TriangleResiduals(NamedTuple):
    sides: tuple
    angles: tuple
    angle_sum_residual: float
    law_of_cosines_residual: float
    ambient_angle_sum: float


def euclidean_triangle_check(h, u1, u2, u3, min_area=1e-6):
    """Measure a horospherical triangle on the embedded surface.

    Sides are intrinsic distances between the embedded vertices; angles are
    taken between embedded horocycle tangents. Also reports the angle sum of
    the ambient geodesic triangle on the same vertices.
    """
    U = [np.asarray(u, dtype=float) for u in (u1, u2, u3)]
    e1, e2 = U[1] - U[0], U[2] - U[0]
    area = 0.5 * abs(e1[0] * e2[1] - e1[1] * e2[0])
    if area <= min_area:
        raise DegenerateError(f"triangle area {area:.3g} below {min_area}")
    c = h.chart
    X = [c.embed(u) for u in U]
    # side k is opposite vertex k
    sides = tuple(intrinsic_distance(h, X[(k + 1) % 3], X[(k + 2) % 3]) for k in range(3))
    angles = []
    for k in range(3):
        i, j = (k + 1) % 3, (k + 2) % 3
        t1 = c.tangent(U[k], (U[i] - U[k]) / np.linalg.norm(U[i] - U[k]))
        t2 = c.tangent(U[k], (U[j] - U[k]) / np.linalg.norm(U[j] - U[k]))
        angles.append(tangent_angle(t1, t2))
    loc = 0.0
    for k in range(3):
        a, b, cc = sides[(k + 1) % 3], sides[(k + 2) % 3], sides[k]
        loc = max(loc, abs(cc * cc - a * a - b * b + 2 * a * b * math.cos(angles[k])))
    ambient = sum(angle_at(X[k], X[(k + 1) % 3], X[(k + 2) % 3]) for k in range(3))
    return TriangleResiduals(sides, tuple(angles), sum(angles) - math.pi, loc, ambient)


@dataclass
class APReport:
    samples: int
    failures: int = 0
    uniqueness_failures: int = 0
    separation_failures: int = 0
    perturbed_misses: int = 0
    min_separation_ratio: float = math.inf
    max_intersection_error: float = 0.0


def _affine_root(f, scale):
    """Root of an (affine) function, bracketing outward from 0."""
    f0 = f(0.0)
    if f0 == 0:
        return 0.0
    t = scale
    while t < 1e9:
        for b in (t, -t):
            if f(b) * f0 < 0:
                return brentq(f, min(0.0, b), max(0.0, b), xtol=1e-12, rtol=1e-14)
        t *= 4
    return None


def verify_AP(h, samples, rng, perturbation=1e-3, directions=181, window=8.0):
    """Check the parallel axiom for chart lines on a horosphere in H^3.

    For each random line L and point P off L: exactly one of the sampled
    lines through P misses L in the chart; on the embedded surface that
    parallel keeps a positive ambient distance from L's horocycle; and a
    line turned by ``perturbation`` radians does reach L's section plane at
    a point of L.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if h.dim != 3:
        raise GeometryError("AP check needs a horosphere in H^3")
    c = h.chart
    rep = APReport(samples)
    ts = np.linspace(-window, window, 81)
    for _ in range(samples):
        q = rng.uniform(-3, 3, size=2)
        phi = rng.uniform(0, math.pi)
        d = np.array([math.cos(phi), math.sin(phi)])
        nrm = np.array([-d[1], d[0]])
        delta = rng.uniform(0.1, 2.0) * rng.choice([-1.0, 1.0])
        P = q + delta * nrm
        failed = False

        # chart: directions through P, the parallel one included
        psis = phi + math.pi * (np.arange(directions) + 0.5) / directions
        cands = np.vstack([np.column_stack([np.cos(psis), np.sin(psis)]), d])
        dets = cands[:, 0] * d[1] - cands[:, 1] * d[0]
        if int(np.sum(np.abs(dets) < 1e-12)) != 1:
            rep.uniqueness_failures += 1
            failed = True

        # embedded: the parallel horocycle stays off L's horocycle
        L = horocycle_section(h, q, d)
        M = horocycle_section(h, P, d)
        XL, XM = L.sample(ts), M.sample(ts)
        diff = XL[:, None, :] - XM[None, :, :]
        q2 = np.maximum(np.sum(diff * diff, axis=-1) - 2 * diff[..., 0] ** 2, 0.0)
        dmin = float(np.min(2 * h.r * np.arcsinh(np.sqrt(q2) / (2 * h.r))))
        bound = 2 * h.r * math.asinh(abs(delta) / (2 * h.r))
        ratio = dmin / bound
        rep.min_separation_ratio = min(rep.min_separation_ratio, ratio)
        n_L = L.flat_normal()
        off = [mdot(n_L, x) for x in XM]
        if ratio < 1 - 1e-9 or min(abs(v) for v in off) < 1e-9 or np.ptp(off) > 1e-9 * max(1.0, abs(off[0])):
            rep.separation_failures += 1
            failed = True

        # a slightly turned line through P reaches L
        sgn = rng.choice([-1.0, 1.0])
        psi = phi + sgn * perturbation
        dp = np.array([math.cos(psi), math.sin(psi)])
        T = horocycle_section(h, P, dp)
        t_hit = _affine_root(lambda t: mdot(n_L, c.embed_many(T.chart_point(t))[0]), 1.0)
        if t_hit is None:
            rep.perturbed_misses += 1
            failed = True
        else:
            u_hit = c.coords(c.embed_many(T.chart_point(t_hit))[0])
            err = abs((u_hit - q) @ nrm) / max(1.0, float(np.linalg.norm(u_hit)))
            rep.max_intersection_error = max(rep.max_intersection_error, err)
            if err > 1e-6:
                rep.perturbed_misses += 1
                failed = True
        rep.failures += failed
    return rep
