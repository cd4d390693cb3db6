"""Angle of parallelism, the two boundary parallels, and line classification."""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from . import kernels
from .minkowski import (
    DEGENERATE_TOL,
    IDEAL_TOL,
    DegenerateError,
    Geodesic,
    GeometryError,
    HPoint,
    IdealPoint,
    _check_r,
    angle_at,
    distance,
    drop_perpendicular,
    geodesic_joining,
    half_plane_normal,
    ideal_endpoints,
    mdot,
    mnorm,
    tangent_toward,
)

log = logging.getLogger(__name__)

BISECTION_CAP = 60


def angle_of_parallelism(d, r=1.0):
    """Boundary angle at distance d: tan(alpha/2) = exp(-d/r)."""
    r = _check_r(r)
    if d < 0:
        raise ValueError(f"distance must be nonnegative, got {d}")
    return 2.0 * math.atan(math.exp(-d / r))


def angle_of_parallelism_general(d, a):
    """Boundary angle with an arbitrary base: tan(alpha/2) = a**(-d)."""
    if not a > 1:
        raise ValueError(f"base must exceed 1, got {a}")
    if d < 0:
        raise ValueError(f"distance must be nonnegative, got {d}")
    return 2.0 * math.atan(a ** (-d))


class Relation(enum.Enum):
    SECANT = "secant"
    BOUNDARY_PARALLEL_LEFT = "boundary-parallel-left"
    BOUNDARY_PARALLEL_RIGHT = "boundary-parallel-right"
    ULTRAPARALLEL = "ultraparallel"


@dataclass(frozen=True, eq=False)
class LineRelation:
    kind: Relation
    point: Optional[HPoint] = None
    ideal: Optional[IdealPoint] = None
    feet: Optional[Tuple[HPoint, HPoint]] = None

    def __post_init__(self):
        witnesses = (self.point is not None, self.ideal is not None, self.feet is not None)
        expected = {
            Relation.SECANT: (True, False, False),
            Relation.ULTRAPARALLEL: (False, False, True),
        }.get(self.kind, (False, True, False))
        if witnesses != expected:
            raise ValueError(f"witness does not match relation {self.kind.value}")

    @property
    def is_boundary_parallel(self):
        return self.kind in (Relation.BOUNDARY_PARALLEL_LEFT, Relation.BOUNDARY_PARALLEL_RIGHT)


def side_label(P, S, xi, line=None):
    """Left/right label of the parallel through P toward xi.

    In H^2 the sign of det[P, S, xi] decides (positive is right). In H^3 that
    determinant is not defined, so a parallel toward the reference line's
    forward endpoint is right.
    """
    if P.dim == 2:
        det = np.linalg.det(np.stack([P.x, S.x, xi.xi]))
        return Relation.BOUNDARY_PARALLEL_RIGHT if det > 0 else Relation.BOUNDARY_PARALLEL_LEFT
    if line is None:
        raise ValueError("H^3 labels need the reference line")
    fwd, _ = ideal_endpoints(line)
    return Relation.BOUNDARY_PARALLEL_RIGHT if fwd.close_to(xi) else Relation.BOUNDARY_PARALLEL_LEFT


def _shared_endpoints(l1, l2, tol):
    shared = []
    for a in ideal_endpoints(l1):
        for b in ideal_endpoints(l2):
            gap = a.gap(b)
            if gap < tol:
                if gap > 0:
                    log.debug("ideal points identified within tolerance (gap %.3g)", gap)
                shared.append(b)
    return shared


def closest_points(l1, l2):
    """Parameters (s1, s2) minimizing the distance between two non-asymptotic geodesics.

    Writing each geodesic through its null endpoints E+ and E-, the quantity
    -<x1(s1), x2(s2)> splits into two independent cosh-type terms whose
    minima are available in closed form.
    """
    r = l1.r
    E1 = (l1.base.x + r * l1.direction, l1.base.x - r * l1.direction)
    E2 = (l2.base.x + r * l2.direction, l2.base.x - r * l2.direction)
    A = [[-mdot(a, b) for b in E2] for a in E1]
    if min(min(row) for row in A) <= 0:
        raise DegenerateError("geodesics share an ideal endpoint")
    u = 0.5 * math.log(A[1][1] / A[0][0])  # u = (s1 + s2)/r
    w = 0.5 * math.log(A[1][0] / A[0][1])  # w = (s1 - s2)/r
    return 0.5 * (u + w) * r, 0.5 * (u - w) * r


def classify(l1, l2, tol=IDEAL_TOL):
    """Relation of l1 to l2: secant, boundary parallel (left/right) or ultraparallel."""
    if l1.r != l2.r or l1.dim != l2.dim:
        raise GeometryError("geodesics live in different models")
    shared = _shared_endpoints(l1, l2, tol)
    if len(shared) >= 2:
        raise GeometryError("identical carriers")
    if shared:
        xi = shared[0]
        P = l1.base
        S = drop_perpendicular(P, l2).foot
        return LineRelation(side_label(P, S, xi, l2), ideal=xi)
    s1, s2 = closest_points(l1, l2)
    f1, f2 = l1.point_at(s1), l2.point_at(s2)
    if distance(f1, f2) < DEGENERATE_TOL * l1.r * max(1.0, f1.x[0] / l1.r):
        return LineRelation(Relation.SECANT, point=HPoint.project(f1.x + f2.x, l1.r))
    return LineRelation(Relation.ULTRAPARALLEL, feet=(f1, f2))


class _RayFrame(NamedTuple):
    normal: np.ndarray
    e_foot: np.ndarray
    e_perp: np.ndarray
    distance: float


def _ray_frame(P, l):
    perp = drop_perpendicular(P, l)
    if perp.degenerate:
        raise DegenerateError("point lies on the line")
    r = P.r
    e_foot = tangent_toward(P, perp.foot)
    v = l.direction + (mdot(l.direction, P.x) / (r * r)) * P.x
    v = v - mdot(v, e_foot) * e_foot
    return _RayFrame(half_plane_normal(l, P), e_foot, v / mnorm(v), perp.distance)


def ray_meets(P, l, theta):
    """Does the ray from P at angle theta from the perpendicular PS cross l?"""
    fr = _ray_frame(P, l)
    end = P.x + P.r * (math.cos(theta) * fr.e_foot + math.sin(theta) * fr.e_perp)
    return mdot(fr.normal, end) * mdot(fr.normal, P.x) < 0


def secant_boundary_oracle(P, l, tol=1e-8):
    """Bisect for the angle separating secants of l through P from non-secants.

    Only asks whether individual rays cross l, so it stays independent of the
    closed form in ``angle_of_parallelism``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    fr = _ray_frame(P, l)
    lo, hi = tol, math.pi / 2 - tol
    if ray_meets(P, l, hi):
        return math.pi / 2
    if not ray_meets(P, l, lo):
        return 0.0
    theta, _ = kernels.bisect_boundary(fr.normal, P.x, fr.e_foot, fr.e_perp, P.r,
                                       lo, hi, tol, BISECTION_CAP)
    return theta


def pencil_of(xi, P):
    """The geodesic through P with forward ideal endpoint xi."""
    r = P.r
    lam = -r * r / mdot(xi.xi, P.x)
    return Geodesic(P, (lam * xi.xi - P.x) / r)


@dataclass(frozen=True, eq=False)
class ParallelPencil:
    """All geodesics ending at one ideal point."""

    ideal: IdealPoint

    def member_through(self, P):
        return pencil_of(self.ideal, P)


class BoundaryPair(NamedTuple):
    right: Geodesic
    left: Geodesic


def boundary_parallels(P, l):
    """The two parallels to l through P, one toward each ideal endpoint of l."""
    perp = drop_perpendicular(P, l)
    if perp.degenerate:
        raise DegenerateError("point lies on the line")
    lines = {}
    for xi in ideal_endpoints(l):
        lines[side_label(P, perp.foot, xi, l)] = pencil_of(xi, P)
    if len(lines) != 2:
        raise GeometryError("side labels collided")
    return BoundaryPair(lines[Relation.BOUNDARY_PARALLEL_RIGHT], lines[Relation.BOUNDARY_PARALLEL_LEFT])


def line_avoiding_angle(B, A, C):
    """A geodesic inside angle ABC meeting neither side.

    It joins the ideal endpoints of the rays B->A and B->C, so it is a
    boundary parallel of both sides.
    """
    theta = angle_at(B, A, C)
    if theta < 1e-12 or theta > math.pi - 1e-12:
        raise DegenerateError("collinear angle")
    xa = ideal_endpoints(Geodesic(B, tangent_toward(B, A)))[0]
    xc = ideal_endpoints(Geodesic(B, tangent_toward(B, C)))[0]
    g = geodesic_joining(xa, xc, B.r)
    return g.rebased(drop_perpendicular(B, g).parameter)


def inside_angle_mask(X, B, A, C, margin=0.0):
    """Row-wise strictly_inside_angle for an array of ambient coordinates."""
    ba = Geodesic(B, tangent_toward(B, A))
    bc = Geodesic(B, tangent_toward(B, C))
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return (mdot(X, half_plane_normal(ba, C)) > margin) & (mdot(X, half_plane_normal(bc, A)) > margin)


def strictly_inside_angle(X, B, A, C, margin=0.0):
    """X lies on C's side of line BA and on A's side of line BC."""
    return bool(inside_angle_mask(X.x, B, A, C, margin)[0])
