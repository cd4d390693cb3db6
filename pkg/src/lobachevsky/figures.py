"""Figure scenes built from the geometry operations, and their SVG rendering.

Every primitive in a scene is produced by a construction in ``minkowski``,
``parallels`` or ``horosphere``; each builder re-checks its construction
numerically and raises ``FigureValidationError`` before anything is drawn.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .horosphere import (
    Horosphere,
    _affine_root,
    horocycle_section,
    horosphere_through,
    surface_normal_alignment,
)
from .minkowski import (
    Geodesic,
    HPoint,
    IdealPoint,
    SHEET_TOL,
    angle_at,
    drop_perpendicular,
    geodesic_through,
    mcomplement,
    mdot,
    mnorm,
    point_at,
    tangent_angle,
    tangent_toward,
)
from .parallels import (
    Relation,
    boundary_parallels,
    classify,
    line_avoiding_angle,
    pencil_of,
    secant_boundary_oracle,
    strictly_inside_angle,
)
from .projection import to_disk_many

CANVAS = 800
MARGIN = 0.05
FIGURES = tuple(f"fig{k}" for k in range(1, 9))


class FigureValidationError(RuntimeError):
    pass


def _require(cond, msg):
    if not cond:
        raise FigureValidationError(msg)


@dataclass
class Scene:
    name: str
    r: float = 1.0
    flat: bool = False
    primitives: list = field(default_factory=list)
    view: tuple = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0))  # rows: screen axes in ball coordinates

    def add(self, kind, points, label=None, provenance="", **meta):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        self.primitives.append({"kind": kind, "points": pts, "label": label,
                                "provenance": provenance, "meta": meta})

    def point(self, p, label, provenance):
        self.add("point", (p.x if isinstance(p, HPoint) else p), label, provenance)

    def geodesic(self, g, s0, s1, label=None, provenance="", n=240, **meta):
        """Arc of g between parameters s0*r and s1*r."""
        self.add("curve", g.coords(self.r * np.linspace(s0, s1, n)), label, provenance,
                 geodesic=True, **meta)

    def curve(self, pts, label=None, provenance="", **meta):
        self.add("curve", pts, label, provenance, **meta)

    def angle_mark(self, vertex, a, b, right=False, provenance=""):
        self.add("angle", np.vstack([vertex.x, a.x, b.x]), None, provenance, right=right)

    def validate(self):
        """Every hyperboloid coordinate lies on the sheet; geodesic curves are plane sections."""
        if self.flat:
            return
        for prim in self.primitives:
            X = prim["points"]
            q = np.sum(X * X, axis=1) - 2 * X[:, 0] ** 2
            scale = self.r ** 2 * np.maximum(1.0, X[:, 0] ** 2 / self.r ** 2)
            _require(np.all(np.abs(q + self.r ** 2) < SHEET_TOL * scale) and np.all(X[:, 0] > 0),
                     f"{self.name}: {prim['kind']} {prim['label']} leaves the hyperboloid")
            if prim["meta"].get("geodesic"):
                sv = np.linalg.svd(X / np.linalg.norm(X, axis=1, keepdims=True), compute_uv=False)
                _require(sv[2] < 1e-9 * sv[0], f"{self.name}: {prim['label']} is not a plane section")

    def to_dict(self):
        return {
            "name": self.name, "curvature": self.r, "flat": self.flat,
            "primitives": [{"kind": p["kind"], "label": p["label"], "provenance": p["provenance"],
                            "meta": p["meta"], "points": np.round(p["points"], 12).tolist()}
                           for p in self.primitives],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


# --- rendering ---------------------------------------------------------------

def _fmt(v):
    return f"{v:.3f}"


class _Canvas:
    def __init__(self, scene, projection):
        self.scene = scene
        self.projection = projection
        self.radius = CANVAS * (0.5 - MARGIN)
        self.flat_scale = self.radius / 5.0

    def xy(self, X):
        X = np.atleast_2d(X)
        if self.scene.flat:
            P = X[:, :2] * self.flat_scale
        else:
            D = to_disk_many(X / self.scene.r, self.projection)
            V = np.asarray(self.scene.view, dtype=float)[:, :D.shape[1]]
            P = D @ V.T * self.radius
        return np.column_stack([CANVAS / 2 + P[:, 0], CANVAS / 2 - P[:, 1]])


def render_svg(scene, projection="poincare"):
    cv = _Canvas(scene, projection)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CANVAS}" height="{CANVAS}" '
        f'viewBox="0 0 {CANVAS} {CANVAS}">',
        f"<title>{scene.name}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if not scene.flat:
        out.append(f'<circle cx="{CANVAS // 2}" cy="{CANVAS // 2}" r="{_fmt(cv.radius)}" '
                   'fill="none" stroke="#888" stroke-width="1"/>')
    labels = []
    for prim in scene.primitives:
        P = cv.xy(prim["points"])
        kind = prim["kind"]
        if kind == "curve":
            color = prim["meta"].get("color", "black")
            pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in P)
            dash = ' stroke-dasharray="6,4"' if prim["meta"].get("dashed") else ""
            out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>')
            if prim["label"]:
                labels.append((P[len(P) * 3 // 4], prim["label"]))
        elif kind == "point":
            x, y = P[0]
            out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="black"/>')
            if prim["label"]:
                labels.append((P[0], prim["label"]))
        elif kind == "angle":
            v, a, b = P
            ua = (a - v) / np.linalg.norm(a - v)
            ub = (b - v) / np.linalg.norm(b - v)
            s = 14.0
            if prim["meta"].get("right"):
                c1, c2, c3 = v + s * ua, v + s * (ua + ub), v + s * ub
                out.append(f'<polyline points="{_fmt(c1[0])},{_fmt(c1[1])} {_fmt(c2[0])},{_fmt(c2[1])} '
                           f'{_fmt(c3[0])},{_fmt(c3[1])}" fill="none" stroke="#c00" stroke-width="1"/>')
            else:
                p1, p2 = v + 2 * s * ua, v + 2 * s * ub
                sweep = 1 if ua[0] * ub[1] - ua[1] * ub[0] > 0 else 0
                out.append(f'<path d="M {_fmt(p1[0])} {_fmt(p1[1])} A {_fmt(2 * s)} {_fmt(2 * s)} 0 0 {sweep} '
                           f'{_fmt(p2[0])} {_fmt(p2[1])}" fill="none" stroke="#c00" stroke-width="1"/>')
    for (x, y), text in labels:
        out.append(f'<text x="{_fmt(x + 6)}" y="{_fmt(y - 6)}" font-family="serif" font-size="16">{text}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# --- constructions -----------------------------------------------------------

def _perpendicular_tangent(P, t):
    """Unit tangent at P (in H^2) orthogonal to the unit tangent t."""
    n = mcomplement(np.vstack([P.x, t]))[:, 0]
    return n / mnorm(n)


def _base_configuration(r, d=0.9):
    l = Geodesic(HPoint.origin(2, r), np.array([0.0, 1.0, 0.0]))
    P = HPoint(r * np.array([math.cosh(d), 0.0, math.sinh(d)]), r)
    S = drop_perpendicular(P, l).foot
    return l, P, S


def _ray(P, S, theta):
    """Geodesic from P at angle theta from PS, turned toward +x."""
    t = tangent_toward(P, S)
    n = _perpendicular_tangent(P, t)
    if n[1] < 0:
        n = -n
    return Geodesic(P, math.cos(theta) * t + math.sin(theta) * n)


def _right_angle(v, a, b, what):
    _require(abs(angle_at(v, a, b) - math.pi / 2) < 1e-10, f"{what} is not a right angle")


def fig1(r=1.0):
    l, P, S = _base_configuration(r)
    m = _ray(P, S, math.pi / 2)
    sc = Scene("fig1", r)
    _right_angle(S, P, l.point_at(1.0), "PSl")
    _right_angle(P, S, m.point_at(1.0), "SPm")
    _require(classify(m, l).kind == Relation.ULTRAPARALLEL, "m meets l")
    sc.geodesic(l, -7, 7, "l", "line l")
    sc.geodesic(m.rebased(0), -7, 7, "m", "perpendicular to PS at P")
    sc.geodesic(geodesic_through(P, S), -1, 8, None, "drop_perpendicular(P, l)")
    sc.angle_mark(S, P, l.point_at(0.5 * r), right=True, provenance="right angle at S")
    sc.angle_mark(P, S, m.point_at(0.5 * r), right=True, provenance="right angle at P")
    sc.point(P, "P", "given point")
    sc.point(S, "S", "foot of the perpendicular")
    return sc


def fig2(r=1.0):
    l, P, S = _base_configuration(r)
    sc = Scene("fig2", r)
    sc.geodesic(l, -7, 7, "l", "line l")
    sc.geodesic(geodesic_through(P, S), -1, 8, None, "PS")
    angles = []
    for s, name in ((0.6, "B"), (1.2, "A"), (2.5, "C")):
        X = l.point_at(s * r)
        g = geodesic_through(P, X)
        rel = classify(g, l)
        _require(rel.kind == Relation.SECANT, f"P{name} is not a secant")
        _require(np.max(np.abs(rel.point.x - X.x)) < 1e-8 * max(1.0, X.x[0]), f"P{name} meets l elsewhere")
        angles.append(angle_at(P, S, X))
        sc.geodesic(g, -1, 9, None, f"secant P{name}")
        sc.point(X, name, f"point of l at s={s}")
    _require(angles[0] < angles[1] < angles[2], "secants are not ordered lower to upper")
    sc.point(P, "P", "given point")
    sc.point(S, "S", "foot of the perpendicular")
    return sc


def fig3(r=1.0):
    l, P, S = _base_configuration(r)
    m = _ray(P, S, math.pi / 2)
    pair = boundary_parallels(P, l)
    n = pair.right if pair.right.direction[1] > 0 else pair.left
    alpha = angle_at(P, S, n.point_at(r))
    mid = _ray(P, S, 0.5 * (alpha + math.pi / 2))
    _require(classify(n, l).is_boundary_parallel, "n is not a boundary parallel")
    for g, what in ((m, "m"), (mid, "intermediate line")):
        _require(classify(g, l).kind == Relation.ULTRAPARALLEL, f"{what} meets l")
    sc = Scene("fig3", r)
    sc.geodesic(l, -7, 7, "l", "line l")
    sc.geodesic(m, -7, 7, "m", "perpendicular to PS at P")
    sc.geodesic(n, -7, 9, "n", "boundary parallel through P")
    sc.geodesic(mid, -7, 9, None, "line between n and m", dashed=True)
    sc.geodesic(geodesic_through(P, S), -1, 8, None, "PS")
    sc.point(P, "P", "given point")
    sc.point(S, "S", "foot of the perpendicular")
    return sc


def fig4(r=1.0, theta=0.7):
    l, P, S = _base_configuration(r)
    A = _ray(P, S, theta).point_at(0.8 * r)
    PS = geodesic_through(P, S)
    T = drop_perpendicular(A, PS).foot
    AT = geodesic_through(A, T)
    _right_angle(T, A, P, "ATP")
    spa = angle_at(P, S, A)
    _require(abs(spa - theta) < 1e-12, "A is not on the ray at the given angle")
    alpha = secant_boundary_oracle(P, AT, 1e-10)
    _require(spa < alpha < math.pi / 2, "boundary angle for AT is not between SPA and pi/2")
    sc = Scene("fig4", r)
    sc.geodesic(PS, -3, 8, None, "PS")
    sc.geodesic(geodesic_through(P, A), -1, 9, None, "secant PA of AT")
    sc.geodesic(AT, -7, 7, None, "perpendicular AT on PS")
    sc.angle_mark(T, A, P, right=True, provenance="right angle at T")
    sc.angle_mark(P, S, A, provenance="angle SPA")
    for X, name in ((P, "P"), (S, "S"), (A, "A"), (T, "T")):
        sc.point(X, name, "construction point")
    return sc


def fig5(r=1.0, opening=0.6):
    B = HPoint.origin(2, r)
    A = HPoint(r * np.array([math.cosh(1.0), math.cos(opening / 2), math.sin(opening / 2)]) *
               np.array([1.0, math.sinh(1.0), math.sinh(1.0)]), r)
    C = HPoint(A.x * np.array([1.0, 1.0, -1.0]), r)
    g = line_avoiding_angle(B, A, C)
    for X in (A, C):
        rel = classify(g, Geodesic(B, tangent_toward(B, X)))
        _require(rel.is_boundary_parallel, "line meets a side of the angle")
    _require(all(strictly_inside_angle(x, B, A, C) for x in (point_at(g, s) for s in np.linspace(-6, 6, 50) * r)),
             "line leaves the angle")
    sc = Scene("fig5", r)
    sc.geodesic(geodesic_through(B, A), 0, 9, "BA", "side BA")
    sc.geodesic(geodesic_through(B, C), 0, 9, "BC", "side BC")
    sc.geodesic(g, -9, 9, "l", "line_avoiding_angle(B, A, C)", color="#06c")
    sc.angle_mark(B, A, C, provenance="angle ABC")
    for X, name in ((A, "A"), (B, "B"), (C, "C")):
        sc.point(X, name, "angle vertex / side point")
    return sc


def fig6(r=1.0):
    """Euclidean sheaves and their normals, drawn flat for contrast."""
    sc = Scene("fig6", r, flat=True)
    t = np.linspace(-2.2, 2.2, 50)
    for k in np.linspace(-1.6, 1.6, 5):
        sc.curve(np.column_stack([np.full_like(t, -2.5) + t, np.full_like(t, k)]), None,
                 "sheaf of parallel lines")
    sc.curve(np.column_stack([np.full_like(t, -2.5), t]), "a", "normal line", color="#c00")
    Q = np.array([2.5, 0.0])
    for phi in np.linspace(0, math.pi, 6, endpoint=False):
        d = np.array([math.cos(phi), math.sin(phi)])
        sc.curve(Q + t[:, None] * d, None, "sheaf through one point")
    th = np.linspace(0, 2 * math.pi, 120)
    circ = Q + 1.3 * np.column_stack([np.cos(th), np.sin(th)])
    # radial lines hit the circle orthogonally: the tangent is normal to the radius
    tang = np.column_stack([-np.sin(th), np.cos(th)])
    _require(np.max(np.abs(np.sum((circ - Q) * tang, axis=1))) < 1e-12, "circle not normal to the sheaf")
    sc.curve(circ, "b", "normal circle", color="#c00")
    return sc


def fig7(r=1.0):
    sc = Scene("fig7", r)
    xi = IdealPoint(np.array([1.0, 1.0, 0.0]))
    base = horosphere_through(HPoint.origin(2, r), xi)
    members = []
    for u in np.linspace(-2.4, 2.4, 9) * r:
        P = base.chart.embed([u])
        members.append(pencil_of(xi, P))
        _require(surface_normal_alignment(base, np.array([u])) > 1 - 1e-9, "horocycle not normal to pencil")
    for g in members:
        sc.geodesic(g, -5, 9, None, "pencil_of(xi, P)")
    for level in (0.4, 1.0, 2.5):
        h = Horosphere(xi, level, r)
        c = h.chart
        us = np.linspace(-6, 6, 241) * r
        sc.curve(c.embed_many(us[:, None]), None, f"horocycle level {level}", color="#c00")
        for g in members:
            b0 = h.busemann(g.base)
            s = r * math.log(b0 / level)
            x = g.point_at(s)
            _require(h.contains(x), "pencil member misses the horocycle")
            ang = tangent_angle(g.tangent_at(s), c.tangent(c.coords(x), np.array([1.0])))
            _require(abs(ang - math.pi / 2) < 1e-9, "horocycle not orthogonal to a pencil member")
    # concurrent sheaf and its normal circle
    Q = HPoint(r * np.array([math.cosh(1.2), -math.sinh(1.2), 0.0]), r)
    e1, e2 = np.array([0.0, 0.0, 1.0]), _perpendicular_tangent(Q, np.array([0.0, 0.0, 1.0]))
    rho = 0.6 * r
    ring = []
    for phi in np.linspace(0, 2 * math.pi, 121):
        ring.append(Geodesic(Q, math.cos(phi) * e1 + math.sin(phi) * e2).coords([rho])[0])
    for phi in np.linspace(0, math.pi, 5, endpoint=False):
        g = Geodesic(Q, math.cos(phi) * e1 + math.sin(phi) * e2)
        X = g.point_at(rho)
        # circle tangent at X: derivative in phi of the ring
        dg = Geodesic(Q, -math.sin(phi) * e1 + math.cos(phi) * e2)
        tang = dg.direction * r * math.sinh(rho / r)
        _require(abs(tangent_angle(g.tangent_at(rho), tang) - math.pi / 2) < 1e-9, "circle not normal to rays")
        sc.geodesic(g, -1.5, 1.5, None, "sheaf through Q", color="#555")
    sc.curve(np.array(ring), None, "circle about Q", color="#06c")
    return sc


def fig8(r=1.0):
    """Parallel horocycles on a horosphere in H^3, shown through a ball projection."""
    xi = IdealPoint(np.array([1.0, 0.0, 0.0, 1.0]))
    h = Horosphere(xi, math.e, r)
    c = h.chart
    d = np.array([0.0, 1.0])
    L = horocycle_section(h, [0.0, 0.0], d)
    M = horocycle_section(h, [1.5 * r, 0.0], d)
    turned = np.array([math.sin(0.35), math.cos(0.35)])
    T = horocycle_section(h, [1.5 * r, 0.0], turned)
    n_L = L.flat_normal()
    ts = np.linspace(-6, 6, 241) * r
    off = [mdot(n_L, x) for x in M.sample(ts)]
    _require(min(abs(v) for v in off) > 1e-6 and np.ptp(off) < 1e-9 * max(1.0, abs(off[0])),
             "parallel horocycles meet")
    t_hit = _affine_root(lambda t: mdot(n_L, c.embed_many(T.chart_point(t))[0]), 1.0)
    _require(t_hit is not None, "turned horocycle misses L")
    _require(abs(T.chart_point(t_hit)[0]) < 1e-9 * r, "turned horocycle crosses L's flat off L")
    az, tilt = 0.6, 0.9
    ca, sa, ct, st = math.cos(az), math.sin(az), math.cos(tilt), math.sin(tilt)
    sc = Scene("fig8", r, view=((ca, sa, 0.0), (st * sa, -st * ca, ct)))
    for k in np.linspace(-3, 3, 7) * r:
        sc.curve(horocycle_section(h, [0.0, k], [1.0, 0.0]).sample(ts), None, "chart grid line", color="#ddd")
    sc.curve(L.sample(ts), "L", "horocycle_section(h, L)", color="#c00")
    sc.curve(M.sample(ts), "M", "horocycle_section(h, M), parallel to L", color="#c00")
    sc.curve(T.sample(np.linspace(min(-3 * r, t_hit - r), 6 * r, 181)), None, "turned line through M's point", color="#06c",
             dashed=True)
    for arc in (L, M):
        for t in np.linspace(-3, 3, 5) * r:
            X = HPoint(arc.sample([t])[0], r)
            sc.geodesic(pencil_of(xi, X), 0, 8, None, "pencil member through the horocycle",
                        color="#999")
    sc.point(HPoint(T.sample([t_hit])[0], r), "X", "turned line meets L")
    return sc


BUILDERS = {name: globals()[name] for name in FIGURES}


def figure(name, out, r=1.0, projection="poincare"):
    """Build, validate and write figure ``name`` as SVG; returns the scene."""
    if name not in BUILDERS:
        raise ValueError(f"unknown figure {name!r}")
    sc = BUILDERS[name](r)
    sc.validate()
    svg = render_svg(sc, projection)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return sc
