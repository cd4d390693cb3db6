"""Units (types/spaces) and the maps between them.

A unit is presented by a point sampler and a metric. A map carries the
claims it makes about itself (currently only "isometric-embedding") and,
where one is known in closed form, the intrinsic metric of its image set.
No API builds maps between two image sets: only units are sources and
targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra, minimum_spanning_tree
from scipy.spatial.distance import cdist

from . import kernels
from .horosphere import Horosphere, path_length_oracle
from .minkowski import IdealPoint, HPoint
from .projection import to_disk_many

ISOMETRIC = "isometric-embedding"
FALLBACK_TOL = 1e-2
IDENTITY_TOL = 1e-12


class UnitMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Unit:
    name: str
    point_repr: str
    metric: Callable
    sampler: Callable  # (rng, n) -> array (n, k)
    pairwise: Optional[Callable] = None  # (X, Y) -> distance matrix

    def distances(self, X, Y):
        if self.pairwise is not None:
            return self.pairwise(X, Y)
        return np.array([[self.metric(x, y) for y in Y] for x in X])

    def sample(self, n, seed=0):
        return self.sampler(np.random.default_rng(seed), n)

    def __repr__(self):
        return f"Unit({self.name})"


@dataclass(frozen=True, eq=False)
class UnitMap:
    name: str
    source: Unit
    target: Unit
    apply: Callable
    claims: frozenset = frozenset()
    image_metric: Optional[Callable] = None
    tolerance: float = 1e-12
    is_identity: bool = False

    def __call__(self, x):
        return self.apply(x)

    def __repr__(self):
        return f"UnitMap({self.name}: {self.source.name} -> {self.target.name})"


def identity(u):
    return UnitMap(f"id_{u.name}", u, u, lambda x: np.asarray(x, dtype=float),
                   frozenset({ISOMETRIC}), u.metric, IDENTITY_TOL, is_identity=True)


def compose(f, g):
    """First f, then g."""
    if f.target is not g.source:
        raise UnitMismatch(f"cannot compose {f} with {g}")
    # an identity factor leaves the image set, hence its metric, unchanged
    if g.is_identity:
        metric, tol = f.image_metric, f.tolerance
    elif f.is_identity:
        metric, tol = g.image_metric, g.tolerance
    else:
        metric, tol = None, max(FALLBACK_TOL, f.tolerance, g.tolerance)
    return UnitMap(f"{f.name};{g.name}", f.source, g.target,
                   lambda x, f=f, g=g: g.apply(f.apply(x)),
                   f.claims & g.claims, metric, tol)


def graph_geodesic_metric(f, n_samples=512, k=6, seed=12345):
    """Image metric by shortest paths in a chord graph on sampled image points.

    Chord lengths are target-metric distances between images of source
    samples, so this works for any map whose image is a curve or surface
    without a closed-form intrinsic metric (accuracy ~1e-2). Each point is
    joined to its k nearest neighbours and to every point closer than twice
    the longest minimum-spanning-tree edge, which bridges sampling gaps.
    """
    base = np.vstack([f.apply(p) for p in f.source.sample(n_samples, seed)])
    D0 = f.target.distances(base, base)
    radius = 2.0 * minimum_spanning_tree(D0).max()

    def metric(y1, y2):
        imgs = np.vstack([base, y1, y2])
        m = len(imgs)
        D = np.empty((m, m))
        D[:-2, :-2] = D0
        D[-2:, :] = f.target.distances(imgs[-2:], imgs)
        D[:, -2:] = D[-2:, :].T
        W = np.where(D < radius, D, 0.0)
        nbrs = np.argsort(D, axis=1)[:, 1:k + 1]
        rows = np.repeat(np.arange(m), k)
        W[rows, nbrs.ravel()] = D[rows, nbrs.ravel()]
        return float(dijkstra(csr_matrix(W), directed=False, indices=m - 2)[m - 1])

    return metric


def check_isometric(f, pairs=100, tol=None, seed=0):
    """Compare source distances with image distances on sampled pairs."""
    if pairs < 1:
        raise ValueError("pairs must be >= 1")
    tol = f.tolerance if tol is None else tol
    metric = f.image_metric
    if metric is None:
        metric = graph_geodesic_metric(f)
        tol = max(tol, FALLBACK_TOL)
    P = f.source.sample(2 * pairs, seed)
    worst = 0.0
    for x, y in zip(P[0::2], P[1::2]):
        ds = f.source.metric(x, y)
        dt = metric(f.apply(x), f.apply(y))
        dev = abs(dt - ds) / ds if ds > 0 else abs(dt)
        worst = max(worst, dev)
    return {"map": f.name, "pairs": pairs, "max_relative_deviation": worst,
            "tolerance": tol, "pass": worst < tol}


def compare_instantiations(t, f, g, pairs=50, seed=0):
    """Both maps instantiate t; report metric preservation and the spaces they land in."""
    if f.source is not t or g.source is not t:
        raise UnitMismatch("both maps must have the type as source")
    rf = check_isometric(f, pairs, seed=seed)
    rg = check_isometric(g, pairs, seed=seed)
    return {
        "type": t.name,
        "maps": [{"name": m.name, "space": m.target.name, "preserves_metric": r["pass"],
                  "max_relative_deviation": r["max_relative_deviation"]}
                 for m, r in ((f, rf), (g, rg))],
        "same_type": rf["pass"] and rg["pass"],
        "same_space": f.target is g.target,
    }


@dataclass
class Registry:
    units: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)

    def add_unit(self, u):
        self.units[u.name] = u
        self.add_map(identity(u))

    def add_map(self, m):
        self.maps[(m.source.name, m.target.name, m.name)] = m

    def lookup(self, source, target, name):
        return self.maps[(source, target, name)]

    def by_name(self, name):
        hits = [m for key, m in self.maps.items() if key[2] == name]
        if len(hits) != 1:
            raise KeyError(name)
        return hits[0]


# --- concrete metrics and samplers -------------------------------------------

def _euclid(x, y):
    return float(np.linalg.norm(np.asarray(x, float) - np.asarray(y, float)))


def _hyperbolic(x, y):
    return kernels.hdist(x, y, 1.0)


def _euclid_pairwise(X, Y):
    return cdist(X, Y)


def _hyperbolic_pairwise(X, Y):
    diff = X[:, None, :] - Y[None, :, :]
    q = np.sum(diff * diff, axis=-1) - 2 * diff[..., 0] ** 2
    return 2 * np.arcsinh(np.sqrt(np.maximum(q, 0.0)) / 2)


def _arc(x, y):
    d = abs(float(x[0]) - float(y[0])) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


def _great_circle(x, y):
    x, y = np.asarray(x, float), np.asarray(y, float)
    return math.atan2(np.linalg.norm(np.cross(x, y)), float(x @ y))


def _plane_sampler(rng, n):
    return rng.uniform(-3, 3, size=(n, 2))


def _space_sampler(rng, n):
    return rng.uniform(-3, 3, size=(n, 3))


def _hyperboloid_sampler(dim):
    def sample(rng, n):
        w = rng.normal(size=(n, dim))
        w /= np.linalg.norm(w, axis=1, keepdims=True)
        d = rng.uniform(0, 2, size=(n, 1))
        return np.hstack([np.cosh(d), np.sinh(d) * w])
    return sample


def _circle_sampler(rng, n):
    return rng.uniform(0, 2 * math.pi, size=(n, 1))


def _sphere_sampler(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


# the rigid plane z = 1 in ESPACE, tilted
_E_ROT = np.linalg.qr(np.array([[2.0, 1.0, 0.5], [0.3, 1.0, 0.2], [0.1, 0.4, 3.0]]))[0]
_E_OFFSET = np.array([0.5, -1.0, 1.0])


def _e_apply(u):
    u = np.asarray(u, float)
    return _E_ROT @ np.array([u[0], u[1], 0.0]) + _E_OFFSET


def _e_image_metric(x, y):
    return _euclid(x, y)


_CIRCLE_CENTER = np.array([0.25, -0.5])


def _c_apply(t):
    t = float(np.asarray(t).ravel()[0])
    return _CIRCLE_CENTER + np.array([math.cos(t), math.sin(t)])


def _c_image_metric(x, y):
    a = np.asarray(x, float) - _CIRCLE_CENTER
    b = np.asarray(y, float) - _CIRCLE_CENTER
    return math.atan2(abs(a[0] * b[1] - a[1] * b[0]), float(a @ b))


def standard_horosphere():
    """The horosphere through the origin of H^3 (r = 1) centered at (1, 1, 0, 0)."""
    return Horosphere(IdealPoint(np.array([1.0, 1.0, 0.0, 0.0])), 1.0, 1.0)


def builtin_registry():
    reg = Registry()
    eplane = Unit("EPLANE", "R^2 cartesian", _euclid, _plane_sampler, _euclid_pairwise)
    espace = Unit("ESPACE", "R^3 cartesian", _euclid, _space_sampler, _euclid_pairwise)
    ispace = Unit("ISPACE", "hyperboloid in R^{3,1}, r = 1", _hyperbolic, _hyperboloid_sampler(3),
                  _hyperbolic_pairwise)
    iplane = Unit("IPLANE", "hyperboloid in R^{2,1}, r = 1", _hyperbolic, _hyperboloid_sampler(2),
                  _hyperbolic_pairwise)
    circle = Unit("CIRCLE", "angle in [0, 2pi)", _arc, _circle_sampler)
    sphere = Unit("SPHERE", "unit vector in R^3", _great_circle, _sphere_sampler)
    for u in (eplane, espace, ispace, iplane, circle, sphere):
        reg.add_unit(u)

    h = standard_horosphere()
    chart = h.chart

    def h_image_metric(x, y):
        return path_length_oracle(h, HPoint(x), HPoint(y))

    reg.add_map(UnitMap("e", eplane, espace, _e_apply, frozenset({ISOMETRIC}), _e_image_metric, 1e-14))
    reg.add_map(UnitMap("h", eplane, ispace, lambda u: chart.embed_many(np.reshape(u, (1, 2)))[0],
                        frozenset({ISOMETRIC}), h_image_metric, 1e-5))
    reg.add_map(UnitMap("c", circle, eplane, _c_apply, frozenset({ISOMETRIC}), _c_image_metric, 1e-12))
    reg.add_map(UnitMap("sphere-embed", sphere, espace, lambda v: np.asarray(v, float),
                        frozenset({ISOMETRIC}), _great_circle, 1e-12))
    for kind in ("klein", "poincare"):
        reg.add_map(UnitMap(kind, iplane, eplane,
                            lambda x, kind=kind: to_disk_many(np.asarray(x, float)[None, :], kind)[0]))
        reg.add_map(UnitMap(f"{kind}-ball", ispace, espace,
                            lambda x, kind=kind: to_disk_many(np.asarray(x, float)[None, :], kind)[0]))
    return reg
