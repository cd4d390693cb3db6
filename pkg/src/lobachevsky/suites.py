"""Verification suites behind ``lobachevsky verify``.

Each check returns (samples, max_residual) and passes iff the residual is
strictly below its tolerance. Every check draws from its own generator,
seeded from (seed, check name), so reports do not depend on check order.
Geometric checks run at the requested curvature radius r and at 3r.
"""

from __future__ import annotations

import itertools
import json
import math
import zlib
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import horosphere as hs
from . import parallels as par
from . import trig, units
from .minkowski import (
    Geodesic,
    HPoint,
    IdealPoint,
    angle_at,
    mdot,
    random_isometry,
    random_point,
    tangent_angle,
    tangent_toward,
)
from .projection import from_disk, to_disk_many

ORACLE_TOL = 1e-10


@dataclass(frozen=True)
class Check:
    name: str
    tolerance: float
    run: Callable  # (rng, radii) -> (samples, max_residual)


def _rng(seed, name):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(zlib.crc32(name.encode()),)))


# --- parallels ---------------------------------------------------------------

def perpendicular_setup(d, r, iso):
    """Line l and point P at distance d from it, moved by iso."""
    l = Geodesic(HPoint.origin(2, r), np.array([0.0, 1.0, 0.0]))
    P = HPoint(r * np.array([math.cosh(d / r), 0.0, math.sinh(d / r)]), r)
    return iso(l), iso(P)


def d_grid(n=100, lo=0.01, hi=5.0):
    return np.logspace(math.log10(lo), math.log10(hi), n)


def pi_oracle_agreement(rng, radii):
    worst, n = 0.0, 0
    for r in radii:
        for d in d_grid():
            l, P = perpendicular_setup(d, r, random_isometry(2, rng))
            worst = max(worst, abs(par.secant_boundary_oracle(P, l, ORACLE_TOL) - par.angle_of_parallelism(d, r)))
            n += 1
    return n, worst


def unit_rescaling(rng, radii):
    worst = 0.0
    bases = (1.5, 2.0, math.e, 10.0)
    for a in bases:
        for d in rng.uniform(0.01, 5.0, size=1000):
            worst = max(worst, abs(par.angle_of_parallelism_general(d, a) -
                                   par.angle_of_parallelism(d * math.log(a))))
    return 1000 * len(bases), worst


def sin_cosh_identity(rng, radii):
    ds = d_grid(200, 1e-3, 20.0)
    return len(ds) * len(radii), max(abs(trig.parallelism_identity_check(d * r, r)) for r in radii for d in ds)


def pi_monotone(rng, radii):
    ds = d_grid(1000, 1e-6, 40.0)
    worst = 0.0
    for r in radii:
        vals = np.array([par.angle_of_parallelism(d, r) for d in ds])
        worst = max(worst, float(np.max(np.diff(vals))))
    return len(ds) * len(radii), max(worst, 0.0)


def pi_limits(rng, radii):
    worst = 0.0
    for r in radii:
        worst = max(worst, abs(math.pi / 2 - par.angle_of_parallelism(1e-9 * r, r)),
                    par.angle_of_parallelism(40.0 * r, r))
    return 2 * len(radii), worst


def _random_ideal(dim, rng):
    w = rng.normal(size=dim)
    return IdealPoint(np.concatenate(([1.0], w / np.linalg.norm(w))))


def pencil_equivalence(rng, radii):
    worst, n = 0.0, 0
    for k in range(500):
        r = radii[k % len(radii)]
        dim = 2 if k % 2 == 0 else 3
        xi = _random_ideal(dim, rng)
        lines = [par.pencil_of(xi, random_point(dim, rng, r, 1.5)) for _ in range(3)]
        for g1, g2 in itertools.permutations(lines, 2):
            rel = par.classify(g1, g2)
            worst = max(worst, rel.ideal.gap(xi) if rel.is_boundary_parallel else math.inf)
            n += 1
    return n, worst


def boundary_parallel_angles(rng, radii):
    worst, n = 0.0, 0
    for r in radii:
        for _ in range(50):
            d = rng.uniform(0.05, 4.0) * r
            l, P = perpendicular_setup(d, r, random_isometry(2, rng))
            S = par.drop_perpendicular(P, l).foot
            pair = par.boundary_parallels(P, l)
            for g, kind in ((pair.right, par.Relation.BOUNDARY_PARALLEL_RIGHT),
                            (pair.left, par.Relation.BOUNDARY_PARALLEL_LEFT)):
                if par.classify(g, l).kind != kind:
                    return n, math.inf
                measured = tangent_angle(g.direction, tangent_toward(P, S))
                worst = max(worst, abs(measured - par.angle_of_parallelism(d, r)))
                n += 1
    return n, worst


def angle_construction(rng, radii, points=1000):
    """Failures of line_avoiding_angle over random angles down to 0.01 rad."""
    failures = 0
    for k in range(100):
        r = radii[k % len(radii)]
        theta = math.exp(rng.uniform(math.log(0.01), math.log(3.1)))
        iso = random_isometry(2, rng)
        B = HPoint.origin(2, r)
        A = Geodesic(B, np.array([0.0, 1.0, 0.0])).point_at(rng.uniform(0.2, 2.0) * r)
        C = Geodesic(B, np.array([0.0, math.cos(theta), math.sin(theta)])).point_at(rng.uniform(0.2, 2.0) * r)
        B, A, C = iso(B), iso(A), iso(C)
        g = par.line_avoiding_angle(B, A, C)
        ok = all(par.classify(g, Geodesic(B, tangent_toward(B, X))).is_boundary_parallel for X in (A, C))
        # beyond |s| ~ 10r the interior margin falls below rounding of the ambient coordinates
        ok = ok and bool(np.all(par.inside_angle_mask(g.coords(np.linspace(-10, 10, points) * r), B, A, C)))
        failures += not ok
    return 100, float(failures)


def secant_trichotomy(rng, radii):
    """Rays below the boundary angle are secants; rays between it and pi/2 are not."""
    failures, n = 0, 0
    for r in radii:
        for _ in range(40):
            d = rng.uniform(0.05, 3.0) * r
            l, P = perpendicular_setup(d, r, random_isometry(2, rng))
            alpha = par.angle_of_parallelism(d, r)
            fr = par._ray_frame(P, l)
            for theta in (rng.uniform(0.01, alpha - 1e-6), rng.uniform(alpha + 1e-6, math.pi / 2)):
                g = Geodesic(P, math.cos(theta) * fr.e_foot + math.sin(theta) * fr.e_perp)
                want = par.Relation.SECANT if theta < alpha else par.Relation.ULTRAPARALLEL
                failures += par.classify(g, l).kind != want
                n += 1
    return n, float(failures)


def _random_tangent(P, rng):
    w = rng.normal(size=P.dim + 1)
    v = w + mdot(w, P.x) / (P.r * P.r) * P.x
    return v / math.sqrt(mdot(v, v))


def _random_geodesic_in(dim, rng, r):
    P = random_point(dim, rng, r, 1.5)
    return Geodesic(P, _random_tangent(P, rng))


def witness_error(l1, l2, rel):
    """How far the witness of ``rel`` is from certifying the relation of l1 and l2."""
    r = l1.r
    if rel.kind == par.Relation.SECANT:
        return max(par.drop_perpendicular(rel.point, g).distance for g in (l1, l2)) / r
    if rel.is_boundary_parallel:
        return max(min(rel.ideal.gap(e) for e in g.ideal_endpoints()) for g in (l1, l2))
    err = 0.0
    f1, f2 = rel.feet
    for foot, other, g in ((f1, f2, l1), (f2, f1, l2)):
        perp = par.drop_perpendicular(foot, g)
        err = max(err, perp.distance / r,
                  abs(angle_at(foot, other, g.point_at(perp.parameter + r)) - math.pi / 2))
    return err


def classification_witness(rng, radii):
    worst, n = 0.0, 0
    for k in range(300):
        r = radii[k % len(radii)]
        dim = 2 + (k // 3) % 2
        l1 = _random_geodesic_in(dim, rng, r)
        if k % 3 == 0:
            l2 = _random_geodesic_in(dim, rng, r)
        elif k % 3 == 1:  # forced crossing
            l2 = Geodesic(l1.base, _random_tangent(l1.base, rng)).rebased(rng.uniform(-1, 1) * r)
        else:  # forced shared end
            l2 = par.pencil_of(l1.ideal_endpoints()[int(rng.integers(2))], random_point(dim, rng, r, 1.5))
        worst = max(worst, witness_error(l1, l2, par.classify(l1, l2)))
        n += 1
    return n, worst


# --- horosphere --------------------------------------------------------------

def _random_horosphere(dim, r, rng):
    return hs.Horosphere(_random_ideal(dim, rng), float(rng.uniform(0.5, 2.0)), r)


def flatness(dim):
    def run(rng, radii):
        worst, n = 0.0, 0
        for k in range(200):
            r = radii[k % len(radii)]
            h = _random_horosphere(dim, r, rng)
            c = h.chart
            u, v = rng.uniform(-5, 5, size=(2, dim - 1)) * r / math.sqrt(dim - 1)
            x, y = c.embed(u), c.embed(v)
            exact = hs.intrinsic_distance(h, x, y)
            worst = max(worst, abs(hs.path_length_oracle(h, x, y) - exact) / exact)
            n += 1
        return n, worst
    return run


def horo_triangles(rng, radii, min_area=0.5):
    """(law of cosines, angle sum, max ambient angle sum - pi) over 200 triangles.

    ``min_area`` is in units of r^2. The ambient defect shrinks with the area,
    so the contrast with pi - 1e-3 needs triangles well above that size.
    """
    loc = asum = 0.0
    ambient = -math.inf
    k = 0
    while k < 200:
        r = radii[k % len(radii)]
        h = _random_horosphere(3, r, rng)
        U = rng.uniform(-5, 5, size=(3, 2)) * r
        e1, e2 = U[1] - U[0], U[2] - U[0]
        if 0.5 * abs(e1[0] * e2[1] - e1[1] * e2[0]) <= min_area * r * r:
            continue
        res = hs.euclidean_triangle_check(h, *U)
        loc = max(loc, res.law_of_cosines_residual / r ** 2)
        asum = max(asum, abs(res.angle_sum_residual))
        ambient = max(ambient, res.ambient_angle_sum - math.pi)
        k += 1
    return loc, asum, ambient


def ap_check(rng, radii):
    failures = 0
    for r in radii:
        failures += hs.verify_AP(_random_horosphere(3, r, rng), 1000, rng).failures
    return 1000 * len(radii), float(failures)


def pencil_orthogonality(rng, radii):
    worst, n = 0.0, 0
    for dim in (2, 3):
        for r in radii:
            h = _random_horosphere(dim, r, rng)
            for u in rng.uniform(-3, 3, size=(50, dim - 1)) * r:
                worst = max(worst, 1.0 - hs.surface_normal_alignment(h, u, step=1e-4 * r))
                n += 1
    return n, worst


# --- duality -----------------------------------------------------------------

def imaginary_substitution(rng, radii):
    worst = 0.0
    for _ in range(1000):
        a, b = rng.uniform(0.1, 2.0, size=2)
        t = trig.measure_triangle(*trig.synthesize_right_triangle(a, b, 1.0, random_isometry(2, rng)), 1.0)
        worst = max(worst, trig.imaginary_substitution_residual(t.a, t.b, t.c, t.A, t.B))
    return 1000, worst


def accordance(rng, radii):
    worst = 0.0
    for r in radii:
        seed = int(rng.integers(2 ** 32))
        worst = max(worst, trig.accordance_check(500, r, seed)["max_residual"])
    return 500 * len(radii), worst


def euclidean_limit(rng, radii):
    p, defects = trig.euclidean_limit_exponent()
    return len(defects), abs(p - 2.0)


def spherical_accordance(rng, radii):
    worst = 0.0
    for R in radii:
        for _ in range(100):
            a, b = rng.uniform(0.1, 1.5, size=2) * R
            worst = max(worst, trig.spherical_right_residuals(trig.sphere_right_triangle(a, b, rng, R)).max())
    return 100 * len(radii), worst


# --- units -------------------------------------------------------------------

def _chains(reg, length):
    maps = list(reg.maps.values())
    out = []
    for combo in itertools.product(maps, repeat=length):
        if all(f.target is g.source for f, g in zip(combo, combo[1:])):
            out.append(combo)
    return out


def _sample_chains(reg, length, rng, n=100):
    chains = _chains(reg, length)
    return [chains[i] for i in rng.integers(len(chains), size=n)]


def _deviation(a, b):
    return float(np.max(np.abs(np.asarray(a, float) - np.asarray(b, float))))


def identity_laws(rng, radii):
    reg = units.builtin_registry()
    worst = 0.0
    for (f,) in _sample_chains(reg, 1, rng):
        x = f.source.sample(1, int(rng.integers(2 ** 32)))[0]
        left = units.compose(units.identity(f.source), f)
        right = units.compose(f, units.identity(f.target))
        worst = max(worst, _deviation(left(x), f(x)), _deviation(right(x), f(x)))
    return 100, worst


def associativity(rng, radii):
    reg = units.builtin_registry()
    worst = 0.0
    for f, g, h in _sample_chains(reg, 3, rng):
        x = f.source.sample(1, int(rng.integers(2 ** 32)))[0]
        lhs = units.compose(units.compose(f, g), h)
        rhs = units.compose(f, units.compose(g, h))
        worst = max(worst, _deviation(lhs(x), rhs(x)))
    return 100, worst


def isometric_claim(name):
    def run(rng, radii):
        f = units.builtin_registry().by_name(name)
        rep = units.check_isometric(f, 50, seed=int(rng.integers(2 ** 32)))
        return rep["pairs"], rep["max_relative_deviation"]
    return run


def _claimed(reg):
    return sorted(m.name for m in reg.maps.values() if units.ISOMETRIC in m.claims and not m.is_identity)


def type_sharing(rng, radii):
    """Largest deviation / own tolerance for e and h on EPLANE; inf if they share a space."""
    reg = units.builtin_registry()
    e, h = reg.by_name("e"), reg.by_name("h")
    rep = units.compare_instantiations(reg.units["EPLANE"], e, h, 50, int(rng.integers(2 ** 32)))
    if rep["same_space"]:
        return 2, math.inf
    return 2, max(m["max_relative_deviation"] / f.tolerance for m, f in zip(rep["maps"], (e, h)))


def circle_composite(rng, radii):
    reg = units.builtin_registry()
    c, h = reg.by_name("c"), reg.by_name("h")
    rep = units.compare_instantiations(reg.units["CIRCLE"], c, units.compose(c, h), 30, int(rng.integers(2 ** 32)))
    return 30, max(m["max_relative_deviation"] for m in rep["maps"])


# --- projections -------------------------------------------------------------

def klein_chords(rng, radii):
    worst = 0.0
    for k in range(100):
        r = radii[k % len(radii)]
        g = _random_geodesic_in(2, rng, r)
        Z = to_disk_many(g.coords(np.linspace(-3, 3, 100) * r) / r, "klein")
        Zc = Z - Z.mean(axis=0)
        v = np.linalg.svd(Zc)[2][0]
        worst = max(worst, float(np.max(np.abs(Zc[:, 0] * v[1] - Zc[:, 1] * v[0]))))
    return 100, worst


def _disk_tangent(g, h=1e-3):
    """Fourth-order central difference of the Poincare image of g at s = 0."""
    r = g.r
    Z = to_disk_many(g.coords(np.array([-2, -1, 1, 2]) * h * r) / r, "poincare")
    return (Z[0] - 8 * Z[1] + 8 * Z[2] - Z[3]) / 12


def poincare_conformal(rng, radii):
    worst = 0.0
    for k in range(100):
        r = radii[k % len(radii)]
        g1 = _random_geodesic_in(2, rng, r)
        g2 = Geodesic(g1.base, _random_tangent(g1.base, rng))
        t1, t2 = _disk_tangent(g1), _disk_tangent(g2)
        euclid = math.atan2(abs(t1[0] * t2[1] - t1[1] * t2[0]), float(t1 @ t2))
        worst = max(worst, abs(euclid - tangent_angle(g1.direction, g2.direction)))
    return 100, worst


def disk_roundtrip(rng, radii):
    worst = 0.0
    for kind in ("poincare", "klein"):
        for k in range(500):
            r = radii[k % len(radii)]
            rho = math.sqrt(rng.uniform(0, 0.9 ** 2))
            phi = rng.uniform(0, 2 * math.pi)
            z = rho * np.array([math.cos(phi), math.sin(phi)])
            worst = max(worst, _deviation(to_disk_many(from_disk(z, kind, r).x / r, kind)[0], z))
            p = random_point(2, rng, r, 2.0)
            back = from_disk(to_disk_many(p.x / r, kind)[0], kind, r)
            worst = max(worst, _deviation(back.x, p.x) / p.x[0])
    return 2000, worst


def _triangle_checks():
    def part(k, min_area):
        return lambda rng, radii: (200, horo_triangles(rng, radii, min_area)[k])
    return [
        Check("horosphere.triangle_law_of_cosines", 1e-8, part(0, 1e-3)),
        Check("horosphere.triangle_angle_sum", 1e-8, part(1, 1e-3)),
        # passes iff every ambient geodesic triangle has angle sum below pi - 1e-3
        Check("horosphere.ambient_angle_sum_minus_pi", -1e-3, part(2, 0.5)),
    ]


def build_suites():
    reg = units.builtin_registry()
    tri = _triangle_checks()
    suites = {
        "parallels": [
            Check("parallels.pi_oracle_agreement", 1e-7, pi_oracle_agreement),
            Check("parallels.unit_rescaling", 1e-14, unit_rescaling),
            Check("parallels.sin_cosh_identity", 1e-12, sin_cosh_identity),
            Check("parallels.pi_monotone_increment", 1e-15, pi_monotone),
            Check("parallels.pi_limits", 1e-8, pi_limits),
            Check("parallels.pencil_equivalence", 1e-9, pencil_equivalence),
            Check("parallels.boundary_parallel_angles", 1e-10, boundary_parallel_angles),
            Check("parallels.angle_construction_failures", 0.5, angle_construction),
            Check("parallels.secant_trichotomy_failures", 0.5, secant_trichotomy),
            Check("parallels.classification_witness", 1e-8, classification_witness),
        ],
        "horosphere": [
            Check("horosphere.flatness_h3", 1e-5, flatness(3)),
            Check("horosphere.flatness_h2", 1e-5, flatness(2)),
            *tri,
            Check("horosphere.ap_failures", 0.5, ap_check),
            Check("horosphere.pencil_orthogonality", 1e-9, pencil_orthogonality),
        ],
        "duality": [
            Check("duality.imaginary_substitution", 1e-12, imaginary_substitution),
            Check("duality.accordance", 1e-9, accordance),
            Check("duality.euclidean_limit_exponent_gap", 0.1, euclidean_limit),
            Check("duality.spherical_accordance", 1e-10, spherical_accordance),
        ],
        "units": [
            Check("units.identity_laws", 1e-12, identity_laws),
            Check("units.associativity", 1e-12, associativity),
            *[Check(f"units.isometric.{name}", reg.by_name(name).tolerance, isometric_claim(name))
              for name in _claimed(reg)],
            Check("units.type_sharing_ratio", 1.0, type_sharing),
            Check("units.circle_composite", units.FALLBACK_TOL, circle_composite),
        ],
        "projections": [
            Check("projections.klein_chords", 1e-12, klein_chords),
            Check("projections.poincare_conformal", 1e-9, poincare_conformal),
            Check("projections.disk_roundtrip", 1e-12, disk_roundtrip),
        ],
    }
    return suites


SUITES = ("parallels", "horosphere", "duality", "units", "projections", "all")


def run_suite(name, seed=0, r=1.0, tol=None):
    """Run a suite and return its report dict; ``tol`` overrides every tolerance."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    suites = build_suites()
    checks = [c for s in suites.values() for c in s] if name == "all" else suites[name]
    radii = (r, 3.0 * r)
    rows = []
    for chk in checks:
        samples, residual = chk.run(_rng(seed, chk.name), radii)
        bound = chk.tolerance if tol is None else tol
        rows.append({"name": chk.name, "samples": int(samples), "max_residual": float(residual),
                     "tolerance": float(bound), "pass": bool(residual < bound)})
    return {"suite": name, "seed": seed, "curvature": r, "checks": rows,
            "all_pass": all(row["pass"] for row in rows)}


def report_json(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
