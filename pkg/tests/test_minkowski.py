import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from lobachevsky.minkowski import (
    DegenerateError,
    Geodesic,
    GeometryError,
    HPoint,
    IdealPoint,
    Isometry,
    angle_at,
    distance,
    drop_perpendicular,
    geodesic_joining,
    geodesic_through,
    ideal_endpoints,
    mdot,
    point_at,
    random_isometry,
    random_point,
    rotation,
    translation_to,
)

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
radii = st.sampled_from([0.5, 1.0, 3.0])


def on_sheet(p):
    return abs(mdot(p.x, p.x) + p.r ** 2) < 1e-9 * p.r ** 2 * max(1.0, p.x[0] ** 2 / p.r ** 2)


# --- mdot ---------------------------------------------------------------------

@pytest.mark.parametrize("u, expected", [
    ((1, 0, 0), -1.0),
    ((0, 1, 0), 1.0),
    ((1, 1, 0), 0.0),
])
def test_mdot_signature(u, expected):
    assert mdot(u, u) == expected


def test_mdot_dimension_mismatch():
    with pytest.raises(ValueError):
        mdot([1, 0, 0], [1, 0, 0, 0])


def test_mdot_broadcasts_rows():
    X = np.array([[1.0, 0, 0], [0, 1.0, 0]])
    np.testing.assert_array_equal(mdot(X, X), [-1.0, 1.0])


# --- HPoint -------------------------------------------------------------------

def test_hpoint_rejects_off_sheet_and_lower_sheet():
    with pytest.raises(GeometryError):
        HPoint(np.array([1.0, 0.5, 0.0]))
    with pytest.raises(GeometryError):
        HPoint(np.array([-1.0, 0.0, 0.0]))
    with pytest.raises(GeometryError):
        HPoint(np.array([1.0, 0.0]))


@pytest.mark.parametrize("r", [0.0, -1.0, math.inf, math.nan])
def test_curvature_radius_must_be_positive_finite(r):
    with pytest.raises(GeometryError):
        HPoint.origin(2, r)


def test_project_onto_sheet():
    p = HPoint.project(np.array([3.0, 1.0, -1.0]), 2.0)
    assert on_sheet(p) and p.r == 2.0


# --- distance -----------------------------------------------------------------

def test_distance_examples():
    p = HPoint.origin(2)
    q = HPoint(np.array([math.cosh(1), math.sinh(1), 0.0]))
    assert distance(p, p) == 0.0
    assert distance(p, q) == pytest.approx(1.0, abs=1e-15)
    assert distance(p.rescaled(2.0), q.rescaled(2.0)) == pytest.approx(2.0, abs=1e-14)


def test_distance_rejects_mixed_models():
    with pytest.raises(GeometryError):
        distance(HPoint.origin(2, 1.0), HPoint.origin(2, 2.0))
    with pytest.raises(GeometryError):
        distance(HPoint.origin(2), HPoint.origin(3))


def test_distance_keeps_precision_for_close_points():
    p = HPoint.origin(2)
    q = HPoint(np.array([math.cosh(1e-9), math.sinh(1e-9), 0.0]))
    assert distance(p, q) == pytest.approx(1e-9, rel=1e-6)


@settings(max_examples=60, deadline=None)
@given(seeds, radii)
def test_distance_symmetric_and_triangle_inequality(seed, r):
    rng = np.random.default_rng(seed)
    p, q, s = (random_point(3, rng, r, 2.0) for _ in range(3))
    assert distance(p, q) == pytest.approx(distance(q, p), rel=1e-12, abs=1e-15)
    assert distance(p, s) <= distance(p, q) + distance(q, s) + 1e-10 * r


@settings(max_examples=60, deadline=None)
@given(seeds, radii)
def test_isometry_invariance(seed, r):
    rng = np.random.default_rng(seed)
    dim = 2 + seed % 2
    p, q = random_point(dim, rng, r, 2.0), random_point(dim, rng, r, 2.0)
    L = random_isometry(dim, rng)
    assert distance(L(p), L(q)) == pytest.approx(distance(p, q), abs=1e-9 * r)


@settings(max_examples=40, deadline=None)
@given(seeds, radii, radii)
def test_curvature_scaling(seed, r, r_new):
    rng = np.random.default_rng(seed)
    p, q = random_point(2, rng, r, 2.0), random_point(2, rng, r, 2.0)
    assert distance(p.rescaled(r_new), q.rescaled(r_new)) == pytest.approx(distance(p, q) * r_new / r, rel=1e-10)


# --- geodesics and point_at ---------------------------------------------------

def test_point_at_closed_form():
    g = Geodesic(HPoint.origin(2), np.array([0.0, 1.0, 0.0]))
    np.testing.assert_allclose(point_at(g, 1.0).x, [math.cosh(1), math.sinh(1), 0.0], atol=1e-15)
    np.testing.assert_array_equal(point_at(g, 0.0).x, g.base.x)


def test_geodesic_rejects_bad_direction():
    with pytest.raises(GeometryError):
        Geodesic(HPoint.origin(2), np.array([0.0, 2.0, 0.0]))
    with pytest.raises(GeometryError):
        Geodesic(HPoint.origin(2), np.array([1.0, 0.0, 0.0]))


@settings(max_examples=50, deadline=None)
@given(seeds, radii)
def test_geodesic_through_round_trip(seed, r):
    rng = np.random.default_rng(seed)
    p, q = random_point(3, rng, r, 2.0), random_point(3, rng, r, 2.0)
    g = geodesic_through(p, q)
    d = distance(p, q)
    np.testing.assert_allclose(point_at(g, d).x, q.x, atol=1e-12 * r * max(1.0, q.x[0] / r))
    # swapping gives the same carrier with reversed orientation
    back = geodesic_through(q, p)
    np.testing.assert_allclose(point_at(back, d).x, p.x, atol=1e-12 * r * max(1.0, p.x[0] / r))
    f1, b1 = ideal_endpoints(g)
    f2, b2 = ideal_endpoints(back)
    assert f1.close_to(b2) and b1.close_to(f2)


def test_geodesic_on_axis_stays_in_span():
    p = HPoint.origin(2)
    q = HPoint(np.array([math.cosh(2), math.sinh(2), 0.0]))
    assert geodesic_through(p, q).direction[2] == 0.0


def test_geodesic_through_coincident_points():
    p = HPoint.origin(2)
    with pytest.raises(DegenerateError):
        geodesic_through(p, p)


@settings(max_examples=50, deadline=None)
@given(seeds, st.floats(-3, 3), st.floats(-3, 3))
def test_point_at_additivity_and_isometric_parametrization(seed, a, b):
    rng = np.random.default_rng(seed)
    p = random_point(2, rng, 1.0, 1.0)
    g = geodesic_through(p, random_point(2, rng, 1.0, 1.0)) if seed % 7 else Geodesic(
        HPoint.origin(2), np.array([0.0, 0.0, 1.0]))
    x = point_at(g.rebased(a), b)
    y = point_at(g, a + b)
    # sheet rescaling loses ~eps * x0^2 relative accuracy
    np.testing.assert_allclose(x.x, y.x, rtol=1e-14 * y.x[0] ** 2, atol=1e-12)
    assert on_sheet(x)
    assert distance(point_at(g, a), point_at(g, b)) == pytest.approx(abs(a - b), abs=1e-10)


# --- angles -------------------------------------------------------------------

def test_angle_identical_rays_is_zero():
    p = HPoint.origin(2)
    q = HPoint(np.array([math.cosh(1), math.sinh(1), 0.0]))
    assert angle_at(p, q, q) == 0.0


def test_angle_at_coincident_raises():
    p = HPoint.origin(2)
    with pytest.raises(DegenerateError):
        angle_at(p, p, HPoint(np.array([math.cosh(1), math.sinh(1), 0.0])))


@settings(max_examples=60, deadline=None)
@given(seeds, radii)
def test_triangle_angle_sum_below_pi(seed, r):
    rng = np.random.default_rng(seed)
    A, B, C = (random_point(2, rng, r, 2.0) for _ in range(3))
    angles = [angle_at(A, B, C), angle_at(B, C, A), angle_at(C, A, B)]
    if min(angles) < 1e-6 or max(angles) > math.pi - 1e-6:
        return  # nearly collinear
    assert sum(angles) < math.pi


# --- perpendiculars -----------------------------------------------------------

def test_perpendicular_symmetric_configuration():
    l = Geodesic(HPoint.origin(2), np.array([0.0, 1.0, 0.0]))
    P = HPoint(np.array([math.cosh(0.9), 0.0, math.sinh(0.9)]))
    perp = drop_perpendicular(P, l)
    np.testing.assert_allclose(perp.foot.x, [1.0, 0.0, 0.0], atol=1e-15)
    assert perp.distance == pytest.approx(0.9, abs=1e-15)
    assert not perp.degenerate


@settings(max_examples=40, deadline=None)
@given(seeds, radii)
def test_perpendicular_minimal_and_right_angle(seed, r):
    rng = np.random.default_rng(seed)
    dim = 2 + seed % 2
    l = geodesic_through(random_point(dim, rng, r), random_point(dim, rng, r, 2.0))
    P = random_point(dim, rng, r, 2.0)
    perp = drop_perpendicular(P, l)
    if perp.degenerate:
        return
    assert abs(angle_at(perp.foot, P, point_at(l, perp.parameter + r)) - math.pi / 2) < 1e-10
    # 1-D golden-section oracle for the nearest point
    res = minimize_scalar(lambda s: distance(P, point_at(l, s)), bracket=(-5 * r, 0.0, 5 * r),
                          method="golden", tol=1e-10)
    assert perp.distance <= res.fun + 1e-10 * r
    assert on_sheet(perp.foot)


def test_perpendicular_point_on_line_is_flagged():
    l = Geodesic(HPoint.origin(2), np.array([0.0, 1.0, 0.0]))
    perp = drop_perpendicular(point_at(l, 0.7), l)
    assert perp.degenerate
    assert perp.parameter == pytest.approx(0.7)


# --- ideal points -------------------------------------------------------------

def test_ideal_endpoints_closed_form():
    g = Geodesic(HPoint.origin(2), np.array([0.0, 1.0, 0.0]))
    fwd, back = ideal_endpoints(g)
    np.testing.assert_allclose(fwd.xi, [1, 1, 0])
    np.testing.assert_allclose(back.xi, [1, -1, 0])
    assert mdot(fwd.xi, fwd.xi) == 0.0


@settings(max_examples=40, deadline=None)
@given(seeds, st.floats(-4, 4))
def test_ideal_endpoints_reparametrization_invariant(seed, s):
    rng = np.random.default_rng(seed)
    g = geodesic_through(random_point(3, rng), random_point(3, rng, 1.0, 2.0))
    for a, b in zip(ideal_endpoints(g), ideal_endpoints(g.rebased(s))):
        assert a.close_to(b)
    # limits of x(s)/|x(s)| are the normalized endpoints
    far = g.coords([60.0])[0]
    np.testing.assert_allclose(far / far[0], ideal_endpoints(g)[0].xi, atol=1e-9)


def test_ideal_point_validation():
    with pytest.raises(GeometryError):
        IdealPoint(np.array([1.0, 0.5, 0.0]))
    xi = IdealPoint(np.array([2.0, 0.0, 2.0]))
    np.testing.assert_allclose(xi.xi, [1.0, 0.0, 1.0])


def test_geodesic_joining_runs_between_endpoints():
    a, b = IdealPoint(np.array([1.0, 1.0, 0.0])), IdealPoint(np.array([1.0, 0.0, 1.0]))
    g = geodesic_joining(a, b, 2.0)
    fwd, back = ideal_endpoints(g)
    assert fwd.close_to(b) and back.close_to(a)
    with pytest.raises(DegenerateError):
        geodesic_joining(a, a)


# --- isometries ---------------------------------------------------------------

def test_isometry_validation():
    with pytest.raises(GeometryError):
        Isometry(np.diag([1.0, 2.0, 1.0]))
    with pytest.raises(GeometryError):
        Isometry(np.diag([-1.0, 1.0, 1.0]))


def test_translation_carries_origin():
    rng = np.random.default_rng(0)
    p = random_point(3, rng, 2.0, 2.0)
    np.testing.assert_allclose(translation_to(p)(HPoint.origin(3, 2.0)).x, p.x, atol=1e-12)


def test_isometry_inverse_and_rotation():
    rng = np.random.default_rng(1)
    L = random_isometry(3, rng)
    p = random_point(3, rng)
    np.testing.assert_allclose(L.inverse()(L(p)).x, p.x, atol=1e-12)
    R = rotation(np.array([[0.0, -1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(R(np.array([1.0, 1.0, 0.0])), [1.0, 0.0, 1.0])
