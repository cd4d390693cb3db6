import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lobachevsky.trig import (
    IDENTITY_NAMES,
    SUBSTITUTION_FACTORS,
    TriangleMeasurements,
    accordance_check,
    accordance_json,
    euclidean_limit_exponent,
    hyperbolic_identities,
    hyperbolic_right_residuals,
    imaginary_substitution_residual,
    measure_triangle,
    parallelism_identity_check,
    sphere_right_triangle,
    spherical_right_residuals,
    substitution_report,
    synthesize_right_triangle,
)

sides = st.floats(0.1, 2.0)
angles = st.floats(0.1, 1.5)


# --- hyperbolic right triangles -------------------------------------------------

def test_unit_legs_triangle():
    t = measure_triangle(*synthesize_right_triangle(1.0, 1.0), 1.0)
    # acosh(cosh(1)^2) = 1.51337400...
    assert t.c == pytest.approx(math.acosh(math.cosh(1.0) ** 2), abs=1e-12)
    assert t.c == pytest.approx(1.5133740066, abs=1e-10)
    assert t.C == pytest.approx(math.pi / 2, abs=1e-12)
    assert hyperbolic_right_residuals(t).max() < 1e-10


@pytest.mark.parametrize("r", [0.5, 1.0, 3.0])
def test_synthesized_triangles_satisfy_identities(r):
    rng = np.random.default_rng(5)
    for _ in range(20):
        a, b = rng.uniform(0.1, 2.0, size=2) * r
        t = measure_triangle(*synthesize_right_triangle(a, b, r), r)
        assert t.a == pytest.approx(a, rel=1e-12)
        assert t.b == pytest.approx(b, rel=1e-12)
        assert hyperbolic_right_residuals(t).max() < 1e-10


def test_degenerate_leg_limit():
    t = measure_triangle(*synthesize_right_triangle(1e-7, 1.3), 1.0)
    assert t.c == pytest.approx(1.3, abs=1e-12)
    assert t.A < 1e-6
    assert hyperbolic_right_residuals(t).max() < 1e-10


def test_pythagorean_residual_series_in_large_radius():
    # fixed (non-right) side lengths: residual * 2 r^2 / (c^2 - a^2 - b^2) -> 1
    a, b, c = 1.0, 1.2, 2.0
    ratios = []
    for r in (10.0, 100.0, 1000.0):
        res = hyperbolic_identities(a, b, c, 0.5, 0.5, r).pythagorean
        ratios.append(res * 2 * r * r / (c * c - a * a - b * b))
    errs = [abs(x - 1) for x in ratios]
    assert errs[0] < 0.05
    assert errs[1] < 1e-3
    assert errs[2] < 1e-5


def test_wrong_geometry_tag_rejected():
    t = TriangleMeasurements(1, 1, 1.5, 0.7, 0.7, math.pi / 2, geometry="spherical")
    with pytest.raises(ValueError):
        hyperbolic_right_residuals(t)
    with pytest.raises(ValueError):
        spherical_right_residuals(TriangleMeasurements(1, 1, 1.5, 0.7, 0.7, math.pi / 2))


def test_non_right_angle_rejected():
    with pytest.raises(ValueError):
        hyperbolic_right_residuals(TriangleMeasurements(1, 1, 1.5, 0.7, 0.7, 1.5))


def test_measurements_validate():
    with pytest.raises(ValueError):
        TriangleMeasurements(-1, 1, 1, 1, 1, 1)
    with pytest.raises(ValueError):
        TriangleMeasurements(1, 1, 1, 1, 1, 1, geometry="elliptic-ish")


# --- spherical right triangles -------------------------------------------------------

def test_octant_triangle():
    h = math.pi / 2
    t = TriangleMeasurements(h, h, h, h, h, h, geometry="spherical")
    assert max(abs(v) for v in spherical_right_residuals(t)) < 1e-15


def test_small_spherical_triangle():
    t = sphere_right_triangle(1e-5, 2e-5)
    assert max(abs(v) for v in spherical_right_residuals(t)) < 1e-12


@pytest.mark.parametrize("R", [1.0, 2.5])
def test_random_sphere_triangles(R):
    rng = np.random.default_rng(9)
    for _ in range(50):
        a, b = rng.uniform(0.1, 1.5, size=2) * R
        t = sphere_right_triangle(a, b, rng, R)
        assert t.C == pytest.approx(math.pi / 2, abs=1e-12)
        assert max(abs(v) for v in spherical_right_residuals(t)) < 1e-10


def test_spherical_side_out_of_range():
    t = TriangleMeasurements(3.5, 1.0, 1.0, 1.0, 1.0, math.pi / 2, geometry="spherical")
    with pytest.raises(ValueError):
        spherical_right_residuals(t)


# --- imaginary substitution ---------------------------------------------------------

def test_cos_of_i_is_cosh():
    assert cmath.cos(1j) == pytest.approx(math.cosh(1.0), abs=0)
    assert cmath.cos(1j).real == pytest.approx(1.5430806348152437, abs=1e-15)


@settings(max_examples=200)
@given(sides, sides, sides, angles, angles)
def test_substitution_exact(a, b, c, A, B):
    assert imaginary_substitution_residual(a, b, c, A, B) < 1e-12


def test_substitution_report_factors():
    rows = substitution_report(0.7, 1.1, 1.4, 0.6, 0.8)
    assert [row["identity"] for row in rows] == list(IDENTITY_NAMES)
    assert [row["factor"] for row in rows] == ["1", "i", "i", "1"]
    assert SUBSTITUTION_FACTORS == (1, 1j, 1j, 1)
    # the factor-one identities come out purely real
    for row in rows:
        if row["factor"] == "1":
            assert row["spherical_at_imaginary"][1] == 0.0


def test_substitution_without_factor_fails_for_sine():
    # the i factor is needed: without it the sine identity does not match
    a, b, c, A, B = 0.7, 1.1, 1.4, 0.6, 0.8
    row = substitution_report(a, b, c, A, B)[1]
    s = complex(*row["spherical_at_imaginary"])
    assert abs(s - row["hyperbolic"]) > 0.1


# --- accordance -----------------------------------------------------------------------

@pytest.mark.parametrize("r", [1.0, 3.0])
def test_accordance(r):
    rep = accordance_check(500, r, seed=0)
    assert rep["max_residual"] < 1e-9
    assert rep["max_right_angle_error"] < 1e-9
    assert set(rep["max_residuals"]) == set(IDENTITY_NAMES)


def test_accordance_json_deterministic():
    a = accordance_json(50, 1.0, seed=3)
    assert a == accordance_json(50, 1.0, seed=3)
    assert json.loads(a)["n"] == 50


def test_accordance_rejects_empty():
    with pytest.raises(ValueError):
        accordance_check(0)


# --- parallelism identity and Euclidean limit ----------------------------------------------

def test_parallelism_identity():
    assert abs(parallelism_identity_check(1.0)) < 1e-14
    assert parallelism_identity_check(1e-12) == pytest.approx(0.0, abs=1e-15)
    grid = np.linspace(0.01, 10.0, 500)
    assert max(abs(parallelism_identity_check(d)) for d in grid) < 1e-12
    assert max(abs(parallelism_identity_check(d, 3.0)) for d in grid) < 1e-12


def test_euclidean_limit_exponent():
    p, defects = euclidean_limit_exponent()
    assert 1.9 <= p <= 2.1
    assert all(x > y for x, y in zip(defects, defects[1:]))
