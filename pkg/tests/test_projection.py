import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lobachevsky.minkowski import Geodesic, HPoint, random_point
from lobachevsky.projection import KINDS, from_disk, to_disk, to_disk_many

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


@pytest.mark.parametrize("kind", KINDS)
def test_origin_maps_to_center(kind):
    assert np.allclose(to_disk(HPoint.origin(2, 3.0), kind), 0.0)


def test_known_radii():
    p = HPoint(np.array([math.cosh(1.0), math.sinh(1.0), 0.0]))
    assert to_disk(p, "klein")[0] == pytest.approx(math.tanh(1.0))
    assert to_disk(p, "poincare")[0] == pytest.approx(math.tanh(0.5))


def test_klein_maps_geodesics_to_chords():
    g = Geodesic(HPoint(np.array([math.cosh(0.5), 0.0, math.sinh(0.5)])), np.array([0.0, 1.0, 0.0]))
    Z = to_disk_many(g.coords(np.linspace(-4, 4, 30)), "klein")
    assert np.allclose(Z[:, 1], math.tanh(0.5))


@settings(max_examples=50, deadline=None)
@given(seeds, st.sampled_from(KINDS), st.sampled_from([0.5, 1.0, 3.0]))
def test_round_trip(seed, kind, r):
    p = random_point(2, np.random.default_rng(seed), r, 3.0)
    z = to_disk(p, kind)
    assert np.linalg.norm(z) < 1
    assert np.allclose(from_disk(z, kind, r).x, p.x, rtol=1e-9)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_ball_images_stay_inside(seed):
    p = random_point(3, np.random.default_rng(seed), 1.0, 5.0)
    for kind in KINDS:
        assert np.linalg.norm(to_disk(p, kind)) < 1


def test_outside_disk_rejected():
    with pytest.raises(ValueError):
        from_disk(np.array([0.8, 0.6]))


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        to_disk_many(np.array([[1.0, 0.0, 0.0]]), "mercator")
    with pytest.raises(ValueError):
        from_disk(np.array([0.1, 0.1]), "mercator")
