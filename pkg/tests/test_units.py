import math

import numpy as np
import pytest

from lobachevsky.units import (
    FALLBACK_TOL,
    ISOMETRIC,
    UnitMap,
    UnitMismatch,
    builtin_registry,
    check_isometric,
    compare_instantiations,
    compose,
    graph_geodesic_metric,
    identity,
    standard_horosphere,
)
from lobachevsky.minkowski import HPoint


@pytest.fixture(scope="module")
def reg():
    return builtin_registry()


def test_units_and_identities_registered(reg):
    assert set(reg.units) == {"EPLANE", "ESPACE", "ISPACE", "IPLANE", "CIRCLE", "SPHERE"}
    for name in reg.units:
        f = reg.lookup(name, name, f"id_{name}")
        assert f.is_identity


def test_lookup_h(reg):
    h = reg.lookup("EPLANE", "ISPACE", "h")
    assert h.source is reg.units["EPLANE"] and h.target is reg.units["ISPACE"]
    x = h([1.0, 2.0])
    assert standard_horosphere().contains(HPoint(x))


def test_lookup_missing(reg):
    with pytest.raises(KeyError):
        reg.lookup("EPLANE", "SPHERE", "h")
    with pytest.raises(KeyError):
        reg.by_name("nope")


def test_claims(reg):
    assert ISOMETRIC in reg.by_name("e").claims
    assert ISOMETRIC in reg.by_name("h").claims
    assert ISOMETRIC in reg.by_name("c").claims
    for kind in ("klein", "poincare", "klein-ball", "poincare-ball"):
        assert ISOMETRIC not in reg.by_name(kind).claims


# --- composition --------------------------------------------------------------

def test_identity_laws(reg):
    for f in (reg.by_name("e"), reg.by_name("h"), reg.by_name("c")):
        left = compose(identity(f.source), f)
        right = compose(f, identity(f.target))
        for x in f.source.sample(20, seed=1):
            assert np.array_equal(left(x), f(x))
            assert np.array_equal(right(x), f(x))


def test_associativity(reg):
    c, h = reg.by_name("c"), reg.by_name("h")
    i = identity(reg.units["ISPACE"])
    lhs = compose(compose(c, h), i)
    rhs = compose(c, compose(h, i))
    for x in c.source.sample(20, seed=2):
        assert np.array_equal(lhs(x), rhs(x))


def test_compose_mismatch(reg):
    with pytest.raises(UnitMismatch):
        compose(reg.by_name("h"), reg.by_name("c"))


def test_compose_claims_intersect(reg):
    assert ISOMETRIC in compose(reg.by_name("c"), reg.by_name("h")).claims
    assert ISOMETRIC not in compose(reg.by_name("klein"), reg.by_name("e")).claims
    assert compose(reg.by_name("h"), identity(reg.units["ISPACE"])).claims == reg.by_name("h").claims


def test_circle_through_horosphere_is_closed_curve_on_it(reg):
    f = compose(reg.by_name("c"), reg.by_name("h"))
    h = standard_horosphere()
    ts = np.linspace(0, 2 * math.pi, 50)
    X = [f([t]) for t in ts]
    assert all(h.contains(HPoint(x)) for x in X)
    assert np.allclose(X[0], X[-1], atol=1e-12)


# --- isometric checks ---------------------------------------------------------

def test_identity_deviation_zero(reg):
    rep = check_isometric(identity(reg.units["EPLANE"]), 50)
    assert rep["max_relative_deviation"] == 0.0
    assert rep["pass"]


def test_e_is_rigid(reg):
    rep = check_isometric(reg.by_name("e"), 100)
    assert rep["max_relative_deviation"] < 1e-14
    assert rep["pass"]


def test_h_matches_path_oracle(reg):
    rep = check_isometric(reg.by_name("h"), 50)
    assert rep["max_relative_deviation"] < 1e-5
    assert rep["pass"]


def test_every_claim_verifies(reg):
    for m in reg.maps.values():
        if ISOMETRIC in m.claims:
            assert check_isometric(m, 20)["pass"], m.name


def test_non_isometric_map_fails_check(reg):
    # the Klein map is not isometric; the graph fallback must notice
    rep = check_isometric(reg.by_name("klein"), 20, tol=1e-2)
    assert not rep["pass"]


def test_pairs_must_be_positive(reg):
    with pytest.raises(ValueError):
        check_isometric(reg.by_name("e"), 0)


def test_graph_fallback_on_circle(reg):
    f = compose(reg.by_name("c"), reg.by_name("e"))
    metric = graph_geodesic_metric(f)
    x, y = f([0.0]), f([2.0])
    assert metric(x, y) == pytest.approx(2.0, rel=FALLBACK_TOL)


def test_fallback_tolerance_applied(reg):
    rep = check_isometric(compose(reg.by_name("c"), reg.by_name("h")), 20)
    assert rep["tolerance"] == FALLBACK_TOL
    assert rep["pass"]


# --- instantiations -------------------------------------------------------------

def test_compare_e_and_h(reg):
    rep = compare_instantiations(reg.units["EPLANE"], reg.by_name("e"), reg.by_name("h"))
    assert rep["same_type"]
    assert not rep["same_space"]
    assert [m["space"] for m in rep["maps"]] == ["ESPACE", "ISPACE"]


def test_compare_same_map(reg):
    e = reg.by_name("e")
    rep = compare_instantiations(reg.units["EPLANE"], e, e)
    assert rep["same_space"] and rep["same_type"]
    assert rep["maps"][0] == rep["maps"][1]


def test_compare_circle_instantiations(reg):
    c = reg.by_name("c")
    rep = compare_instantiations(reg.units["CIRCLE"], c, compose(c, reg.by_name("h")), pairs=20)
    assert rep["same_type"]


def test_compare_requires_common_source(reg):
    with pytest.raises(UnitMismatch):
        compare_instantiations(reg.units["EPLANE"], reg.by_name("e"), reg.by_name("c"))


# --- unit metrics --------------------------------------------------------------------

@pytest.mark.parametrize("name", ["EPLANE", "ESPACE", "ISPACE", "IPLANE", "CIRCLE", "SPHERE"])
def test_metric_axioms_on_samples(reg, name):
    u = reg.units[name]
    X = u.sample(12, seed=4)
    D = u.distances(X, X)
    scale = max(1.0, float(np.max(D)))
    assert np.all(D >= 0)
    assert np.allclose(D, D.T, atol=1e-12 * scale)
    assert np.allclose(np.diag(D), 0.0, atol=1e-7)
    viol = D[:, :, None] - D[:, None, :] - D.T[None, :, :]
    assert np.max(viol) < 1e-9 * scale


def test_sampler_deterministic(reg):
    u = reg.units["ISPACE"]
    assert np.array_equal(u.sample(5, seed=3), u.sample(5, seed=3))


def test_unit_map_repr(reg):
    assert "EPLANE -> ISPACE" in repr(reg.by_name("h"))
    assert isinstance(reg.by_name("h"), UnitMap)
