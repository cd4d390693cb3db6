import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from lobachevsky import figures
from lobachevsky.figures import (
    BUILDERS,
    FIGURES,
    FigureValidationError,
    Scene,
    render_svg,
)
from lobachevsky.minkowski import Geodesic, HPoint

SVG = "{http://www.w3.org/2000/svg}"


@pytest.mark.parametrize("name", FIGURES)
@pytest.mark.parametrize("r", [1.0, 3.0])
def test_every_figure_builds_validates_and_parses(name, r, tmp_path):
    out = tmp_path / f"{name}.svg"
    sc = figures.figure(name, str(out), r)
    assert sc.name == name
    root = ET.parse(out).getroot()
    assert root.tag == f"{SVG}svg"
    assert root.find(f"{SVG}title").text == name
    assert len(root.findall(f"{SVG}polyline")) > 0


@pytest.mark.parametrize("name", FIGURES)
def test_figures_are_byte_identical_on_rerun(name, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    figures.figure(name, str(a))
    figures.figure(name, str(b))
    assert a.read_bytes() == b.read_bytes()


def test_scene_scales_with_curvature():
    # drawn in units of r, the disk picture does not depend on r
    assert render_svg(BUILDERS["fig1"](1.0)).replace("fig1", "") == render_svg(BUILDERS["fig1"](3.0)).replace("fig1", "")


def test_fig1_labels_and_right_angles():
    sc = BUILDERS["fig1"]()
    labels = {p["label"] for p in sc.primitives if p["label"]}
    assert {"l", "m", "P", "S"} <= labels
    marks = [p for p in sc.primitives if p["kind"] == "angle"]
    assert len(marks) == 2 and all(p["meta"]["right"] for p in marks)


def test_fig5_line_is_drawn_inside():
    sc = BUILDERS["fig5"]()
    line = next(p for p in sc.primitives if p["label"] == "l")
    assert line["meta"]["geodesic"]
    assert line["provenance"] == "line_avoiding_angle(B, A, C)"


def test_fig6_is_flat_and_has_no_disk():
    sc = BUILDERS["fig6"]()
    assert sc.flat
    root = ET.fromstring(render_svg(sc))
    assert root.findall(f"{SVG}circle") == []


def test_fig7_has_three_horocycles():
    sc = BUILDERS["fig7"]()
    horos = [p for p in sc.primitives if p["provenance"].startswith("horocycle level")]
    assert len(horos) == 3


def test_fig8_marks_the_crossing():
    sc = BUILDERS["fig8"]()
    X = next(p for p in sc.primitives if p["label"] == "X")
    assert X["kind"] == "point"


def test_klein_projection_renders(tmp_path):
    out = tmp_path / "k.svg"
    figures.figure("fig3", str(out), projection="klein")
    ET.parse(out)
    assert out.read_text() != render_svg(BUILDERS["fig3"](), "poincare")


def test_json_is_stable_and_sorted():
    sc = BUILDERS["fig2"]()
    data = json.loads(sc.to_json())
    assert data["name"] == "fig2"
    assert sc.to_json() == BUILDERS["fig2"]().to_json()
    assert list(data) == sorted(data)


def test_validation_rejects_point_off_sheet():
    sc = Scene("bad")
    sc.point(np.array([1.0, 0.5, 0.0]), "Q", "off the sheet")
    with pytest.raises(FigureValidationError):
        sc.validate()


def test_validation_rejects_non_geodesic_curve():
    sc = Scene("bad")
    t = np.linspace(-1, 1, 20)
    x = np.column_stack([np.sqrt(1 + t ** 2 + t ** 4), t, t ** 2])
    sc.add("curve", x, "c", "not a plane section", geodesic=True)
    with pytest.raises(FigureValidationError):
        sc.validate()


def test_validation_accepts_geodesic():
    sc = Scene("ok", 2.0)
    sc.geodesic(Geodesic(HPoint.origin(2, 2.0), np.array([0.0, 0.6, 0.8])), -5, 5)
    sc.validate()


def test_unknown_figure(tmp_path):
    with pytest.raises(ValueError):
        figures.figure("fig9", str(tmp_path / "x.svg"))


def test_coordinates_inside_canvas():
    for name in FIGURES:
        root = ET.fromstring(render_svg(BUILDERS[name]()))
        for poly in root.findall(f"{SVG}polyline"):
            for pair in poly.get("points").split():
                x, y = map(float, pair.split(","))
                assert -1 <= x <= figures.CANVAS + 1 and -1 <= y <= figures.CANVAS + 1, name
