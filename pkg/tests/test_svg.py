import xml.etree.ElementTree as ET

import numpy as np
import pytest

from globalsnmf.svg import HEIGHT, WIDTH, project, scatter_svg


def test_project_2d_passthrough():
    C = np.array([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_array_equal(project(C), C)


def test_project_3d_axes_120_degrees():
    P = project(np.eye(3))
    cos = [P[i] @ P[j] / (np.linalg.norm(P[i]) * np.linalg.norm(P[j])) for i, j in ((0, 1), (1, 2), (0, 2))]
    np.testing.assert_allclose(cos, -0.5, atol=1e-12)
    np.testing.assert_allclose(project(np.ones((1, 3))), 0.0, atol=1e-12)


def test_project_rejects_4d():
    with pytest.raises(ValueError):
        project(np.ones((2, 4)))


def test_svg_structure():
    gen = np.random.default_rng(0)
    doc = scatter_svg(gen.random((30, 2)), np.repeat([1, 2, 3], 10), title="t & u")
    root = ET.fromstring(doc)
    assert root.get("width") == str(WIDTH) and root.get("height") == str(HEIGHT)
    groups = [g for g in root.iter() if g.get("class") == "class-group"]
    assert [len(list(g)) for g in groups] == [10, 10, 10]
    assert [g.get("data-glyph") for g in groups] == ["circle", "square", "triangle"]


def test_svg_markers_inside_viewport():
    gen = np.random.default_rng(1)
    doc = scatter_svg(gen.random((20, 3)) * 50, np.arange(20) % 2)
    root = ET.fromstring(doc)
    for e in root.iter():
        if e.tag.endswith("circle"):
            assert 0 <= float(e.get("cx")) <= WIDTH
            assert 0 <= float(e.get("cy")) <= HEIGHT


def test_svg_label_count_mismatch():
    with pytest.raises(ValueError):
        scatter_svg(np.ones((3, 2)), [1, 2])


def test_svg_too_many_classes():
    with pytest.raises(ValueError):
        scatter_svg(np.ones((4, 2)), [1, 2, 3, 4])


def test_svg_3d_axes_inside_viewport():
    gen = np.random.default_rng(2)
    root = ET.fromstring(scatter_svg(gen.random((15, 3)), np.arange(15) % 3))
    for e in root.iter():
        if e.tag.endswith("line"):
            for a in ("x1", "x2"):
                assert 0 <= float(e.get(a)) <= WIDTH
            for a in ("y1", "y2"):
                assert 0 <= float(e.get(a)) <= HEIGHT
