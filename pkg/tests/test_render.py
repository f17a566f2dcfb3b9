import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from domdisc.boundary import SIGNATURES, intersection_pattern
from domdisc.domains import classify_plane, leaf, surface_F
from domdisc.frenet import Transformed
from domdisc.projlin import Chart
from domdisc.render import (
    boundary_mesh,
    grid_params,
    leaves_svg,
    mesh_F_residual,
    mesh_unit_residual,
    slice_svg,
    unpack_ply_vertices,
)

NS = "{http://www.w3.org/2000/svg}"


def svg_signature(text):
    root = ET.fromstring(text.split("\n", 1)[1])  # drop the XML declaration line
    classes = [el.get("class") for el in root.iter() if el.get("class")]
    return (classes.count("arc"), classes.count("line"), classes.count("cusp"), classes.count("c1x"))


def test_grid_params_avoid_special_values():
    th = grid_params(8)
    assert len(th) == 8 and th[0] == pytest.approx(math.pi / 8)
    assert np.min(np.abs(th - math.pi)) > 0.1


def test_small_mesh_counts(V):
    m = boundary_mesh(V, 2)
    assert m.vertices.shape == (4, 3) and m.triangles.shape == (8, 3)
    m = boundary_mesh(V, 16)
    assert len(m.vertices) == 256 and len(m.triangles) == 512
    assert m.triangles.min() == 0 and m.triangles.max() == 255


def test_mesh_vertices_on_surface(V):
    m = boundary_mesh(V, 32)
    assert mesh_unit_residual(m).max() < 1e-12
    # in the chart, the residual is relative to the vertex size (F has degree 4)
    scale = (1 + np.sum(m.vertices**2, axis=1)) ** 2
    assert np.max(mesh_F_residual(m) / scale) < 1e-12


def test_mesh_identity_transform_bytes(V):
    assert boundary_mesh(Transformed(np.eye(4)), 8).obj() == boundary_mesh(V, 8).obj()


def test_obj_format(V):
    lines = boundary_mesh(V, 4).obj().splitlines()
    assert sum(l.startswith("v ") for l in lines) == 16
    faces = [l for l in lines if l.startswith("f ")]
    assert len(faces) == 32
    assert min(int(t) for f in faces for t in f.split()[1:]) == 1


def test_ply_roundtrip(V):
    m = boundary_mesh(V, 8)
    data = m.ply()
    assert data.startswith(b"ply\nformat binary_little_endian 1.0\n")
    assert np.array_equal(unpack_ply_vertices(data), m.vertices)


@pytest.mark.parametrize("cov, tag", [
    ((0, 0, 0, 1), "Tangent"),
    ((0, 0, 1, 0), "OscMix"),
    ((0, 1, 1, 0), "TriSecant"),
    ((1, 0, 0, 1), "SecantMix"),
])
def test_slice_svg_signature(V, cov, tag):
    pc = classify_plane(V, np.array(cov, float))
    pat = intersection_pattern(V, pc, 1024)
    text = slice_svg(pat, Chart.default(), tag)
    arcs, lines, cusps, c1x = svg_signature(text)
    assert (arcs, lines, cusps) == SIGNATURES[tag]
    assert text == slice_svg(pat, Chart.default(), tag)


def test_leaves_svg(V):
    lf = leaf(V, "G_tcf", (1.0, 3.0), 64)
    text = leaves_svg([lf], Chart.default(), "G_tcf")
    root = ET.fromstring(text.split("\n", 1)[1])
    assert len(root.findall(f"{NS}path")) == 1
    assert len(root.findall(f"{NS}circle")) == 2


def test_F_vanishes_at_triple_root():
    # (t - 1)^3 = t^3 - 3t^2 + 3t - 1
    assert surface_F(-3.0, 3.0, -1.0) == pytest.approx(0.0, abs=1e-12)
