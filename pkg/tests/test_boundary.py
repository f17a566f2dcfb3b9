import math

import numpy as np
import pytest

from domdisc.boundary import (
    SIGNATURES,
    NotSingular,
    OnFrenetImage,
    PlanarCurve,
    arcs_through_point,
    composite_curve,
    convexity_margin,
    cusp_classify,
    front_view,
    intersection_pattern,
    support_disagreement,
    supporting_plane,
    top_view,
)
from domdisc.domains import boundary_point, classify_plane, dev
from domdisc.projlin import Subspace, normalize

E = np.eye(4)
PI = math.pi


def _pattern(V, cov, resolution=1024):
    return intersection_pattern(V, classify_plane(V, np.array(cov, float)), resolution)


def test_convexity_trivial_cases():
    circle = PlanarCurve.from_affine(lambda s: (np.cos(s), np.sin(s)), (0.0, 2.0))
    assert convexity_margin(circle, resolution=256) > 0
    line = PlanarCurve.from_affine(lambda s: (s, 2 * s), (0.0, 1.0))
    assert abs(convexity_margin(line, resolution=256)) < 1e-12
    s_curve = PlanarCurve.from_affine(lambda s: (s, s**3), (-1.0, 1.0))
    assert convexity_margin(s_curve, resolution=256) < 0


def test_cusp_detector_synthetic():
    cusp = PlanarCurve.from_affine(lambda s: (s**2, s**3), (-1.0, 1.0))
    assert cusp_classify(cusp, 0.0).kind == "BalancedCusp"
    inflection = PlanarCurve.from_affine(lambda s: (s, s**3), (-1.0, 1.0))
    assert cusp_classify(inflection, 0.0).kind == "C1Crossing"
    semicircle = PlanarCurve.from_affine(lambda s: (np.cos(s), np.sin(s)), (0.0, PI))
    with pytest.raises(NotSingular):
        cusp_classify(semicircle, PI / 2)


@pytest.mark.parametrize("cov, tag", [
    ((0, 0, 0, 1), "Tangent"),
    ((0, 0, 1, 0), "OscMix"),
    ((0, 1, 1, 0), "TriSecant"),
    ((1, 0, 0, 1), "SecantMix"),
])
def test_coordinate_slice_signatures(V, cov, tag):
    pat = _pattern(V, cov)
    assert pat.plane_class.tag == tag
    assert pat.signature == SIGNATURES[tag]
    assert all(a.convexity > 0 for a in pat.arcs)


def test_tangent_slice(V):
    pat = _pattern(V, (0, 0, 0, 1))
    assert pat.lines[0].equals(Subspace.from_vectors(E[0], E[1]))


def test_oscmix_singular_points(V):
    pat = _pattern(V, (0, 0, 1, 0))
    kinds = {k.kind: p for p, k, _ in pat.singular_points}
    assert kinds["BalancedCusp"].same(normalize([0, 0, 0, 1]))
    assert kinds["C1Crossing"].same(normalize([1, 0, 0, 0]))
    assert pat.lines[0].equals(Subspace.from_vectors(E[0], E[1]))


def test_trisecant_cusps_and_simplex(V):
    pat = _pattern(V, (0, 1, 1, 0))
    cusps = [p for p, k, _ in pat.singular_points if k.kind == "BalancedCusp"]
    for th in (0.0, PI / 2, PI):
        want = V.eval(th, 1).point()
        assert any(c.distance(want) < 1e-9 for c in cusps)
    assert pat.simplex_margin >= -1e-9


def test_top_view_values(V):
    pc, a_plus, a_minus = top_view(V, 0.0, PI, resolution=256)
    assert normalize(pc.eval(PI)[0]).same(normalize([0, 0, 1, 0]))
    assert normalize(pc.eval(0.0)[0]).same(normalize([1, 0, 0, 0]))
    assert a_plus.convexity > 0 and a_minus.convexity > 0


def test_top_view_against_boundary_point(V, rng):
    for _ in range(10):
        x, y = rng.uniform(0, 2 * PI, 2)
        if abs(math.remainder(x - y, 2 * PI)) < 0.1:
            continue
        pc, _, _ = top_view(V, x, y, resolution=64)
        s = x + (y - x) % (2 * PI)
        assert normalize(pc.eval(s)[0]).distance(boundary_point(V, y, x)) < 1e-10


def test_front_view_values(V):
    pc = front_view(V, PI, 0.0, resolution=256)
    # sigma(y) is the curve point, sigma(pi/2) lies on the line through p_xy and xi^1(pi/2)
    assert normalize(pc.eval(2 * PI)[0]).same(normalize([1, 0, 0, 0]))
    assert normalize(pc.eval(PI / 2 + 2 * PI)[0]).distance(normalize([1, -3, 0, -1])) < 1e-10
    kind = cusp_classify(pc, 2 * PI)
    assert kind.kind == "C1Crossing" and kind.angle < 1e-4


def test_supporting_plane_examples(V):
    plane, residual, margin = supporting_plane(V, 0.0, PI)
    assert plane.equals(Subspace.from_vectors(E[0], E[1], E[2]))
    assert residual >= -1e-9 and margin > 0
    plane, residual, _ = supporting_plane(V, PI, 0.0)
    assert plane.equals(Subspace.from_vectors(E[1], E[2], E[3])) and residual >= -1e-9
    with pytest.raises(OnFrenetImage):
        supporting_plane(V, 0.0, 0.0)


def test_support_disagreement_separates_curve_points(V, rng):
    for _ in range(5):
        x, y = rng.uniform(0, 2 * PI, 2)
        if abs(math.remainder(x - y, 2 * PI)) < 0.2:
            continue
        assert support_disagreement(V, x, y) < 1e-2
        assert support_disagreement(V, x, x) > 1e-2


def test_arc_foliation(V, rng):
    for _ in range(10):
        p = dev("pcf", (0.0, *sorted(rng.uniform(0.1, 2 * PI - 0.1, 2))))
        hits = arcs_through_point(V, 0.0, p)
        assert len(hits) == 1 and hits[0][2] < 1e-6


def test_composite_curve_convex(V):
    _, margin = composite_curve(V, 0.0, 2.0, 4.0, resolution=256)
    assert margin > 0
