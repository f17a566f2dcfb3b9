import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from domdisc.frenet import (
    BadSpec,
    DualCurve,
    Projected,
    Restricted,
    Table,
    TableMiss,
    Transformed,
    Veronese,
    check_general_position,
    check_limit_compatibility,
    curve_eval,
    dual_curve,
    flag_distance,
    hyperbolic_element,
    random_gp_spec,
    sym3,
    veronese,
)
from domdisc.projlin import Subspace, grassmann_distance, normalize

from helpers import osculating, subspace_dist

E = np.eye(4)
TWO_PI = 2 * math.pi


@pytest.mark.parametrize("theta", [0.0, math.pi / 2, math.pi, 1.1, 4.0, 5.9])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_veronese_matches_divisibility_oracle(theta, k):
    assert subspace_dist(Veronese().eval(theta, k).basis, osculating(theta, k)) < 1e-12


def test_veronese_coordinate_examples():
    f = veronese(0.0)
    assert f.v1.point().same(normalize([1, 0, 0, 0]))
    assert f.v2.equals(Subspace.from_vectors(E[0], E[1]))
    assert f.v3.equals(Subspace.from_vectors(E[0], E[1], E[2]))
    f = veronese(math.pi)
    assert f.v1.point().same(normalize([0, 0, 0, 1]))
    assert f.v2.equals(Subspace.from_vectors(E[2], E[3]))
    assert f.v3.equals(Subspace.from_vectors(E[1], E[2], E[3]))
    f = veronese(math.pi / 2)
    assert f.v1.point().same(normalize([1, -3, 3, -1]))
    assert abs(np.array([1, 1, 1, 1]) @ f.v3.basis).max() < 1e-12


def test_curve_eval_transformed_identity_and_dual(V):
    T = Transformed(np.eye(4))
    for th in (0.3, 2.0, 5.0):
        for k in (1, 2, 3):
            assert grassmann_distance(curve_eval(T, th, k), curve_eval(V, th, k)) < 1e-14
    assert curve_eval(dual_curve(V), 0.0, 1).point().same(normalize([0, 0, 0, 1]))


@pytest.mark.parametrize("t", [-3.0, -0.5, 0.0, 0.25, 2.0])
def test_dual_point_is_evaluation_functional(V, t):
    d = dual_curve(V).eval(2 * math.atan(t), 1).point()
    assert d.distance(normalize([t**3, t**2, t, 1])) < 1e-10


def test_dual_dual_is_identity(V, rng):
    DD = DualCurve(DualCurve(V))
    for th in rng.uniform(0, TWO_PI, 100):
        assert flag_distance(DD.flag(th), V.flag(th)) < 1e-10


def test_restricted_examples(V):
    R = Restricted(V, 0.0, 3)
    got = R.frame @ R.eval(math.pi, 1).basis
    assert normalize(got[:, 0]).same(normalize([0, 0, 1, 0]))
    got = R.frame @ R.eval(0.0, 1).basis
    assert normalize(got[:, 0]).same(normalize([1, 0, 0, 0]))


def test_projected_examples(V):
    P = Projected(V, 0.0, math.pi, 1)
    got = normalize((P.frame @ P.eval(math.pi / 2, 1).basis)[:, 0])
    assert got.distance(normalize([1, -3, 3, 0])) < 1e-12
    # defining branch: z = x gives xi^{1+j}(x) meet xi^3(y)
    y, x = 0.4, 2.5
    P = Projected(V, y, x, 1)
    normal = np.linalg.svd(osculating(y, 3).T)[2][-1]
    for j in (1, 2):
        got = P.frame @ P.eval(x, j).basis
        inter = Subspace(osculating(x, 1 + j))
        assert got.shape[1] == j
        assert all(inter.residual(v) < 1e-10 for v in got.T)
        assert abs(normal @ got).max() < 1e-10


def test_sym3_examples():
    g = sym3(np.eye(2))
    assert np.allclose(g.rho, np.eye(4))
    g = sym3(np.diag([2.0, 0.5]))
    for t in (-1.0, 0.3, 2.0):
        assert math.tan(g.act_theta(2 * math.atan(t)) / 2) == pytest.approx(4 * t)
    d = np.diag(g.rho)
    assert np.allclose(g.rho, np.diag(d))
    # t -> 4t on (1, -3t, 3t^2, -t^3) scales the coordinates by (1, 4, 16, 64)
    assert np.allclose(d / d[0], [1, 4, 16, 64])


def _random_sl2(rng):
    def rot(a):
        return np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])
    lam = rng.uniform(1.0, 3.0)
    return rot(rng.uniform(0, TWO_PI)) @ np.diag([lam, 1 / lam]) @ rot(rng.uniform(0, TWO_PI))


def test_sym3_equivariance(V, rng):
    for _ in range(100):
        g = sym3(_random_sl2(rng))
        th = rng.uniform(0, TWO_PI)
        k = int(rng.integers(1, 4))
        moved = Subspace(g.rho @ V.eval(th, k).basis)
        assert grassmann_distance(moved, V.eval(g.act_theta(th), k)) < 1e-9


def test_hyperbolic_element_fixed_points():
    g = hyperbolic_element(1.0, 4.0, 2.0)
    rep, att = g.fixed_points()
    assert rep == pytest.approx(1.0) and att == pytest.approx(4.0)
    th = 2.0
    for _ in range(60):
        th = g.act_theta(th)
    assert th == pytest.approx(4.0, abs=1e-9)


def test_general_position_examples(V):
    assert check_general_position(V, [(0, 1), (math.pi / 2, 1), (math.pi, 1), (3 * math.pi / 2, 1)]) > 0
    # against the determinant of the stacked curve points
    pts = np.column_stack([osculating(t, 1)[:, 0] for t in (0, math.pi / 2, math.pi, 3 * math.pi / 2)])
    assert abs(np.linalg.det(pts)) > 0.1
    assert check_general_position(V, [(0, 2), (math.pi, 2)]) == pytest.approx(1.0)
    with pytest.raises(BadSpec):
        check_general_position(V, [(1.0, 1), (1.0, 2)])


def test_general_position_random_specs(V, rng):
    for _ in range(500):
        spec = random_gp_spec(rng, 4, sep=0.05)
        assert check_general_position(V, spec) > 1e-6


def test_improved_general_position_order(V):
    # meet points contiguous in the cyclic order
    assert check_general_position(V, [(0.5, 1)], meets=[(2.0, 1)]) > 0
    with pytest.raises(BadSpec):
        check_general_position(V, [(1.0, 1), (3.0, 1)], meets=[(2.0, 1), (4.0, 1)])


def test_limit_compatibility_examples(V):
    scales = (1e-2, 1e-3, 1e-4, 1e-5)
    rep = check_limit_compatibility(V, 0.0, [(1, 1), (-1, 1)], scales)
    assert rep.monotone and rep.distances[-1] < 1e-6
    rep = check_limit_compatibility(V, 0.0, [(1, 1), (2, 1), (3, 1)], scales)
    # one-sided offsets approach xi^3(0) at first order in s
    assert rep.monotone and rep.distances[-1] < 1e-4
    with pytest.raises(BadSpec):
        check_limit_compatibility(V, 0.0, [(0, 1), (0, 1)], scales)


def test_table_curve_lookup(V):
    th = [0.0, 1.0, 2.0]
    T = Table([(t, V.flag(t)) for t in th])
    assert grassmann_distance(T.eval(1.0, 2), V.eval(1.0, 2)) < 1e-14
    with pytest.raises(TableMiss):
        T.eval(0.5, 1)


@given(st.floats(0, TWO_PI), st.integers(1, 3))
@settings(max_examples=60, deadline=None)
def test_flags_nested(theta, k):
    V = Veronese()
    if k < 3:
        small, big = V.eval(theta, k), V.eval(theta, k + 1)
        assert all(big.residual(v) < 1e-10 for v in small.basis.T)
