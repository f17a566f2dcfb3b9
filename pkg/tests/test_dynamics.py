import math

import numpy as np
import pytest

from domdisc.dynamics import (
    NoSegment,
    Segment,
    equivariance_error,
    hausdorff,
    leaf_segment,
    limit_cases,
    limit_distance,
    power_for,
    random_hyperbolic,
)
from domdisc.frenet import hyperbolic_element

from helpers import circ


def test_segment_through_and_samples():
    e1, e2 = np.eye(4)[0], np.eye(4)[1]
    seg = Segment.through(e1, -e2, [1, 1, 0, 0])
    assert np.allclose(seg.midpoint(), np.array([1, 1, 0, 0]) / math.sqrt(2))
    S = seg.samples(5)
    assert np.allclose(S[0], e1) and np.allclose(S[-1], e2)
    with pytest.raises(NoSegment):
        Segment.through(e1, e2, [0, 0, 1, 0])


def test_hausdorff_examples():
    A = np.eye(4)[:2]
    assert hausdorff(A, A) == 0.0
    assert hausdorff(A, -A) == 0.0
    assert hausdorff(A, A[:1]) == pytest.approx(math.sqrt(2))


def test_north_south(rng):
    for _ in range(10):
        g = random_hyperbolic(rng)
        gm, gp = g.fixed_points()
        th = rng.uniform(0, 2 * math.pi)
        if circ(th, gm) < 1e-3:
            continue
        for _ in range(power_for(g, 1e8)):
            th = g.act_theta(th)
        assert circ(th, gp) < 1e-6


def test_equivariance(rng):
    for _ in range(50):
        g = random_hyperbolic(rng)
        assert equivariance_error(g, rng.uniform(0, 2 * math.pi)) < 1e-9


def test_power_for():
    g = hyperbolic_element(0.0, math.pi, 2.0)
    n = power_for(g, 1e6)
    lam = max(abs(np.linalg.eigvals(g.m)))
    assert lam**n > 1e6 >= lam ** (n - 1)


def test_leaf_segment_ends(V):
    seg = leaf_segment(V, "G_tcf", (0.0, math.pi))
    ends = {tuple(np.round(np.abs(e), 12)) for e in (seg.e1, seg.e2)}
    assert ends == {(1.0, 0.0, 0.0, 0.0), (0.0, 0.0, 0.0, 1.0)}


def test_limit_leaves(V, rng):
    g = random_hyperbolic(rng)
    n = power_for(g)
    for case in limit_cases(V, g, rng):
        assert limit_distance(case, g, n) < 1e-4, case.lemma
