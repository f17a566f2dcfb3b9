"""Iterating hyperbolic elements on leaves: the limit leaves of the basic inclusion lemmas.

Images of leaves are formed through equivariance, g G(a, b) = G(g a, g b), rather than by
applying high powers of the 4x4 matrix: near the repelling fixed point those powers lose
every digit to the ratio of the extreme eigenvalues.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._config import DEFAULT, Tolerances
from .domains import _leaf_point_fn, boundary_point, classify_points, predicted_endpoints
from .frenet import (
    FrenetCurve,
    GroupElement,
    Veronese,
    canon,
    ccw,
    circ_dist,
    hyperbolic_element,
    is_positive,
)


class NoSegment(ValueError):
    pass


@dataclass
class Segment:
    """Closed projective segment: the arc of the line e1 + e2 through ``inner``."""

    e1: np.ndarray
    e2: np.ndarray

    @classmethod
    def through(cls, e1, e2, inner) -> "Segment":
        e1, e2, inner = (np.asarray(v, float) / np.linalg.norm(v) for v in (e1, e2, inner))
        M = np.column_stack([e1, e2])
        c, *_ = np.linalg.lstsq(M, inner, rcond=None)
        if np.linalg.norm(M @ c - inner) > 1e-6 or min(abs(c[0]), abs(c[1])) < 1e-12:
            raise NoSegment("inner point is not strictly between the endpoints")
        return cls(e1 * np.sign(c[0]), e2 * np.sign(c[1]))

    def samples(self, n: int = 400) -> np.ndarray:
        u = np.linspace(0.0, 1.0, n)[:, None]
        V = (1 - u) * self.e1 + u * self.e2
        return V / np.linalg.norm(V, axis=1, keepdims=True)

    def midpoint(self) -> np.ndarray:
        v = self.e1 + self.e2
        return v / np.linalg.norm(v)

    def moved(self, g: GroupElement) -> "Segment":
        a, b = g.act(self.e1), g.act(self.e2)
        return Segment(a / np.linalg.norm(a), b / np.linalg.norm(b))


def hausdorff(A: np.ndarray, B: np.ndarray) -> float:
    """Symmetric Hausdorff distance of two sampled sets of projective points (chordal)."""
    A = A / np.linalg.norm(A, axis=1, keepdims=True)
    B = B / np.linalg.norm(B, axis=1, keepdims=True)
    D = np.sqrt(np.maximum(0.0, 2.0 - 2.0 * np.abs(A @ B.T)))
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


def leaf_segment(curve: FrenetCurve, family: str, params, tol: Tolerances = DEFAULT) -> Segment:
    """The closed segment carrying a line leaf, from its predicted endpoints."""
    ends = predicted_endpoints(curve, family, params, tol)
    fn, (lo, hi) = _leaf_point_fn(curve, family, tuple(canon(p) for p in params), tol)
    mid = fn(canon(lo + 0.5 * ccw(lo, hi)))
    return Segment.through(ends[0].v, ends[1].v, mid)


def power_for(g: GroupElement, target: float = 1e6) -> int:
    """Smallest n with lambda^n > target, lambda the larger 2x2 eigenvalue modulus."""
    lam = max(abs(np.linalg.eigvals(g.m)))
    return max(1, math.ceil(math.log(target) / math.log(lam)))


def mixed_ta_segment(curve: FrenetCurve, gm: float, a: float, c: float,
                     tol: Tolerances = DEFAULT, samples: int = 64) -> Segment:
    """Segment from xi^2(a) meet xi^3(gm) to xi^2(gm) meet xi^3(c) whose inside lies in Omega^2."""
    e1 = boundary_point(curve, a, gm, tol).v
    e2 = boundary_point(curve, gm, c, tol).v
    # both midpoints can sit in Omega^2; only one side avoids the other components
    # (samples hugging the boundary near an endpoint are tolerated)
    scored = []
    for s in (1.0, -1.0):
        seg = Segment(e1, s * e2)
        pcs = classify_points(curve, seg.samples(samples)[1:-1], tol)
        foreign = sum(pc.tag.startswith("Interior") and pc.component != 2 for pc in pcs)
        scored.append((foreign, s, seg))
    foreign, _, seg = min(scored, key=lambda t: t[0])
    if foreign:
        raise NoSegment("neither component of the line is inside Omega^2")
    return seg


@dataclass
class LimitCase:
    """A seed leaf family member, its image after n steps, and the predicted limit.

    ``make(params)`` builds the segment for a parameter tuple; entries equal to the
    repelling fixed point are carried along exactly, since it is fixed by the element.
    """

    lemma: str
    make: Callable
    params: tuple
    limit: Segment

    def seed(self) -> Segment:
        return self.make(self.params)

    track: bool = False

    def image(self, g: GroupElement, n: int) -> Segment:
        gm, _ = g.fixed_points()
        if not self.track:
            h = g.power(n)
            return self.make(tuple(t if t == gm else h.act_theta(t) for t in self.params))
        # the line has two halves inside Omega^2; follow the seed one step at a time
        seg, q = self.seed(), self.params
        for _ in range(n):
            q = tuple(t if t == gm else g.act_theta(t) for t in q)
            new = self.make(q)
            ref = seg.moved(g).samples(64)
            seg = min((new, Segment(new.e1, -new.e2)),
                      key=lambda c: hausdorff(c.samples(64), ref))
        return seg


def limit_cases(curve: FrenetCurve, g: GroupElement, rng: np.random.Generator,
                tol: Tolerances = DEFAULT, sep: float = 0.05) -> list[LimitCase]:
    """Seed leaves and predicted limits for one hyperbolic element."""
    gm, gp = g.fixed_points()
    while True:
        a, c = (float(t) for t in rng.uniform(0.0, 2 * math.pi, 2))
        if min(circ_dist(u, v) for u, v in ((a, gm), (c, gm), (a, gp), (c, gp), (a, c))) > sep:
            break
    if not is_positive(gm, a, c, tol):
        a, c = c, a
    return [
        LimitCase("G_t(gm, a) -> G_t(gm, gp)", lambda q: leaf_segment(curve, "G_tcf", q, tol),
                  (gm, a), leaf_segment(curve, "G_tcf", (gm, gp), tol)),
        LimitCase("G_p(a, gm) -> G_p(gp, gm)", lambda q: leaf_segment(curve, "G_pcf", q, tol),
                  (a, gm), leaf_segment(curve, "G_pcf", (gp, gm), tol)),
        LimitCase("ta(gm; a, c) -> G_ta(gm, gp)", lambda q: mixed_ta_segment(curve, *q, tol=tol),
                  (gm, a, c), leaf_segment(curve, "G_ctaf", (gp, gm), tol), track=True),
    ]


def limit_distance(case: LimitCase, g: GroupElement, n: int, samples: int = 400) -> float:
    return hausdorff(case.image(g, n).samples(samples), case.limit.samples(samples))


def random_hyperbolic(rng: np.random.Generator, sep: float = 0.3) -> GroupElement:
    while True:
        rep, att = rng.uniform(0.0, 2 * math.pi, 2)
        if min(ccw(rep, att), ccw(att, rep)) > sep:
            break
    return hyperbolic_element(float(rep), float(att), float(rng.uniform(1.5, 4.0)))


def equivariance_error(g: GroupElement, theta: float, curve: FrenetCurve | None = None) -> float:
    """Chordal distance between g xi^1(theta) and xi^1(g theta)."""
    curve = curve or Veronese()
    u = g.act(curve.point(theta))
    v = curve.point(g.act_theta(theta))
    u = u / np.linalg.norm(u)
    return float(min(np.linalg.norm(u - v), np.linalg.norm(u + v)))
