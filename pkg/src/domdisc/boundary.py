"""Geometry of the boundary surface: plane slices, cusp detectors, top and front views.

Every slice curve here is a point of a projective plane depending polynomially on the
half-angle pair (c, s), so it is carried as a ``HomogLift`` and evaluated exactly at any
parameter, including the singular ones.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import linprog

from ._config import DEFAULT, Tolerances
from .domains import (
    PlaneClass,
    boundary_point,
    classify_point,
    secant_params,
)
from .frenet import (
    TWO_PI,
    FrenetCurve,
    HomogLift,
    PolyCurve,
    Projected,
    canon,
    ccw,
    in_open_arc,
    is_positive,
    poly_mul,
    same_param,
)
from .projlin import ProjLinError, ProjPoint, Subspace, annihilator, normalize, span

__all__ = [
    "PlanarCurve", "SingularKind", "IntersectionPattern", "boundary_point",
    "intersection_pattern", "top_view", "front_view", "convexity_margin",
    "cusp_classify", "supporting_plane", "support_disagreement",
]


class ResolutionTooCoarse(ProjLinError):
    pass


class TooFewSamples(ValueError):
    pass


class NotSingular(ValueError):
    pass


class OnFrenetImage(ProjLinError):
    pass


class BadParams(ProjLinError):
    pass


# planar curves

def _align(V: np.ndarray) -> np.ndarray:
    """Consecutive sign alignment of homogeneous representatives (rows)."""
    V = np.array(V, float)
    dots = np.einsum("ij,ij->i", V[1:], V[:-1])
    flips = np.concatenate([[1.0], np.cumprod(np.where(dots < 0, -1.0, 1.0))])
    return V * flips[:, None]


def _max_min_covector(U: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    """Unit k maximizing min_i <k, u_i> within the box |k_j| <= 1."""
    d = U.shape[1]
    res = linprog(np.r_[np.zeros(d), -1.0], A_ub=np.c_[-U, np.ones(len(U))], b_ub=np.zeros(len(U)),
                  bounds=[(-1.0, 1.0)] * d + [(None, 1.0)], method="highs")
    if not res.success or res.x[-1] <= 0:
        return fallback
    k = res.x[:d]
    return k / np.linalg.norm(k)


@dataclass
class PlaneChart:
    """Affine chart of a projective plane: a covector k and an orthonormal frame of k-perp."""

    basis: np.ndarray  # 4 x 3 orthonormal frame of the plane
    k: np.ndarray  # covector in plane coordinates
    F: np.ndarray  # 3 x 2

    @classmethod
    def around(cls, basis: np.ndarray, U: np.ndarray) -> "PlaneChart":
        """Chart containing the (sign-aligned) plane coordinates U.

        The centroid direction usually works; for long arcs the covector maximizing the
        smallest pairing is found by a linear program instead.
        """
        Un = U / np.linalg.norm(U, axis=1, keepdims=True)
        k = Un.mean(axis=0)
        nk = np.linalg.norm(k)
        k = Un[0] if nk < 1e-12 else k / nk
        if np.min(Un @ k) <= 1e-9:
            k = _max_min_covector(Un, k)
        q, _ = np.linalg.qr(np.column_stack([k, np.eye(3)]))
        F = q[:, 1:3]
        return cls(basis, k, F)

    def plane_coords(self, V) -> np.ndarray:
        return np.asarray(V, float) @ self.basis

    def coords(self, V) -> np.ndarray:
        U = self.plane_coords(V)
        return (U @ self.F) / (U @ self.k)[..., None]

    def pairing(self, V) -> np.ndarray:
        U = self.plane_coords(V)
        return (U @ self.k) / np.linalg.norm(U, axis=-1)

    def as_dict(self) -> dict:
        return {"inf": (self.basis @ self.k).tolist(), "frame": (self.basis @ self.F).T.tolist()}


@dataclass
class PlanarCurve:
    """Curve in a projective plane of RP^3 given by a parameter-to-vector map.

    ``interval`` is the ccw parameter arc (lo, hi); ``closed`` marks a full circle.
    """

    plane: Subspace
    fn: Callable[[np.ndarray], np.ndarray]
    interval: tuple = (0.0, TWO_PI)
    closed: bool = False
    source: FrenetCurve | None = None
    name: str = ""
    lift: HomogLift | None = None

    def eval(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, float))
        return self.fn(s)

    def params(self, n: int, interval=None, endpoints: bool = True) -> np.ndarray:
        lo, hi = interval or self.interval
        length = hi - lo
        if endpoints:
            return lo + length * np.linspace(0.0, 1.0, n)
        return lo + length * (np.arange(n) + 0.5) / n

    def samples(self, n: int, interval=None, endpoints: bool = True):
        s = self.params(n, interval, endpoints)
        return s, _align(self.eval(s))

    def chart(self, V) -> PlaneChart:
        return PlaneChart.around(self.plane.basis, _align(V) @ self.plane.basis)

    def residual(self, n: int = 64) -> float:
        _, V = self.samples(n)
        return self.plane.residual(V.T)

    @classmethod
    def from_affine(cls, fn2d, interval, closed=False, name="") -> "PlanarCurve":
        """Synthetic curve (x(s), y(s)) drawn in the plane {x3 = 0} with chart x0 = 1."""
        plane = Subspace(np.eye(4)[:, :3])

        def fn(s):
            xy = np.asarray(fn2d(s), float).reshape(2, -1).T
            return np.column_stack([np.ones(len(xy)), xy, np.zeros(len(xy))])

        return cls(plane, fn, tuple(interval), closed, None, name)


def lift_curve(plane: Subspace, lift: HomogLift, interval=(0.0, TWO_PI), closed=False,
               source=None, name="") -> PlanarCurve:
    return PlanarCurve(plane, lambda s: lift(s), tuple(interval), closed, source, name, lift)


# polynomial slice curves

def _line_meet_lift(curve: FrenetCurve, kappa: np.ndarray, strip=()) -> HomogLift:
    """w -> xi^2(w) meet {kappa = 0}, with the common roots at ``strip`` divided out."""
    base = curve.lift
    A, A1 = base.coeffs(0), base.coeffs(1)
    ka, ka1 = kappa @ A, kappa @ A1
    raw = np.array([poly_mul(A[i], ka1) - poly_mul(A1[i], ka) for i in range(A.shape[0])])
    lf = HomogLift(raw / np.abs(raw).max())
    for t in strip:
        lf = lf.strip_root(t)
    return lf.reduced()


def _front_lift(curve: FrenetCurve, kappa: np.ndarray, p: np.ndarray) -> HomogLift:
    """w -> (p + xi^1(w)) meet {kappa = 0}."""
    A = curve.lift.coeffs(0)
    raw = np.outer(p, kappa @ A) - float(kappa @ p) * A
    return HomogLift(raw / np.abs(raw).max())


def _plane_covector(P: Subspace) -> np.ndarray:
    return annihilator(P).basis[:, 0]


# convexity

def _turns(X: np.ndarray):
    d = np.diff(X, axis=0)
    nd = np.linalg.norm(d, axis=1)
    keep = nd > 1e-15 * max(1.0, float(np.abs(X).max()))
    d, nd = d[keep], nd[keep]
    u = d / nd[:, None]
    cross = u[:-1, 0] * u[1:, 1] - u[:-1, 1] * u[1:, 0]
    dot = np.einsum("ij,ij->i", u[:-1], u[1:])
    return cross, np.arctan2(cross, dot)


def convexity_margin(pc: PlanarCurve, interval=None, resolution: int = 2048) -> float:
    """Minimum signed turning (sine of the angle) over consecutive sample triples.

    Positive certifies strict convexity at this resolution. An open arc must also turn by
    less than a full turn in total, so that it lies on the boundary of its convex hull;
    otherwise the shortfall is returned.
    """
    if resolution < 4:
        raise TooFewSamples("need at least 4 samples")
    closed = pc.closed and interval is None
    _, V = pc.samples(resolution, interval, endpoints=not closed)
    if closed:
        V = np.vstack([V, V[:2] * np.sign(V[:2] @ V[-1])[:, None]])
    return _margin_from_vectors(pc.plane.basis, V, closed)


def _margin_from_vectors(basis: np.ndarray, V: np.ndarray, closed: bool) -> float:
    if len(V) < 4:
        raise TooFewSamples("need at least 4 samples")
    ch = PlaneChart.around(basis, _align(V) @ basis)
    if np.min(ch.pairing(V) * np.sign(ch.pairing(V[:1]))) <= 1e-12:
        return -1.0  # not inside one affine chart
    X = ch.coords(V)
    cross, ang = _turns(X)
    if cross.size == 0:
        return 0.0
    sgn = 1.0 if np.sum(cross) >= 0 else -1.0
    margin = float(np.min(sgn * cross))
    total = float(np.sum(np.abs(ang)))
    if not closed and total >= TWO_PI:
        margin = min(margin, TWO_PI - total)
    return margin


# singular points

@dataclass
class SingularKind:
    kind: str
    tangent: np.ndarray
    angle: float = 0.0
    tangent_flip: bool = False
    transverse_flips: int = 0

    def as_dict(self) -> dict:
        return {"kind": self.kind, "tangent": [float(t) for t in self.tangent],
                "angle": float(self.angle), "tangent_flip": bool(self.tangent_flip),
                "transverse_flips": int(self.transverse_flips)}


def _one_sided_dirs(pc: PlanarCurve, s0: float, hs, ch: PlaneChart):
    out = []
    for sgn in (1.0, -1.0):
        ds = []
        for h in hs:
            q = ch.coords(pc.eval(s0 + sgn * h))[0]
            ds.append(q / np.linalg.norm(q))
        ds = [d if d @ ds[0] >= 0 else -d for d in ds]
        # Richardson in h with ratio 10 between consecutive scales
        r1 = (10 * ds[1] - ds[0]) / 9
        r2 = (10 * ds[2] - ds[1]) / 9
        t = (100 * r2 - r1) / 99
        out.append(t / np.linalg.norm(t))
    return out


def cusp_classify(pc: PlanarCurve, s0: float, tol: Tolerances = DEFAULT,
                  scales=(1e-3, 1e-4, 1e-5), probe: float = 1e-3,
                  n_transverse: int = 8, cone: float = 0.1) -> SingularKind:
    """Balanced cusp, C1 crossing or smooth, by one-sided tangents and side tests."""
    p0 = pc.eval(s0)[0]
    if pc.source is not None:
        tag = classify_point(pc.source, p0, tol).tag
        if tag != "BoundaryFrenet":
            raise NotSingular(f"curve point classifies as {tag}")
    u0 = p0 @ pc.plane.basis
    u0 = u0 / np.linalg.norm(u0)
    q, _ = np.linalg.qr(np.column_stack([u0, np.eye(3)]))
    ch = PlaneChart(pc.plane.basis, u0, q[:, 1:3])
    tp, tm = _one_sided_dirs(pc, s0, scales, ch)
    angle = float(np.arccos(min(1.0, abs(float(tp @ tm)))))
    t = tp + np.sign(tp @ tm or 1.0) * tm
    t = t / np.linalg.norm(t)
    n = np.array([-t[1], t[0]])
    qp = ch.coords(pc.eval(s0 + probe))[0]
    qm = ch.coords(pc.eval(s0 - probe))[0]
    tflip = (n @ qp) * (n @ qm) < 0
    base = math.atan2(t[1], t[0])
    flips, used = 0, 0
    for j in range(n_transverse):
        phi = base + cone + (math.pi - 2 * cone) * (j + 0.5) / n_transverse
        m = np.array([-math.sin(phi), math.cos(phi)])
        used += 1
        flips += int((m @ qp) * (m @ qm) < 0)
    agree = angle < tol.tan
    if agree and tflip and flips == 0:
        kind = "BalancedCusp"
    elif agree and tflip and flips == used:
        kind = "C1Crossing"
    else:
        kind = "SmoothConvex"
        if pc.source is None and agree and not tflip and flips == used:
            raise NotSingular("regular smooth point")
    return SingularKind(kind, t, angle, bool(tflip), flips)


# intersection patterns

@dataclass
class Arc:
    interval: tuple
    samples: np.ndarray
    convexity: float
    params: np.ndarray = field(repr=False, default=None)


@dataclass
class IntersectionPattern:
    plane_class: PlaneClass
    plane: Subspace
    curve: PlanarCurve
    arcs: list
    lines: list
    singular_points: list
    simplex_margin: float | None = None

    @property
    def signature(self) -> tuple[int, int, int]:
        cusps = sum(1 for _, k, _ in self.singular_points if k.kind == "BalancedCusp")
        return len(self.arcs), len(self.lines), cusps

    def as_dict(self, chart: PlaneChart | None = None) -> dict:
        chart = chart or self.chart()
        arcs = []
        for a in self.arcs:
            ok = np.abs(chart.pairing(a.samples)) > 1e-9
            arcs.append({"interval": [float(t) for t in a.interval],
                         "convexity": float(a.convexity),
                         "points": np.where(ok[:, None], chart.coords(a.samples), np.nan).tolist()})
        return {
            "class": self.plane_class.as_dict(),
            "chart": chart.as_dict(),
            "arcs": arcs,
            "lines": [{"dim": l.dim, "basis": l.basis.T.tolist()} for l in self.lines],
            "singular_points": [{"p": p.v.tolist(), "kind": k.as_dict(), "tag": tag}
                                for p, k, tag in self.singular_points],
            "simplex_margin": None if self.simplex_margin is None else float(self.simplex_margin),
        }

    def chart(self) -> PlaneChart:
        V = np.vstack([a.samples for a in self.arcs])
        return PlaneChart.around(self.plane.basis, _align(V) @ self.plane.basis)


SIGNATURES = {"Tangent": (1, 1, 0), "OscMix": (2, 1, 1), "TriSecant": (3, 0, 3), "SecantMix": (3, 0, 1)}


def _arc(pc: PlanarCurve, lo: float, hi: float, resolution: int) -> Arc:
    s = lo + (hi - lo) * np.linspace(0.0, 1.0, resolution)
    V = _align(pc.eval(s))
    return Arc((canon(lo), canon(hi)), V, _margin_from_vectors(pc.plane.basis, V, False), s)


def _simplex_margin(V: np.ndarray, verts: np.ndarray) -> float:
    """How far the samples are inside one closed triangle cut out by the three side lines."""
    B = np.linalg.solve(verts.T @ verts, verts.T @ V.T).T  # barycentric coordinates
    B = B / np.linalg.norm(B, axis=1, keepdims=True)
    best = -np.inf
    for pattern in ((1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1)):
        S = B * np.array(pattern)
        # homogeneous coordinates: either global sign may carry the pattern
        per = np.maximum(S.min(axis=1), (-S).min(axis=1))
        best = max(best, float(per.min()))
    return best


def intersection_pattern(curve: FrenetCurve, pc: PlaneClass, resolution: int = 2048,
                         tol: Tolerances = DEFAULT) -> IntersectionPattern:
    """Arcs, lines and singular points of the plane slice of the boundary surface."""
    if curve.lift is None or curve.ambient_dim != 4:
        raise BadParams("intersection patterns need an analytic curve in RP^3")
    ev = curve.eval
    tag = pc.tag
    if tag == "Tangent":
        (x,) = pc.params
        P = ev(x, 3, tol)
        kap = _plane_covector(P)
        lf = _line_meet_lift(curve, kap, strip=(x,))
        plane_curve = lift_curve(P, lf, (x, x + TWO_PI), True, curve, "restricted")
        V = _align(plane_curve.eval(x + TWO_PI * np.arange(resolution) / resolution))
        V = np.vstack([V, V[:2] * np.sign(V[:2] @ V[-1])[:, None]])
        arc = Arc((x, x), V[:resolution], _margin_from_vectors(P.basis, V, True))
        return IntersectionPattern(pc, P, plane_curve, [arc], [ev(x, 2, tol)], [])
    if tag == "OscMix":
        x, y = pc.params
        P = span([ev(x, 2, tol), ev(y, 1, tol)], tol)[0]
        lf = _line_meet_lift(curve, _plane_covector(P), strip=(x,))
        plane_curve = lift_curve(P, lf, (x, x + TWO_PI), False, curve, "eta_xy")
        xs = x + TWO_PI
        ym = x + ccw(x, y)
        arcs = [_arc(plane_curve, x, ym, resolution), _arc(plane_curve, ym, xs, resolution)]
        sing = [(normalize(plane_curve.eval(ym)[0]), cusp_classify(plane_curve, ym, tol), "BoundaryFrenet"),
                (normalize(plane_curve.eval(x)[0]), cusp_classify(plane_curve, x, tol), "BoundaryFrenet")]
        return IntersectionPattern(pc, P, plane_curve, arcs, [ev(x, 2, tol)], sing)
    if tag in ("TriSecant", "SecantMix"):
        x, y, z = pc.params
        if tag == "TriSecant":
            P = span([ev(t, 1, tol) for t in (x, y, z)], tol)[0]
        else:
            line = annihilator(span([annihilator(ev(x, 3, tol)), annihilator(ev(z, 3, tol))], tol)[0])
            P = span([line, ev(y, 1, tol)], tol)[0]
        lf = _line_meet_lift(curve, _plane_covector(P))
        plane_curve = lift_curve(P, lf, (x, x + TWO_PI), True, curve,
                                 "eta_xyz" if tag == "TriSecant" else "nu_xyz")
        # parameters in increasing order starting at x
        ts = sorted([(0.0, x), (ccw(x, y), y), (ccw(x, z), z)])
        cuts = [x + o for o, _ in ts] + [x + TWO_PI]
        arcs = [_arc(plane_curve, cuts[i], cuts[i + 1], resolution) for i in range(3)]
        sing_params = [x + o for o, _ in ts] if tag == "TriSecant" else [x + ccw(x, y)]
        sing = [(normalize(plane_curve.eval(s)[0]), cusp_classify(plane_curve, s, tol), "BoundaryFrenet")
                for s in sing_params]
        simplex = None
        if tag == "TriSecant":
            verts = np.column_stack([curve.point(t) for t in (x, y, z)])
            simplex = _simplex_margin(np.vstack([a.samples for a in arcs]), verts)
        return IntersectionPattern(pc, P, plane_curve, arcs, [], sing, simplex)
    raise BadParams(f"no pattern for class {tag}")


def slice_points(curve: FrenetCurve, P: Subspace, ws, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Direct xi^2(w) meet P for each w, independent of the polynomial lifts."""
    from .projlin import meet
    out = []
    for w in ws:
        s, _ = meet([curve.eval(w, 2, tol), P], tol)
        out.append(s.basis[:, 0] if s.dim == 1 else np.full(4, np.nan))
    return np.array(out)


def pattern_coverage(curve: FrenetCurve, pat: IntersectionPattern, ws, tol: Tolerances = DEFAULT) -> float:
    """Largest angle between a directly computed slice point and the pattern's curve at w."""
    pts = slice_points(curve, pat.plane, ws, tol)
    worst = 0.0
    for w, v in zip(ws, pts):
        if not np.all(np.isfinite(v)) or any(l.residual(v) < 1e-9 for l in pat.lines):
            continue
        u = pat.curve.eval(w)[0]
        worst = max(worst, normalize(u).distance(normalize(v)))
    return worst


def osc_line_hits(curve: FrenetCurve, x: float, y: float, z: float, n: int = 4096,
                  tol: Tolerances = DEFAULT) -> int:
    """Crossings of the line xi^3(z) meet P_xy with eta_xy over the component of
    the circle minus {x, y} not containing z."""
    ev = curve.eval
    P = span([ev(x, 2, tol), ev(y, 1, tol)], tol)[0]
    lf = _line_meet_lift(curve, _plane_covector(P), strip=(x,))
    kz = _plane_covector(ev(z, 3, tol))
    lo, hi = (y, y + ccw(y, x)) if in_open_arc(z, x, y) else (x, x + ccw(x, y))
    s = lo + (hi - lo) * (np.arange(n) + 0.5) / n
    f = _align(lf(s)) @ kz
    return int(np.sum(f[:-1] * f[1:] < 0))


# top and front views

def top_view(curve: FrenetCurve, x: float, y: float, resolution: int = 2048,
             tol: Tolerances = DEFAULT):
    """tau_xy in xi^3(x) with its convex arcs A+ (over (x, y)) and A- (over (y, x))."""
    if same_param(x, y, tol):
        raise BadParams("top view needs x != y")
    tau = Projected(curve, x, y, 1)
    P = curve.eval(x, 3, tol)
    F = tau.frame
    lf = HomogLift(F @ tau.lift.A)
    pc = lift_curve(P, lf, (x, x + TWO_PI), True, curve, "tau_xy")
    ym = x + ccw(x, y)
    a_plus = _arc(pc, x, ym, resolution)
    a_minus = _arc(pc, ym, x + TWO_PI, resolution)
    return pc, a_plus, a_minus


def front_view(curve: FrenetCurve, x: float, y: float, resolution: int = 2048,
               tol: Tolerances = DEFAULT) -> PlanarCurve:
    """sigma_xy(w) = (p_xy + xi^1(w)) meet P_xy over the circle minus x."""
    if same_param(x, y, tol):
        raise BadParams("front view needs x != y")
    ev = curve.eval
    P = span([ev(y, 2, tol), ev(x, 1, tol)], tol)[0]
    p = boundary_point(curve, x, y, tol).v
    lf = _front_lift(curve, _plane_covector(P), p)
    return lift_curve(P, lf, (x, x + TWO_PI), False, curve, "sigma_xy")


def planar_frenet_curve(pc: PlanarCurve) -> PolyCurve:
    """A polynomial slice curve as a Frenet curve in plane coordinates."""
    return PolyCurve(HomogLift(pc.plane.basis.T @ pc.lift.A))


# arc foliations

def arcs_through_point(curve: FrenetCurve, x: float, q, tol: Tolerances = DEFAULT,
                       sign: int = 1) -> list[tuple[float, float, float]]:
    """All (y, w, residual) with q = tau_xy(w) for w on the A+ side (A- for sign = -1)."""
    v = q.v if isinstance(q, ProjPoint) else np.asarray(q, float)
    v = v / np.linalg.norm(v)
    P = curve.eval(x, 3, tol)
    if P.residual(v) > 1e-9:
        raise BadParams("point is not in the osculating plane")
    a, b = secant_params(curve, v, tol)
    out = []
    for y, w in ((a, b), (b, a)):
        inside = in_open_arc(w, x, y) if sign > 0 else in_open_arc(w, y, x)
        if not inside:
            continue
        tau = Projected(curve, x, y, 1)
        u = tau.frame @ tau.lift(w)
        u = u / np.linalg.norm(u)
        out.append((y, w, float(min(np.linalg.norm(u - v), np.linalg.norm(u + v)))))
    return out


def composite_curve(curve: FrenetCurve, x: float, y1: float, y2: float, resolution: int = 512,
                    tol: Tolerances = DEFAULT) -> tuple[np.ndarray, float]:
    """A+_{x y1}, then the boundary of C_x from y1 to y2, then A-_{x y2}: a closed curve."""
    if not is_positive(x, y1, y2, tol):
        raise BadParams("(x, y1, y2) must be positively oriented")
    P = curve.eval(x, 3, tol)
    _, ap, _ = top_view(curve, x, y1, resolution, tol)
    _, _, am = top_view(curve, x, y2, resolution, tol)
    kap = _plane_covector(P)
    bd = _line_meet_lift(curve, kap, strip=(x,))
    y1m = x + ccw(x, y1)
    s = y1m + ccw(y1, y2) * np.linspace(0.0, 1.0, resolution)
    seg = bd(s)
    V = _align(np.vstack([ap.samples[:-1], seg[:-1], am.samples[:-1]]))
    V = np.vstack([V, V[:2] * np.sign(V[:2] @ V[-1])[:, None]])
    return V, _margin_from_vectors(P.basis, V, True)


# local convexity

def ruling_lift(curve: FrenetCurve, x: float) -> HomogLift:
    """y -> xi^2(x) meet xi^3(y) along the ruling xi^2(x), extended by xi^1(x) at y = x."""
    K = curve.covector_lift.A
    lx, lx1 = curve.lift(x), curve.lift(x, 1)
    raw = np.outer(lx, lx1 @ K) - np.outer(lx1, lx @ K)
    return HomogLift(raw / np.abs(raw).max()).strip_root(x)


def _local_grid(curve, x, y, r, n, tol):
    out = []
    offs = r * np.linspace(-1, 1, n)
    for a in x + offs:
        out.append(ruling_lift(curve, a)(y + offs))
    return np.vstack(out)


def supporting_plane(curve: FrenetCurve, x: float, y: float, radius: float = 0.05, n: int = 21,
                     tol: Tolerances = DEFAULT) -> tuple[Subspace, float, float]:
    """Supporting plane at xi^2(x) meet xi^3(y): the osculating plane xi^3(x) of the ruling.

    Returns (plane, one-sidedness residual, uniqueness margin). The residual is the most
    negative signed pairing over a local grid of boundary points; the margin is the
    smallest violation over planes through the point tilted away from the candidate.
    """
    if same_param(x, y, tol):
        raise OnFrenetImage("points of the curve itself are not C1 points")
    p = boundary_point(curve, x, y, tol).v
    plane = curve.eval(x, 3, tol)
    kap = _plane_covector(plane)
    G = _local_grid(curve, x, y, radius, n, tol)
    G = G * np.sign(G @ p)[:, None]
    G = G / np.linalg.norm(G, axis=1, keepdims=True)
    vals = G @ kap
    s = 1.0 if vals.sum() >= 0 else -1.0
    residual = float(np.min(s * vals))
    # tilt the plane about lines through p inside it
    q, _ = np.linalg.qr(np.column_stack([kap, p, np.eye(4)]))
    d1, d2 = q[:, 2], q[:, 3]
    worst = np.inf
    for phi in np.linspace(0.0, math.pi, 8, endpoint=False):
        delta = math.cos(phi) * d1 + math.sin(phi) * d2
        for eps in (1e-2, -1e-2):
            k2 = s * kap + eps * delta
            worst = min(worst, -float(np.min(G @ k2)))
    return plane, residual, worst


def support_disagreement(curve: FrenetCurve, x: float, y: float, radius: float = 1e-6,
                         n: int = 21, directions: int = 64, tol: Tolerances = DEFAULT) -> float:
    """Spread (radians) of the planes through the point that support its tangent cone.

    The tangent cone is sampled by secant directions to a local grid of boundary points.
    Supporting normals form a convex set seeded by the best plane through the tangent line;
    its width is found by bisecting the largest feasible tilt in each direction. At a C1
    point only one plane survives, up to the order of the radius. Along the curve itself
    the surface has a cuspidal edge whose cone degenerates to the edge direction, so every
    plane of the pencil through the tangent line supports it.
    """
    p = boundary_point(curve, x, y, tol).v if not same_param(x, y, tol) else curve.point(x)
    p = p / np.linalg.norm(p)
    q, _ = np.linalg.qr(np.column_stack([p, np.eye(4)]))
    T = q[:, 1:4]
    G = _local_grid(curve, x, y, radius, n, tol)
    G = G * np.sign(G @ p)[:, None]
    D = (G / (G @ p)[:, None]) @ T
    nd = np.linalg.norm(D, axis=1)
    keep = nd > 1e-6 * float(nd.max())  # drop the base point itself
    D = D[keep] / nd[keep, None]
    # start from the best plane of the pencil through the tangent line xi^2(x)
    K = T.T @ annihilator(curve.eval(x, 2, tol)).basis
    psi = np.concatenate([[0.0], np.linspace(0.0, math.pi, 3600, endpoint=False)])
    k3 = K.T @ (T.T @ _plane_covector(curve.eval(x, 3, tol)))
    a0 = math.atan2(k3[1], k3[0])
    cands = (K @ np.array([np.cos(a0 + psi), np.sin(a0 + psi)])).T
    cands = np.vstack([cands, -cands])
    cands /= np.linalg.norm(cands, axis=1, keepdims=True)
    worst = np.min(D @ cands.T, axis=0)
    n0 = cands[int(np.argmax(worst))]
    # secant directions bend away from the tangent cone at the order of the radius
    floor = -10.0 * radius

    def feasible(v):
        return float(np.min(D @ (v / np.linalg.norm(v)))) >= floor

    if not feasible(n0):
        return 0.0
    # first tilt direction inside the pencil, where a cuspidal edge has its spread
    e1 = K @ (K.T @ np.cross(n0, np.cross(K[:, 0], K[:, 1])))
    e1 = e1 - (e1 @ n0) * n0
    e1 = e1 / np.linalg.norm(e1)
    e2 = np.cross(n0, e1)
    reach = []
    for phi in np.linspace(0.0, TWO_PI, directions, endpoint=False):
        e = math.cos(phi) * e1 + math.sin(phi) * e2
        lo, hi = 0.0, 0.5 * math.pi
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if feasible(math.cos(mid) * n0 + math.sin(mid) * e):
                lo = mid
            else:
                hi = mid
        reach.append(lo)
    reach = np.array(reach)
    half = directions // 2
    return float(np.max(reach[:half] + reach[half:]))


def cusp_sides(curve: FrenetCurve, pat: IntersectionPattern, s0: float, h: float = 1e-2,
               push: float = 0.5, tol: Tolerances = DEFAULT) -> list[str]:
    """Tags of probe points pushed off both branches of a cusp to their non-convex sides.

    The non-convex side of a branch at a point is the side of its tangent line away from
    the chords of the branch, i.e. away from the midpoint of a short symmetric chord.
    """
    pc = pat.curve
    p0 = pc.eval(s0)[0] @ pat.plane.basis
    p0 = p0 / np.linalg.norm(p0)
    q, _ = np.linalg.qr(np.column_stack([p0, np.eye(3)]))
    ch = PlaneChart(pat.plane.basis, p0, q[:, 1:3])
    tags = []
    for sg in (1.0, -1.0):
        s = s0 + sg * h
        b = ch.coords(pc.eval(s))[0]
        m = 0.5 * (ch.coords(pc.eval(s - 0.5 * h))[0] + ch.coords(pc.eval(s + 0.5 * h))[0])
        z = b + push * (b - m)
        v = pat.plane.basis @ (ch.k + ch.F @ z)
        tags.append(classify_point(curve, v, tol).tag)
    return tags


def front_side_margins(curve: FrenetCurve, x: float, y: float, rng: np.random.Generator,
                       trials: int = 20, tol: Tolerances = DEFAULT) -> tuple[float, float]:
    """Smallest 2-dim Frenet directness margins of sigma_xy on (x, y] and on [y, x).

    Each trial checks a random triple of points and a random point-plus-tangent pair.
    """
    from .frenet import check_general_position

    sigma = front_view(curve, x, y, tol=tol)
    planar = planar_frenet_curve(sigma)
    out = []
    for lo, length in ((x, ccw(x, y)), (y, ccw(y, x))):
        anchor = lo + length if lo == x else lo  # the closed end sits at y
        worst = np.inf
        for _ in range(trials):
            ts = np.sort(lo + length * rng.uniform(0.02, 0.98, 3))
            ts[0 if anchor == lo else 2] = anchor
            worst = min(worst, check_general_position(planar, [(float(t), 1) for t in ts], tol=tol))
            a, b = (float(t) for t in rng.choice(ts, 2, replace=False))
            worst = min(worst, check_general_position(planar, [(a, 1), (b, 2)], tol=tol))
        out.append(float(worst))
    return out[0], out[1]


def _roots_on_arc(f, lo: float, hi: float, n: int = 4096) -> list[float]:
    """Sign-change roots of f (vectorized in s) on the open arc (lo, hi), by bisection."""
    s = lo + (hi - lo) * (np.arange(n + 1) + 0.5) / (n + 1)
    v = f(s)
    out = []
    for i in np.flatnonzero(v[:-1] * v[1:] < 0):
        a, b, fa = s[i], s[i + 1], v[i]
        for _ in range(60):
            m = 0.5 * (a + b)
            fm = f(np.array([m]))[0]
            if fm * fa > 0:
                a, fa = m, fm
            else:
                b = m
        out.append(0.5 * (a + b))
    return out


def top_view_segment(curve: FrenetCurve, x: float, y: float, w: float,
                     tol: Tolerances = DEFAULT) -> tuple[float, float, float]:
    """Locate tau_xy(w) on the chord of C_x from xi^2(w') meet xi^3(x) to xi^2(y) meet xi^3(x).

    w' is the unique parameter on the side of {y, w} away from x where the slice of
    xi^2(y) + xi^1(w) meets xi^3(x). Returns (w', collinearity residual, betweenness),
    betweenness being the smaller barycentric weight (non-negative inside the chord).
    """
    ev = curve.eval
    P = span([ev(y, 2, tol), ev(w, 1, tol)], tol)[0]
    eta = _line_meet_lift(curve, _plane_covector(P), strip=(y,))
    kx = _plane_covector(ev(x, 3, tol))
    lo, hi = (w, w + ccw(w, y)) if in_open_arc(x, y, w) else (y, y + ccw(y, w))
    roots = _roots_on_arc(lambda s: _align(eta(s)) @ kx, lo, hi)
    if len(roots) != 1:
        raise ResolutionTooCoarse(f"expected one crossing, found {len(roots)}")
    wp = canon(roots[0])
    bd = _line_meet_lift(curve, kx, strip=(x,))
    S = _align(bd(x + TWO_PI * (np.arange(256) + 0.5) / 256))
    k = S.mean(axis=0)
    A = boundary_point(curve, wp, x, tol).v
    B = boundary_point(curve, y, x, tol).v
    A, B = A * np.sign(k @ A), B * np.sign(k @ B)
    t = Projected(curve, x, y, 1)
    u = t.frame @ t.lift(w)
    coef, *_ = np.linalg.lstsq(np.column_stack([A, B]), u, rcond=None)
    resid = float(np.linalg.norm(u - np.column_stack([A, B]) @ coef) / np.linalg.norm(u))
    coef = coef * np.sign(coef.sum())
    return wp, resid, float(coef.min() / np.abs(coef).sum())
