"""Developing maps, point and plane classification, and the leaf families.

Points of RP^3 are classified by how many osculating planes xi^3(x) contain them: the
incidence function h_p(theta) = <covector lift(theta), p> is a cubic form on the circle,
and its root pattern separates the two components of the domain from the boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._config import DEFAULT, Tolerances
from .frenet import (
    TWO_PI,
    FrenetCurve,
    Restricted,
    Veronese,
    canon,
    ccw,
    circ_dist,
    is_positive,
    same_param,
    theta_of,
)
from .projlin import (
    ProjLinError,
    ProjPoint,
    Subspace,
    annihilator,
    grassmann_distance,
    meet,
    span,
)


class DegenerateTriple(ProjLinError):
    pass


class NotInterior1(ProjLinError):
    pass


class WrongComponent(ProjLinError):
    pass


class BadParams(ProjLinError):
    pass


class IndeterminatePlane(ProjLinError):
    pass


POINT_TAGS = ("Interior1", "Interior2", "BoundarySmooth", "BoundaryFrenet", "Indeterminate")
PLANE_TAGS = ("Tangent", "OscMix", "SecantMix", "TriSecant", "Indeterminate")


@dataclass
class PointClass:
    tag: str
    params: tuple = ()
    margin: float = 0.0
    incidences: list = field(default_factory=list)

    @property
    def component(self) -> int | None:
        return {"Interior1": 1, "Interior2": 2}.get(self.tag)

    def as_dict(self) -> dict:
        return {"tag": self.tag, "params": [float(t) for t in self.params],
                "margin": float(self.margin),
                "incidences": [[float(t), int(m)] for t, m in self.incidences]}


@dataclass
class PlaneClass:
    tag: str
    params: tuple = ()
    margin: float = 0.0
    reconstruction: float = float("nan")

    def as_dict(self) -> dict:
        return {"tag": self.tag, "params": [float(t) for t in self.params],
                "margin": float(self.margin), "reconstruction": float(self.reconstruction)}


# incidence functions

def incidence_form(curve: FrenetCurve, p) -> np.ndarray:
    """Coefficients w with h_p(theta) = w . (c^3, c^2 s, c s^2, s^3)."""
    lf = curve.covector_lift
    if lf is None or lf.degree != 3 or curve.ambient_dim != 4:
        raise BadParams("incidence needs an analytic curve in RP^3")
    v = p.v if isinstance(p, ProjPoint) else np.asarray(p, float)
    return lf.A.T @ v


def _flat_root(w, t, hmax, band_rel) -> bool:
    """True when a lone sign change is really a triple root (a flat inflection)."""
    d1 = kernels.deriv_coeffs(w)
    d2 = kernels.deriv_coeffs(d1)
    g1 = abs(float(kernels.eval_cubic(d1, t))) / hmax
    g2 = abs(float(kernels.eval_cubic(d2, t))) / hmax
    return g1 <= 10.0 * band_rel ** (2.0 / 3.0) and g2 <= 10.0 * band_rel ** (1.0 / 3.0)


def _cluster(roots, crits, cvals, hmax, band_rel, w=None):
    """Group zero events into clusters and assign multiplicities.

    Events are sign-change roots (R) and critical points whose value lies inside the
    band (T). Critical points outside the band (N) separate clusters. A cluster with a
    T event is a near-multiple root whose multiplicity has the parity of its R count.
    """
    band = band_rel * hmax
    ev = [(float(r), "R") for r in roots if np.isfinite(r)]
    slack = []
    for c, v in zip(crits, cvals):
        if not np.isfinite(c):
            continue
        if abs(v) <= band:
            ev.append((float(c), "T"))
        else:
            ev.append((float(c), "N"))
            slack.append(abs(v) / hmax - band_rel if hmax > 0 else 0.0)
    if not ev:
        return [], 0.0, True
    ev.sort()
    ns = [i for i, (_, k) in enumerate(ev) if k == "N"]
    if ns:
        start = ns[0] + 1
        ev = ev[start:] + ev[:start]
    groups, cur = [], []
    for t, k in ev:
        if k == "N":
            if cur:
                groups.append(cur)
            cur = []
        else:
            cur.append((t, k))
    if cur:
        groups.append(cur)

    out, ambiguous, tang = [], False, []
    for g in groups:
        nr = sum(1 for _, k in g if k == "R")
        nt = len(g) - nr
        if nt:
            mult = 2 if nr % 2 == 0 else 3
            if nr > 3 or (nr == 0 and nt > 1):
                ambiguous = True
            ts = [t for t, k in g if k == "T"]
        else:
            mult = nr
            if nr != 1:
                ambiguous = True
            elif (w is not None and hmax > 0 and len(groups) == 1
                  and _flat_root(w, g[0][0], hmax, band_rel)):
                mult = 3
            ts = [t for t, _ in g]
        if nt:
            tang.append(max(abs(v) for c, v in zip(crits, cvals)
                            if np.isfinite(c) and any(abs(c - t) < 1e-15 for t in ts)))
        base = ts[0]
        loc = canon(base + np.mean([math.remainder(t - base, TWO_PI) for t in ts]))
        out.append((loc, mult))
    margin = min(slack) if slack else 0.0
    if tang:
        margin = min(margin, band_rel - max(tang) / hmax)
    if sum(m for _, m in out) not in (1, 3):
        ambiguous = True
    return sorted(out), margin, ambiguous


def _classify_events(roots, crits, cvals, hmax, band_rel, w=None) -> PointClass:
    clusters, margin, ambiguous = _cluster(roots, crits, cvals, hmax, band_rel, w)
    if ambiguous:
        return PointClass("Indeterminate", (), margin, clusters)
    mults = sorted(m for _, m in clusters)
    if mults == [1]:
        return PointClass("Interior1", (clusters[0][0],), margin, clusters)
    if mults == [1, 1, 1]:
        return PointClass("Interior2", tuple(t for t, _ in clusters), margin, clusters)
    if mults == [1, 2]:
        x = next(t for t, m in clusters if m == 2)
        y = next(t for t, m in clusters if m == 1)
        return PointClass("BoundarySmooth", (x, y), margin, clusters)
    if mults == [3]:
        return PointClass("BoundaryFrenet", (clusters[0][0],), margin, clusters)
    return PointClass("Indeterminate", (), margin, clusters)


def incidence_params(curve: FrenetCurve, p, tol: Tolerances = DEFAULT,
                     resolution: int = 2048) -> list[tuple[float, int]]:
    w = incidence_form(curve, p)
    r, c, v, h = kernels.scan_cubic(w[None, :], resolution)
    clusters, _, _ = _cluster(r[0], c[0], v[0], h[0], tol.bnd, w)
    return clusters


def classify_point(curve: FrenetCurve, p, tol: Tolerances = DEFAULT,
                   resolution: int = 2048) -> PointClass:
    return classify_points(curve, np.atleast_2d(p.v if isinstance(p, ProjPoint) else p),
                           tol, resolution)[0]


def classify_points(curve: FrenetCurve, P, tol: Tolerances = DEFAULT,
                    resolution: int = 2048) -> list[PointClass]:
    """Batch classification; rows of P are points (any scale)."""
    P = np.atleast_2d(np.asarray(P, float))
    norms = np.linalg.norm(P, axis=1, keepdims=True)
    if np.any(norms <= 1e-300):
        raise ProjLinError("zero vector cannot be classified")
    lf = curve.covector_lift
    if lf is None or lf.degree != 3:
        raise BadParams("classification needs an analytic curve in RP^3")
    W = (P / norms) @ lf.A
    r, c, v, h = kernels.scan_cubic(W, resolution)
    return [_classify_events(r[i], c[i], v[i], h[i], tol.bnd, W[i]) for i in range(len(P))]


# independent oracle for the Veronese curve

def surface_F(x, y, z):
    """Discriminant in the chart (1, x, y, z) of the leading coefficient."""
    return 18 * x * y * z - 4 * x**3 * z + x**2 * y**2 - 4 * y**3 - 27 * z**2


def cubic_roots_theta(p) -> list[complex]:
    """Projective roots of aX^3 + bX^2Y + cXY^2 + dY^3 as complex X/Y via a companion matrix.

    Returns values of t; a root at infinity is reported as ``complex('inf')``.
    """
    a, b, c, d = (float(u) for u in p)
    flip = abs(a) < abs(d)
    coeffs = [d, c, b, a] if flip else [a, b, c, d]
    # numpy.roots is an eigenvalue solve of the companion matrix
    rs = list(np.roots(coeffs).astype(complex))
    rs += [complex("inf")] * (3 - len(rs))
    if flip:
        rs = [complex("inf") if r == 0 else (0j if not np.isfinite(r) else 1.0 / r) for r in rs]
    return rs


def _t_to_theta(t: complex) -> float:
    if not np.isfinite(t):
        return math.pi
    return canon(2.0 * math.atan(t.real))


def fuchsian_oracle(p, tol: Tolerances = DEFAULT, cluster: float = 1e-3) -> PointClass:
    """Discriminant sign plus companion-matrix roots, for the Veronese curve only."""
    v = p.v if isinstance(p, ProjPoint) else np.asarray(p, float)
    v = v / np.linalg.norm(v)
    disc = float(kernels.discriminant(v[None, :], backend="numpy")[0])
    roots = cubic_roots_theta(v)
    band = tol.bnd
    if disc < -band:
        real = min(roots, key=lambda t: abs(t.imag) if np.isfinite(t) else 0.0)
        return PointClass("Interior1", (_t_to_theta(real),), -disc - band)
    if disc > band:
        ths = sorted(_t_to_theta(t) for t in roots)
        return PointClass("Interior2", tuple(ths), disc - band)
    ths = [_t_to_theta(t) for t in roots]
    d01, d02, d12 = circ_dist(ths[0], ths[1]), circ_dist(ths[0], ths[2]), circ_dist(ths[1], ths[2])
    if max(d01, d02, d12) < cluster:
        return PointClass("BoundaryFrenet", (ths[0],), band - abs(disc))
    pair = min([(d01, 0, 1, 2), (d02, 0, 2, 1), (d12, 1, 2, 0)])
    _, i, j, k = pair
    x = canon(ths[i] + 0.5 * math.remainder(ths[j] - ths[i], TWO_PI))
    return PointClass("BoundarySmooth", (x, ths[k]), band - abs(disc))


def catalecticant_secant(q, dual: bool = False) -> tuple[float, float]:
    """Secant parameters of a point of the Veronese (or of its dual) from the Hankel kernel."""
    v = np.asarray(q.v if isinstance(q, ProjPoint) else q, float)
    u = v.copy() if dual else np.array([v[0], v[1] / 3.0, v[2] / 3.0, v[3]])
    H = np.array([[u[0], u[1], u[2]], [u[1], u[2], u[3]]])
    k = np.cross(H[0], H[1])
    # roots (alpha : beta) of k0 alpha^2 + k1 alpha beta + k2 beta^2
    if abs(k[0]) >= abs(k[2]):
        rs = np.roots([k[0], k[1], k[2]])
        pairs = [(r, 1.0) for r in rs] + [(1.0, 0.0)] * (2 - len(rs))
    else:
        rs = np.roots([k[2], k[1], k[0]])
        pairs = [(1.0, r) for r in rs] + [(0.0, 1.0)] * (2 - len(rs))
    out = []
    for a, b in pairs:
        a, b = float(np.real(a)), float(np.real(b))
        out.append(theta_of(b, a) if dual else theta_of(a, -b))
    return tuple(sorted(out))


# developing maps

def xi_x1(curve: FrenetCurve, x: float, y: float, tol: Tolerances = DEFAULT) -> tuple[Subspace, float]:
    """xi^2(y) meet xi^3(x), or xi^1(x) on the diagonal."""
    if same_param(x, y, tol):
        return curve.eval(x, 1, tol), 1.0
    return meet([curve.eval(y, 2, tol), curve.eval(x, 3, tol)], tol)


def boundary_point(curve: FrenetCurve, x: float, y: float, tol: Tolerances = DEFAULT) -> ProjPoint:
    """The boundary parametrization (x, y) -> xi^2(x) meet xi^3(y)."""
    s, _ = xi_x1(curve, y, x, tol)
    return s.point()


def _check_triple(t, tol):
    x, y, z = (canon(u) for u in t)
    if not is_positive(x, y, z, tol):
        raise DegenerateTriple("triple is not positively oriented and separated")
    return x, y, z


def _dev(kind: str, t, curve: FrenetCurve, tol: Tolerances) -> tuple[Subspace, float]:
    x, y, z = t
    ev = curve.eval
    if kind == "pcf":
        a, m1 = xi_x1(curve, x, z, tol)
        b, m2 = xi_x1(curve, z, x, tol)
        c, m3 = xi_x1(curve, x, y, tol)
        l1, m4 = span([ev(x, 1, tol), a], tol)
        l2, m5 = span([b, c], tol)
        out, m6 = meet([l1, l2], tol, expect=1)
        margins = (m1, m2, m3, m4, m5, m6)
    elif kind == "ctaf":
        out, m1 = meet([ev(x, 3, tol), ev(y, 3, tol), ev(z, 3, tol)], tol)
        margins = (m1,)
    elif kind == "pctf":
        l1, m1 = span([ev(x, 1, tol), ev(z, 1, tol)], tol)
        out, m2 = meet([l1, ev(y, 3, tol)], tol)
        margins = (m1, m2)
    elif kind == "ctrf":
        a, m1 = xi_x1(curve, x, z, tol)
        l1, m2 = span([ev(x, 1, tol), a], tol)
        out, m3 = meet([l1, ev(y, 3, tol)], tol)
        margins = (m1, m2, m3)
    else:
        raise BadParams(f"unknown developing map {kind!r}")
    return out, min(margins)


def dev(kind: str, triple, curve: FrenetCurve | None = None, tol: Tolerances = DEFAULT) -> ProjPoint:
    curve = curve or Veronese()
    t = _check_triple(triple, tol)
    out, margin = _dev(kind, t, curve, tol)
    if margin <= tol.rank or out.dim != 1:
        raise DegenerateTriple(f"dev_{kind} degenerate at {t} (margin {margin:.3g})")
    return out.point()


def ctaf_preimages(curve: FrenetCurve, triple, tol: Tolerances = DEFAULT) -> list[tuple]:
    x, y, z = _check_triple(triple, tol)
    return [(x, y, z), (y, z, x), (z, x, y)]


# secant parameters

def _cross3(a, b, c) -> np.ndarray:
    """Covector killing three vectors of R^4 (rows of the batch)."""
    M = np.stack([a, b, c], axis=-2)
    out = np.empty(M.shape[:-2] + (4,))
    for i in range(4):
        cols = [j for j in range(4) if j != i]
        out[..., i] = (-1) ** i * np.linalg.det(M[..., cols])
    return out


def _solve(A, b):
    try:
        return np.linalg.solve(A, b[..., None])[..., 0]
    except np.linalg.LinAlgError:
        # pinv keeps the scan alive where z*(x) collides with x
        return (np.linalg.pinv(A) @ b[..., None])[..., 0]


def _secant_sigma(lift, q, xs):
    """Signed L'(x) coefficient of q over [L(x), L'(x), L(z*(x))] plus the secant residual."""
    xs = np.atleast_1d(xs)
    L0 = lift(xs)
    L1 = lift(xs, 1)
    qq = np.broadcast_to(q, L0.shape)
    kap = _cross3(L0, L1, qq)
    w = kap @ lift.A  # cubic forms in z with a double root at x
    c, s = np.cos(0.5 * xs), np.sin(0.5 * xs)
    sq = np.stack([s * s, -2 * s * c, c * c], axis=-1)  # (s_x c - c_x s)^2
    # w = sq * (alpha c + beta s): least squares in (alpha, beta)
    T = np.zeros(xs.shape + (4, 2))
    T[..., 0:3, 0] = sq
    T[..., 1:4, 1] = sq
    TtT = np.einsum("nij,nik->njk", T, T)
    Ttw = np.einsum("nij,ni->nj", T, w)
    ab = _solve(TtT, Ttw)
    zs = np.mod(2.0 * np.arctan2(-ab[:, 0], ab[:, 1]), TWO_PI)
    Lz = lift(zs)
    M = np.stack([L0, L1, Lz], axis=-1)
    M = M / np.linalg.norm(M, axis=-2, keepdims=True)
    MtM = np.einsum("nij,nik->njk", M, M)
    Mtq = np.einsum("nij,i->nj", M, q)
    coef = _solve(MtM, Mtq)
    P2 = np.stack([M[..., 0], M[..., 2]], axis=-1)
    G = np.einsum("nij,nik->njk", P2, P2)
    co2 = _solve(G, np.einsum("nij,i->nj", P2, q))[..., None]
    res = np.linalg.norm(q - (P2 @ co2)[..., 0], axis=-1)
    return coef[:, 1], zs, res


def secant_params(curve: FrenetCurve, q, tol: Tolerances = DEFAULT, grid: int = 720,
                  check: bool = True) -> tuple[float, float]:
    """The unordered pair {x, z} with q on the secant xi^1(x) + xi^1(z)."""
    v = q.v if isinstance(q, ProjPoint) else np.asarray(q, float)
    v = v / np.linalg.norm(v)
    if check:
        pc = classify_point(curve, v, tol)
        if pc.tag != "Interior1":
            raise NotInterior1(f"point classifies as {pc.tag}")
    lift = curve.lift
    if lift is None or curve.ambient_dim != 4:
        raise BadParams("secant parameters need an analytic curve in RP^3")
    xs = np.linspace(0.0, TWO_PI, grid, endpoint=False) + 0.5 * TWO_PI / grid
    sig, _, _ = _secant_sigma(lift, v, xs)
    nxt = np.roll(sig, -1)
    idx = np.flatnonzero(np.isfinite(sig) & np.isfinite(nxt) & (sig * nxt <= 0))
    if idx.size == 0:
        raise NotInterior1("no secant through the point was found")
    # all brackets refined together by Illinois-style regula falsi
    lo, hi = xs[idx], xs[idx] + TWO_PI / grid
    flo, fhi = sig[idx], nxt[idx]
    side = np.zeros(idx.size)
    prev = np.full(idx.size, np.inf)
    for _ in range(40):
        den = np.where(fhi - flo == 0, 1.0, fhi - flo)
        mid = np.clip(lo - flo * (hi - lo) / den, lo, hi)
        fm = _secant_sigma(lift, v, mid)[0]
        left = (fm < 0) == (flo < 0)
        lo, flo = np.where(left, mid, lo), np.where(left, fm, flo)
        hi, fhi = np.where(left, hi, mid), np.where(left, fhi, fm)
        # halve the stale endpoint's value when the same side moves twice
        fhi = np.where(left & (side > 0), 0.5 * fhi, fhi)
        flo = np.where(~left & (side < 0), 0.5 * flo, flo)
        side = np.where(left, 1.0, -1.0)
        if np.all((np.abs(mid - prev) < 1e-15) | (fm == 0)):
            break
        prev = mid
    # the last false-position iterate; a stale bracket end can sit far from the root
    roots = np.array([canon(t) for t in mid])
    _, zs, res = _secant_sigma(lift, v, roots)
    k = int(np.argmin(res))
    best = (float(res[k]), float(roots[k]), float(zs[k]))
    if best is None or best[0] > 1e-6:
        raise NotInterior1("no secant through the point was found")
    return tuple(sorted((best[1], best[2])))


# plane classification

def plane_from_class(curve: FrenetCurve, pc: PlaneClass, tol: Tolerances = DEFAULT) -> Subspace:
    ev = curve.eval
    if pc.tag == "Tangent":
        return ev(pc.params[0], 3, tol)
    if pc.tag == "OscMix":
        x, y = pc.params
        return span([ev(x, 2, tol), ev(y, 1, tol)], tol)[0]
    if pc.tag == "SecantMix":
        x, y, z = pc.params
        line, _ = meet([ev(x, 3, tol), ev(z, 3, tol)], tol)
        return span([line, ev(y, 1, tol)], tol)[0]
    if pc.tag == "TriSecant":
        return span([ev(t, 1, tol) for t in pc.params], tol)[0]
    raise IndeterminatePlane("no plane for an indeterminate class")


def _orient(x, y, z):
    """Rotate/reflect so that (x, y, z) is positive with y in the middle slot kept."""
    return (x, y, z) if ccw(x, y) < ccw(x, z) else (z, y, x)


def classify_plane(curve: FrenetCurve, P, tol: Tolerances = DEFAULT) -> PlaneClass:
    if isinstance(P, Subspace):
        if P.dim != 3:
            raise BadParams("a plane is a 3-dimensional subspace")
        cov = annihilator(P).basis[:, 0]
    else:
        cov = np.asarray(P, float)
        cov = cov / np.linalg.norm(cov)
    D = curve.dual()
    dc = classify_point(D, cov, tol)
    if dc.tag == "BoundaryFrenet":
        pc = PlaneClass("Tangent", dc.params, dc.margin)
    elif dc.tag == "BoundarySmooth":
        pc = PlaneClass("OscMix", dc.params, dc.margin)
    elif dc.tag == "Interior2":
        pc = PlaneClass("TriSecant", tuple(sorted(dc.params)), dc.margin)
    elif dc.tag == "Interior1":
        y = dc.params[0]
        x, z = secant_params(D, cov, tol, check=False)
        pc = PlaneClass("SecantMix", _orient(x, y, z), dc.margin)
    else:
        raise IndeterminatePlane(f"dual point is indeterminate (margin {dc.margin:.3g})")
    plane = plane_from_class(curve, pc, tol)
    target = annihilator(Subspace(cov))
    pc.reconstruction = grassmann_distance(plane, target) if plane.dim == 3 else float("inf")
    return pc


# leaves

FAMILIES = ("G_pcf", "G_tcf", "G_ctaf", "G_ctrf", "F_pcf", "F_ccf")
COMPONENT = {"G_pcf": 1, "G_tcf": 1, "F_pcf": 1, "G_ctaf": 2, "G_ctrf": 2, "F_ccf": 2}


@dataclass
class Leaf:
    family: str
    params: tuple
    carrier: Subspace
    samples: np.ndarray
    endpoints: list = field(default_factory=list)
    sample_params: np.ndarray | None = None

    def as_dict(self) -> dict:
        return {"family": self.family, "params": [float(t) for t in self.params],
                "carrier": {"dim": self.carrier.dim, "basis": self.carrier.basis.T.tolist()},
                "samples": self.samples.tolist(),
                "endpoints": [{"p": np.asarray(p).tolist(), "class": c.as_dict()}
                              for p, c in self.endpoints]}


def _arc_params(a: float, b: float, n: int, edge: float = 1e-6) -> np.ndarray:
    """n parameters strictly inside the ccw arc (a, b), clustered towards both ends.

    ``a == b`` means the whole circle punctured at ``a``.
    """
    u = 0.5 - 0.5 * np.cos(np.linspace(0.0, math.pi, n))
    u = edge + (1 - 2 * edge) * u
    length = ccw(a, b) or TWO_PI
    return np.array([canon(a + length * t) for t in u])


def _align(samples: np.ndarray) -> np.ndarray:
    """Flip signs so consecutive representatives point the same way."""
    out = samples.copy()
    for i in range(1, len(out)):
        if out[i] @ out[i - 1] < 0:
            out[i] = -out[i]
    return out


def _leaf_point_fn(curve, family, params, tol):
    a, b = params
    if family == "G_pcf":
        return lambda y: _dev("pcf", (a, y, b), curve, tol)[0].point().v, (a, b)
    if family == "G_tcf":
        return lambda c: _dev("pctf", (a, c, b), curve, tol)[0].point().v, (a, b)
    if family == "G_ctrf":
        return lambda y: _dev("ctrf", (a, y, b), curve, tol)[0].point().v, (a, b)
    if family == "G_ctaf":
        return lambda c: _dev("ctaf", (a, b, c), curve, tol)[0].point().v, (b, a)
    raise BadParams(family)


def predicted_endpoints(curve: FrenetCurve, family: str, params, tol: Tolerances = DEFAULT):
    a, b = params
    ev = curve.eval
    if family == "G_pcf":
        return [ev(a, 1, tol).point(), boundary_point(curve, b, a, tol)]
    if family == "G_tcf":
        return [ev(a, 1, tol).point(), ev(b, 1, tol).point()]
    if family == "G_ctaf":
        return [boundary_point(curve, a, b, tol), boundary_point(curve, b, a, tol)]
    if family == "G_ctrf":
        return [ev(a, 1, tol).point(), boundary_point(curve, b, a, tol)]
    return []


def leaf(curve: FrenetCurve, family: str, params, resolution: int = 256,
         tol: Tolerances = DEFAULT, edge: float = 0.02) -> Leaf:
    """Sampled leaf of a family.

    Samples stay a fraction ``edge`` of the parameter arc away from both ends; closer in,
    points approach the boundary faster than the classification band shrinks. The ends
    themselves are handled by ``predicted_endpoints`` and ``extrapolate_endpoints``.
    """
    if family not in FAMILIES:
        raise BadParams(f"unknown family {family!r}")
    curve = curve or Veronese()
    params = tuple(canon(p) for p in params)
    if family in ("F_pcf", "F_ccf"):
        if len(params) != 1:
            raise BadParams("F-leaves take one parameter")
        (x,) = params
        kind = "pcf" if family == "F_pcf" else "ctaf"
        k = max(4, int(math.sqrt(resolution)))
        pts = []
        for y in _arc_params(x, x, k, edge=0.02):
            for z in _arc_params(y, x, k, edge=0.02):
                pts.append(_dev(kind, (x, y, z), curve, tol)[0].point().v)
        return Leaf(family, params, curve.eval(x, 3, tol), np.array(pts))
    if len(params) != 2 or same_param(*params, tol):
        raise BadParams("line leaves take two distinct parameters")
    fn, (lo, hi) = _leaf_point_fn(curve, family, params, tol)
    ts = _arc_params(lo, hi, resolution, edge=edge)
    pts = _align(np.array([fn(t) for t in ts]))
    carrier, _ = span([pts[0], pts[-1]], tol)
    ends = [(p.v, classify_point(curve, p, tol)) for p in predicted_endpoints(curve, family, params, tol)]
    return Leaf(family, params, carrier, pts, ends, ts)


def extrapolate_endpoints(curve: FrenetCurve, lf: Leaf, h: float = 1e-3,
                          tol: Tolerances = DEFAULT) -> list[np.ndarray]:
    """Richardson-extrapolated limits of the leaf at both ends of its parameter arc."""
    fn, (lo, hi) = _leaf_point_fn(curve, lf.family, lf.params, tol)
    out = []
    for base, sgn in ((lo, 1.0), (hi, -1.0)):
        vals = [fn(canon(base + sgn * e)) for e in (h, h / 2, h / 4)]
        for i in range(1, 3):
            if vals[i] @ vals[0] < 0:
                vals[i] = -vals[i]
        p1, p2, p4 = vals
        # second-order Richardson on representatives along a smooth branch
        r1 = 2 * p2 - p1
        r2 = 2 * p4 - p2
        lim = (4 * r2 - r1) / 3
        out.append(lim / np.linalg.norm(lim))
    return out


def _point_dist(u, v) -> float:
    u = np.asarray(u, float) / np.linalg.norm(u)
    v = np.asarray(v, float) / np.linalg.norm(v)
    return float(min(np.linalg.norm(u - v), np.linalg.norm(u + v)))


def endpoint_errors(curve: FrenetCurve, lf: Leaf, tol: Tolerances = DEFAULT) -> float:
    """Max distance between extrapolated and predicted endpoints, matched as a set."""
    ext = extrapolate_endpoints(curve, lf, tol=tol)
    pred = [p for p, _ in lf.endpoints]
    e1 = max(_point_dist(ext[0], pred[0]), _point_dist(ext[1], pred[1]))
    e2 = max(_point_dist(ext[0], pred[1]), _point_dist(ext[1], pred[0]))
    return min(e1, e2)


def _boundary_hit(curve: FrenetCurve, x: float, p: np.ndarray, grid: int = 720) -> float:
    """b != x with xi_x^1(b) on the line xi^1(x) + p, by scan and bisection."""
    R = Restricted(curve, x, 3)
    lift = R.lift
    F = R.frame
    a = F.T @ curve.point(x)
    q = F.T @ p

    def f(b):
        return np.linalg.det(np.column_stack([a, q, lift(b)]))

    bs = canon(x) + np.linspace(0.0, TWO_PI, grid + 1)[1:-1]
    vals = np.array([f(b) for b in bs])
    best = None
    for i in range(len(bs) - 1):
        if vals[i] * vals[i + 1] > 0:
            continue
        lo, hi, flo = bs[i], bs[i + 1], vals[i]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            if (fm < 0) == (flo < 0):
                lo, flo = mid, fm
            else:
                hi = mid
        b = canon(0.5 * (lo + hi))
        if circ_dist(b, x) > 1e-6 and (best is None or abs(f(b)) < best[0]):
            best = (abs(f(b)), b)
    if best is None:
        raise WrongComponent("line from the curve point does not meet the boundary again")
    return best[1]


def leaves_through_point(curve: FrenetCurve, family: str, p, resolution: int = 64,
                         tol: Tolerances = DEFAULT) -> list[Leaf]:
    curve = curve or Veronese()
    v = p.v if isinstance(p, ProjPoint) else np.asarray(p, float)
    v = v / np.linalg.norm(v)
    pc = classify_point(curve, v, tol)
    want = COMPONENT.get(family)
    if want is None:
        raise BadParams(f"unknown family {family!r}")
    if pc.component != want:
        raise WrongComponent(f"{family} needs an Interior{want} point, got {pc.tag}")
    out = []
    if family == "F_pcf":
        out = [leaf(curve, family, (pc.params[0],), resolution, tol)]
    elif family == "F_ccf":
        out = [leaf(curve, family, (t,), resolution, tol) for t in pc.params]
    elif family == "G_tcf":
        x, z = secant_params(curve, v, tol, check=False)
        y = pc.params[0]
        if not is_positive(x, y, z, tol):
            x, z = z, x
        out = [leaf(curve, family, (x, z), resolution, tol)]
    elif family == "G_pcf":
        x = pc.params[0]
        out = [leaf(curve, family, (x, _boundary_hit(curve, x, v)), resolution, tol)]
    elif family == "G_ctaf":
        r = pc.params
        for i, j, k in ((0, 1, 2), (1, 2, 0), (0, 2, 1)):
            a0, b0 = r[i], r[j]
            if not is_positive(a0, b0, r[k], tol):
                a0, b0 = b0, a0
            out.append(leaf(curve, family, (a0, b0), resolution, tol))
    elif family == "G_ctrf":
        for x in pc.params:
            out.append(leaf(curve, family, (x, _boundary_hit(curve, x, v)), resolution, tol))
    for lf in out:
        if lf.carrier.residual(v) > math.sqrt(tol.sub):
            raise WrongComponent(f"point is off the carrier of a {family} leaf")
    return out
