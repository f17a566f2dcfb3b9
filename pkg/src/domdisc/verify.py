"""Seeded verification suites; each returns a deterministic JSON-ready report.

A suite is a list of checks. A check compares one worst-case value against a bound and
keeps a short description of the worst instance. Reports carry no timings, so the same
seed gives the same bytes.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import boundary as bd
from . import dynamics as dyn
from . import kernels
from ._config import DEFAULT, Tolerances
from .domains import (
    BadParams,
    IndeterminatePlane,
    WrongComponent,
    classify_plane,
    classify_point,
    classify_points,
    ctaf_preimages,
    dev,
    endpoint_errors,
    fuchsian_oracle,
    leaf,
    leaves_through_point,
    surface_F,
)
from .frenet import (
    TWO_PI,
    BadSpec,
    DualCurve,
    FrenetCurve,
    GroupElement,
    Projected,
    Restricted,
    Table,
    Transformed,
    Veronese,
    check_general_position,
    check_limit_compatibility,
    circ_dist,
    flag_distance,
    is_positive,
    random_distinct,
    random_gp_spec,
    random_triple,
    sym3,
)
from .projlin import Subspace, gp_decompose, grassmann_distance, meet, random_subspace, span

OPS: dict[str, Callable[[float, float], bool]] = {
    "<": lambda v, b: v < b,
    "<=": lambda v, b: v <= b,
    ">": lambda v, b: v > b,
    ">=": lambda v, b: v >= b,
    "==": lambda v, b: v == b,
}


@dataclass
class Check:
    name: str
    value: float
    op: str
    bound: float
    count: int = 0
    worst: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value)) and OPS[self.op](self.value, self.bound)

    def as_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "op": self.op, "bound": self.bound,
                "count": self.count, "worst": self.worst, "passed": self.passed}


@dataclass
class SuiteReport:
    suite: str
    n: int
    checks: list = field(default_factory=list)
    skipped: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {"suite": self.suite, "n": self.n, "passed": self.passed,
                "skipped": self.skipped, "checks": [c.as_dict() for c in self.checks]}


class _Worst:
    """Running extreme of a quantity with the instance that produced it."""

    def __init__(self, name, op, bound, largest: bool):
        self.name, self.op, self.bound, self.largest = name, op, bound, largest
        self.value = -math.inf if largest else math.inf
        self.count = 0
        self.worst = ""

    def add(self, v, what=""):
        v = float(v)
        self.count += 1
        if math.isnan(v):
            v = math.inf if self.largest else -math.inf
        if (v > self.value) if self.largest else (v < self.value):
            self.value, self.worst = v, str(what)

    def done(self) -> Check:
        value = self.value if self.count else (0.0 if self.largest else math.inf)
        return Check(self.name, value, self.op, self.bound, self.count, self.worst)


class _Count(_Worst):
    """Number of failing instances, with the first one kept."""

    def __init__(self, name):
        super().__init__(name, "==", 0, True)
        self.value = 0

    def add(self, v, what=""):
        self.count += 1
        if v:
            if not self.value:
                self.worst = str(what)
            self.value += int(v)


def upper(name, bound, op="<"):
    return _Worst(name, op, bound, True)


def lower(name, bound, op=">"):
    return _Worst(name, op, bound, False)


def _r(x) -> str:
    """Compact, deterministic rendering of parameters for worst-case notes."""
    if isinstance(x, (list, tuple)):
        return "(" + ", ".join(_r(t) for t in x) + ")"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.6g}"
    return str(x)


def _min_sep(spec) -> float:
    pts = [t for t, _ in spec]
    return min(circ_dist(a, b) for a, b in itertools.combinations(pts, 2)) if len(pts) > 1 else math.pi


BAND = 1e-9


def in_band(curve: FrenetCurve, P) -> np.ndarray | None:
    """Rows of P whose discriminant (in Veronese coordinates, unit scale) is inside the band.

    None when the curve has no discriminant oracle.
    """
    P = np.atleast_2d(np.asarray(P, float))
    if curve.kind == "transformed" and curve.base.kind == "veronese":
        P = np.linalg.solve(curve.g, P.T).T
    elif curve.kind != "veronese":
        return None
    P = P / np.linalg.norm(P, axis=1, keepdims=True)
    return np.abs(kernels.discriminant(P)) < BAND


def _analytic(curve) -> bool:
    return curve.lift is not None and curve.ambient_dim == 4


# suites

# offsets balanced about x, so the merged subspaces converge at second order in the scale
LIMIT_SPECS = [
    ([(1, 1), (-1, 1)], None),
    ([(-1, 1), (0, 1), (1, 1)], None),
    ([(1, 2), (-2, 1)], None),
    ([(-1, 2), (2, 1)], None),
    ([], [(-1, 1), (1, 1)]),
    ([(-2, 1)], [(1, 2)]),
]
LIMIT_SCALES = (1e-2, 1e-3, 1e-4, 1e-5)


def _gp_into(curve, rng, n, tol, fixed, scaled, below):
    """Directness margins over random specs: the fixed bound and the separation-scaled one."""
    dim = curve.ambient_dim
    for _ in range(n):
        spec = random_gp_spec(rng, dim)
        m = check_general_position(curve, spec, tol=tol)
        fixed.add(m, _r(spec))
        scaled.add(m / _min_sep(spec) ** (dim - 1), _r(spec))
        below.add(int(m <= tol.gp), _r(spec))


def _gp_checks(curve, rng, n, tol, prefix="", scale=1e-3):
    fixed = lower(prefix + "gp_margin", tol.gp)
    scaled = lower(prefix + "gp_margin_over_sep_power", scale)
    below = _Count(prefix + "gp_specs_below_bound")
    _gp_into(curve, rng, n, tol, fixed, scaled, below)
    return [fixed.done(), scaled.done(), below.done()]


def _limit_checks(curve, rng, tol, points=8, prefix=""):
    final = upper(prefix + "limit_final_distance", tol.lim)
    mono = lower(prefix + "limit_monotone", 1, ">=")
    for x in rng.uniform(0.0, TWO_PI, points):
        for spec, meets in LIMIT_SPECS:
            rep = check_limit_compatibility(curve, float(x), spec, LIMIT_SCALES, meets=meets, tol=tol)
            final.add(rep.distances[-1], _r((x, spec, meets)))
            mono.add(int(rep.monotone), _r((x, spec, meets)))
    return [final.done(), mono.done()]


def suite_frenet_axioms(curve: FrenetCurve, rng, n: int = 10_000, tol: Tolerances = DEFAULT):
    rep = SuiteReport("frenet-axioms", n)
    if isinstance(curve, Table):
        # tables only answer at their own parameters
        th = curve.thetas
        m = lower("gp_margin", tol.gp)
        for _ in range(n):
            comp = random_gp_spec(rng, curve.ambient_dim)
            pts = rng.choice(th, len(comp), replace=False)
            spec = [(float(t), k) for t, (_, k) in zip(pts, comp)]
            m.add(check_general_position(curve, spec, tol=tol), _r(spec))
        rep.checks.append(m.done())
        return rep
    rep.checks += _gp_checks(curve, rng, n, tol)
    rep.checks += _limit_checks(curve, rng, tol)
    # the improved form must refuse interleaved points
    refused = lower("order_violation_refused", 1, ">=")
    for _ in range(max(1, n // 100)):
        a, b, c, d = np.sort(random_distinct(rng, 4, 0.05))
        try:
            check_general_position(curve, [(a, 1), (c, 1)], meets=[(b, 1), (d, 1)], tol=tol)
            refused.add(0, _r((a, b, c, d)))
        except BadSpec:
            refused.add(1)
    rep.checks.append(refused.done())
    return rep


def suite_duality(curve: FrenetCurve, rng, n: int = 1000, tol: Tolerances = DEFAULT):
    rep = SuiteReport("duality", n)
    if isinstance(curve, Table):
        rep.skipped = "table curves are evaluated only at stored samples"
        return rep
    D = DualCurve(curve)
    rep.checks += _gp_checks(D, rng, n, tol, prefix="dual_")
    rep.checks += _limit_checks(D, rng, tol, points=4, prefix="dual_")
    DD = DualCurve(DualCurve(curve))  # explicit, not the shortcut dual().dual()
    inv = upper("dual_dual_flag_distance", 1e-10)
    for t in rng.uniform(0.0, TWO_PI, n):
        inv.add(flag_distance(DD.flag(float(t), tol), curve.flag(float(t), tol)), _r(t))
    rep.checks.append(inv.done())
    return rep


def suite_restriction_projection(curve: FrenetCurve, rng, n: int = 1000, tol: Tolerances = DEFAULT):
    rep = SuiteReport("restriction-projection", n)
    if isinstance(curve, Table):
        rep.skipped = "table curves are evaluated only at stored samples"
        return rep
    per = max(1, n // 10)
    curves = []
    for _ in range(10):
        x0 = float(rng.uniform(0.0, TWO_PI))
        y, x = (float(t) for t in random_distinct(rng, 2, 0.5))
        curves.append(("restricted", Restricted(curve, x0, 3)))
        curves.append(("projected", Projected(curve, y, x, 1)))
    for kind in ("restricted", "projected"):
        fixed = lower(f"{kind}_gp_margin", tol.gp)
        scaled = lower(f"{kind}_gp_margin_over_sep_power", 1e-3)
        below = _Count(f"{kind}_gp_specs_below_bound")
        for _, C in (c for c in curves if c[0] == kind):
            _gp_into(C, rng, per, tol, fixed, scaled, below)
        rep.checks += [fixed.done(), scaled.done(), below.done()]
    # values at the defining parameters
    defn = upper("defining_branch_distance", tol.sub)
    for kind, C in curves[:4]:
        if kind == "restricted":
            for k in (1, 2):
                s = Subspace(C.frame @ C.eval(C.x0, k, tol).basis)
                defn.add(grassmann_distance(s, curve.eval(C.x0, k, tol)), _r((kind, C.x0, k)))
        else:
            s = Subspace(C.frame @ C.eval(C.y, 1, tol).basis)
            defn.add(grassmann_distance(s, curve.eval(C.y, 1, tol)), _r((kind, C.y)))
    rep.checks.append(defn.done())
    return rep


def suite_oracle_agreement(curve: FrenetCurve, rng, n: int = 100_000, tol: Tolerances = DEFAULT):
    rep = SuiteReport("oracle-agreement", n)
    if curve.kind != "veronese":
        rep.skipped = "the discriminant oracle describes the Veronese curve only"
        return rep
    X = rng.standard_normal((n, 4))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    disc = kernels.discriminant(X)
    classes = classify_points(curve, X, tol)
    band = 1e-9
    outside = np.abs(disc) >= band
    mismatch = upper("out_of_band_disagreements", 0, "==")
    cross = upper("in_band_cross_classifications", 0, "==")
    bad_out = bad_in = 0
    worst_out = worst_in = ""
    for i in range(n):
        pc = classes[i]
        if outside[i]:
            want = "Interior2" if disc[i] > 0 else "Interior1"
            ok = pc.tag == want
            if ok:
                oc = fuchsian_oracle(X[i], tol)
                ok = oc.tag == want and all(
                    circ_dist(a, b) < 1e-6 for a, b in zip(sorted(pc.params), sorted(oc.params)))
            if not ok:
                bad_out += 1
                worst_out = worst_out or _r(list(X[i]))
        else:
            # inside the band any tag is fine except the interior opposite to the sign
            opposite = "Interior1" if disc[i] > 0 else "Interior2"
            if pc.tag == opposite and disc[i] != 0:
                bad_in += 1
                worst_in = worst_in or _r(list(X[i]))
    mismatch.add(bad_out, worst_out)
    cross.add(bad_in, worst_in)
    rep.checks += [mismatch.done(), cross.done()]
    rep.checks.append(Check("points_outside_band", int(outside.sum()), ">", 0, n))
    # the homogeneous discriminant is F after scaling to leading coefficient 1
    fcheck = upper("chart_F_relative_error", 1e-9)
    for v, dv in zip(X[:1000], disc[:1000]):
        if abs(v[0]) > 0.1:
            f = surface_F(v[1] / v[0], v[2] / v[0], v[3] / v[0]) * v[0] ** 4
            fcheck.add(abs(f - dv) / max(1.0, abs(dv)), _r(list(v)))
    rep.checks.append(fcheck.done())
    return rep


def suite_dev_landing(curve: FrenetCurve, rng, n: int = 1000, tol: Tolerances = DEFAULT):
    rep = SuiteReport("dev-landing", n)
    if not _analytic(curve):
        rep.skipped = "needs an analytic curve in RP^3"
        return rep
    land = upper("wrong_component", 0, "==")
    par = upper("parameter_error", 1e-6)
    banded = upper("in_band_fraction", 0.05)
    wrong = excluded = 0
    note = ""
    for _ in range(n):
        x, y, z = random_triple(rng)
        for kind, comp, expect in (("pcf", "Interior1", [x]), ("pctf", "Interior1", [y]),
                                   ("ctaf", "Interior2", [x, y, z]), ("ctrf", "Interior2", [x, y])):
            p = dev(kind, (x, y, z), curve, tol)
            mask = in_band(curve, p.v)
            if mask is not None and mask[0]:
                excluded += 1
                continue
            pc = classify_point(curve, p, tol)
            if pc.tag != comp:
                wrong += 1
                note = note or _r((kind, x, y, z, pc.tag))
                continue
            err = max(min(circ_dist(e, p) for p in pc.params) for e in expect)
            par.add(err, _r((kind, x, y, z)))
    land.add(wrong, note)
    banded.add(excluded / (4 * n))
    rep.checks += [land.done(), par.done(), banded.done()]
    # two secants through distinct points meet trivially; secants sharing a point meet there
    skew = upper("disjoint_secants_meet_dim", 0, "==")
    share = upper("shared_secants_distance", tol.sub)
    for _ in range(max(1, n // 10)):
        x, y, z, w = (float(t) for t in random_distinct(rng, 4, 1e-2))
        L = [curve.eval(t, 1, tol) for t in (x, y, z, w)]
        m, _ = meet([span([L[0], L[1]], tol)[0], span([L[2], L[3]], tol)[0]], tol)
        skew.add(m.dim, _r((x, y, z, w)))
        m, _ = meet([span([L[0], L[1]], tol)[0], span([L[0], L[2]], tol)[0]], tol)
        share.add(grassmann_distance(m, L[0]) if m.dim == 1 else math.inf, _r((x, y, z)))
    rep.checks += [skew.done(), share.done()]
    return rep


def suite_covering(curve: FrenetCurve, rng, n: int = 1000, tol: Tolerances = DEFAULT):
    rep = SuiteReport("covering", n)
    if not _analytic(curve):
        rep.skipped = "needs an analytic curve in RP^3"
        return rep
    same = upper("preimage_point_spread", 1e-8)
    count = lower("preimages_positive_and_cyclic", 1, ">=")
    for _ in range(n):
        t = random_triple(rng)
        pre = ctaf_preimages(curve, t, tol)
        pts = [dev("ctaf", q, curve, tol) for q in pre]
        same.add(max(pts[0].distance(p) for p in pts[1:]), _r(t))
        ok = len(set(pre)) == 3 and all(is_positive(*q, tol) for q in pre)
        count.add(int(ok), _r(t))
    rep.checks += [same.done(), count.done()]
    m = max(1, n // 10)
    for family, want, comp in (("G_ctaf", 3, "ctaf"), ("G_ctrf", 3, "ctaf"),
                               ("G_pcf", 1, "pcf"), ("G_tcf", 1, "pcf")):
        wrong = upper(f"{family}_leaf_count_errors", 0, "==")
        bad, note = 0, ""
        off = upper(f"{family}_point_off_leaf", math.sqrt(tol.sub))
        for _ in range(m):
            p = dev(comp, random_triple(rng, 0.05), curve, tol)
            try:
                lv = leaves_through_point(curve, family, p, resolution=16, tol=tol)
            except (WrongComponent, BadParams) as e:
                bad += 1
                note = note or f"{_r(list(p.v))}: {e}"
                continue
            if len(lv) != want:
                bad += 1
                note = note or _r(list(p.v))
            for lf in lv:
                off.add(lf.carrier.residual(p.v), _r(list(p.v)))
        wrong.add(bad, note)
        rep.checks += [wrong.done(), off.done()]
    return rep


COORDINATE_PLANES = (
    ((0.0, 0.0, 0.0, 1.0), "Tangent", (0.0,)),
    ((0.0, 0.0, 1.0, 0.0), "OscMix", (0.0, math.pi)),
    ((0.0, 1.0, 1.0, 0.0), "TriSecant", (0.0, math.pi / 2, math.pi)),
    ((1.0, 0.0, 0.0, 1.0), "SecantMix", (0.0, math.pi / 2, math.pi)),
)


def suite_tetrachotomy(curve: FrenetCurve, rng, n: int = 10_000, tol: Tolerances = DEFAULT):
    rep = SuiteReport("tetrachotomy", n)
    if not _analytic(curve):
        rep.skipped = "needs an analytic curve in RP^3"
        return rep
    recon = upper("reconstruction_distance", 1e-7)
    indet = upper("indeterminate_planes", 0, "==")
    bad = 0
    for _ in range(n):
        cov = rng.standard_normal(4)
        try:
            pc = classify_plane(curve, cov, tol)
        except IndeterminatePlane:
            bad += 1
            continue
        recon.add(pc.reconstruction, _r(list(cov)))
    indet.add(bad)
    rep.checks += [recon.done(), indet.done()]
    if curve.kind == "veronese":
        ex = upper("coordinate_examples_wrong", 0, "==")
        wrong, note = 0, ""
        for cov, tag, params in COORDINATE_PLANES:
            pc = classify_plane(curve, np.array(cov), tol)
            ok = pc.tag == tag and len(pc.params) == len(params) and all(
                circ_dist(a, b) < 1e-6 for a, b in zip(pc.params, params))
            if not ok:
                wrong += 1
                note = note or f"{cov}: {pc.tag}{_r(pc.params)}"
        ex.add(wrong, note)
        rep.checks.append(ex.done())
    return rep


def random_plane(curve: FrenetCurve, tag: str, rng, tol: Tolerances = DEFAULT) -> Subspace:
    ev = curve.eval
    x, y, z = random_triple(rng, 0.05)
    if tag == "Tangent":
        return ev(x, 3, tol)
    if tag == "OscMix":
        return span([ev(x, 2, tol), ev(y, 1, tol)], tol)[0]
    if tag == "TriSecant":
        return span([ev(t, 1, tol) for t in (x, y, z)], tol)[0]
    line, _ = meet([ev(x, 3, tol), ev(z, 3, tol)], tol)
    return span([line, ev(y, 1, tol)], tol)[0]


def suite_patterns(curve: FrenetCurve, rng, n: int = 50, tol: Tolerances = DEFAULT,
                   resolution: int = 2048):
    rep = SuiteReport("patterns", n)
    if not _analytic(curve):
        rep.skipped = "needs an analytic curve in RP^3"
        return rep
    sig = upper("signature_mismatches", 0, "==")
    arc = lower("arc_convexity_margin", 0.0)
    simplex = lower("trisecant_simplex_margin", -1e-9, ">=")
    cover = upper("slice_coverage_distance", 1e-8)
    hits = upper("osc_line_hit_count_errors", 0, "==")
    sides = upper("cusp_sides_not_interior2", 0, "==")
    bad_sig = bad_hits = bad_sides = 0
    notes = ["", "", ""]
    ws = np.linspace(0.0, TWO_PI, 97, endpoint=False) + 0.013
    for tag, want in bd.SIGNATURES.items():
        for _ in range(n):
            P = random_plane(curve, tag, rng, tol)
            try:
                pc = classify_plane(curve, P, tol)
                pat = bd.intersection_pattern(curve, pc, resolution, tol)
            except (IndeterminatePlane, bd.ResolutionTooCoarse, bd.NotSingular) as e:
                bad_sig += 1
                notes[0] = notes[0] or f"{tag}: {e}"
                continue
            if pc.tag != tag or pat.signature != want or len(pat.arcs) > 3 or len(pat.lines) > 1:
                bad_sig += 1
                notes[0] = notes[0] or f"{tag} -> {pc.tag}{_r(pc.params)} {pat.signature}"
            for a in pat.arcs:
                arc.add(a.convexity, f"{pc.tag}{_r(pc.params)}")
            if pat.simplex_margin is not None:
                simplex.add(pat.simplex_margin, _r(pc.params))
            cover.add(bd.pattern_coverage(curve, pat, ws, tol), f"{pc.tag}{_r(pc.params)}")
            if tag == "OscMix":
                x, y = pc.params
                z = float(rng.uniform(0.0, TWO_PI))
                if min(circ_dist(z, x), circ_dist(z, y)) > 0.05 and \
                        bd.osc_line_hits(curve, x, y, z, tol=tol) != 1:
                    bad_hits += 1
                    notes[1] = notes[1] or _r((x, y, z))
            if tag in ("OscMix", "TriSecant", "SecantMix"):
                for p, kind, _ in pat.singular_points:
                    if kind.kind != "BalancedCusp":
                        continue
                    s0 = _param_of(pat, p.v)
                    got = bd.cusp_sides(curve, pat, s0, tol=tol)
                    if any(t != "Interior2" for t in got):
                        bad_sides += 1
                        notes[2] = notes[2] or f"{pc.tag}{_r(pc.params)} {got}"
    sig.add(bad_sig, notes[0])
    hits.add(bad_hits, notes[1])
    sides.add(bad_sides, notes[2])
    rep.checks += [sig.done(), arc.done(), simplex.done(), cover.done(), hits.done(), sides.done()]
    rep.checks += _detector_checks(curve, rng, max(1, n // 5), tol.with_overrides(tan=1e-4))
    rep.checks += _view_checks(curve, rng, tol)
    return rep


def _param_of(pat: bd.IntersectionPattern, v) -> float:
    """Parameter of the pattern curve that hits the given curve point."""
    best = None
    for cand in np.linspace(pat.curve.interval[0], pat.curve.interval[1], 4097):
        u = pat.curve.eval(cand)[0]
        d = abs(abs(u @ v) / np.linalg.norm(u) - 1.0)
        if best is None or d < best[0]:
            best = (d, cand)
    lo, hi = best[1] - 2e-3, best[1] + 2e-3
    ss = np.linspace(lo, hi, 4001)
    U = pat.curve.eval(ss)
    d = 1.0 - np.abs(U @ v) / np.linalg.norm(U, axis=1)
    return float(ss[int(np.argmin(d))])


def _detector_checks(curve, rng, m, tol):
    kinds = upper("detector_kind_errors", 0, "==")
    angle = upper("one_sided_tangent_angle", tol.tan)
    bad, note = 0, ""
    for _ in range(m):
        x, y, z = random_triple(rng, 0.2)
        osc = classify_plane(curve, span([curve.eval(x, 2, tol), curve.eval(y, 1, tol)], tol)[0], tol)
        pat = bd.intersection_pattern(curve, osc, 8192, tol)
        got = [k.kind for _, k, _ in pat.singular_points]
        if got != ["BalancedCusp", "C1Crossing"]:
            bad += 1
            note = note or f"OscMix{_r(osc.params)} {got}"
        for _, k, _ in pat.singular_points:
            angle.add(k.angle, f"OscMix{_r(osc.params)}")
        line, _ = meet([curve.eval(x, 3, tol), curve.eval(z, 3, tol)], tol)
        sm = classify_plane(curve, span([line, curve.eval(y, 1, tol)], tol)[0], tol)
        pat = bd.intersection_pattern(curve, sm, 8192, tol)
        got = [k.kind for _, k, _ in pat.singular_points]
        if got != ["BalancedCusp"]:
            bad += 1
            note = note or f"SecantMix{_r(sm.params)} {got}"
        for _, k, _ in pat.singular_points:
            angle.add(k.angle, f"SecantMix{_r(sm.params)}")
        sigma = bd.front_view(curve, x, y, 8192, tol)
        k = bd.cusp_classify(sigma, x + (y - x) % TWO_PI, tol)
        if k.kind != "C1Crossing":
            bad += 1
            note = note or f"front{_r((x, y))} {k.kind}"
        angle.add(k.angle, f"front{_r((x, y))}")
    kinds.add(bad, note)
    return [kinds.done(), angle.done()]


def _view_checks(curve, rng, tol, points: int = 100, composites: int = 20):
    # top view samples lie in the first component apart from the two ends
    top = upper("top_view_samples_not_interior1", 0, "==")
    seg = lower("top_view_chord_betweenness", 0.0, ">=")
    bad, note = 0, ""
    counts = [0, 0]
    for _ in range(5):
        x, y, w = random_triple(rng, 0.05)
        _, ap, am = bd.top_view(curve, x, y, 64, tol)
        for a in (ap, am):
            if _wrong_samples(curve, a.samples[1:-1], "Interior1", tol, counts):
                bad += 1
                note = note or _r((x, y))
        _, _, between = bd.top_view_segment(curve, x, y, w, tol)
        seg.add(between, _r((x, y, w)))
    top.add(bad, note)
    # arc foliation of C_x: each interior point is on exactly one A+ arc
    x0 = 0.0
    uniq = upper("arc_foliation_count_errors", 0, "==")
    res = upper("arc_foliation_residual", 1e-6)
    bad, note = 0, ""
    for _ in range(points):
        y, z = np.sort(x0 + rng.uniform(0.05, TWO_PI - 0.05, 2))
        if z - y < 0.05:
            continue
        q = dev("pcf", (x0, y, z), curve, tol)
        hits = [h for h in bd.arcs_through_point(curve, x0, q, tol) if h[2] < 1e-6]
        if len(hits) != 1:
            bad += 1
            note = note or _r((float(y), float(z)))
        for h in hits:
            res.add(h[2], _r((y, z)))
    uniq.add(bad, note)
    comp = lower("composite_convexity_margin", 0.0)
    for _ in range(composites):
        x, y1, y2 = random_triple(rng, 0.05)
        _, mg = bd.composite_curve(curve, x, y1, y2, tol=tol)
        comp.add(mg, _r((x, y1, y2)))
    front = lower("front_view_frenet_margin", tol.rank)
    for _ in range(5):
        x, y = (float(t) for t in random_distinct(rng, 2, 0.2))
        front.add(min(bd.front_side_margins(curve, x, y, rng, trials=10, tol=tol)), _r((x, y)))
    return [top.done(), _band_check("top_view", counts), seg.done(), uniq.done(), res.done(),
            comp.done(), front.done()]


def _wrong_samples(curve, S, want, tol, counts) -> int:
    """Samples outside the band that do not classify as ``want``; counts[0] += excluded."""
    mask = in_band(curve, S)
    keep = np.ones(len(S), bool) if mask is None else ~mask
    counts[0] += int(len(S) - keep.sum())
    counts[1] += len(S)
    return sum(c.tag != want for c in classify_points(curve, S[keep], tol)) if keep.any() else 0


def _band_check(prefix: str, counts, bound: float = 0.05) -> Check:
    frac = counts[0] / max(1, counts[1])
    return Check(f"{prefix}_in_band_fraction", frac, "<", bound, counts[1])


def suite_leaves(curve: FrenetCurve, rng, n: int = 100, tol: Tolerances = DEFAULT,
                 resolution: int = 48):
    rep = SuiteReport("leaves", n)
    if not _analytic(curve):
        rep.skipped = "needs an analytic curve in RP^3"
        return rep
    for family in ("G_pcf", "G_tcf", "G_ctaf", "G_ctrf"):
        ends = upper(f"{family}_endpoint_error", tol.end)
        comp = upper(f"{family}_samples_wrong_component", 0, "==")
        want = "Interior1" if family in ("G_pcf", "G_tcf") else "Interior2"
        bad, note = 0, ""
        counts = [0, 0]
        for _ in range(n):
            a, b = (float(t) for t in random_distinct(rng, 2, 0.05))
            lf = leaf(curve, family, (a, b), resolution, tol)
            ends.add(endpoint_errors(curve, lf, tol), _r((a, b)))
            wrong = _wrong_samples(curve, lf.samples, want, tol, counts)
            if wrong:
                bad += wrong
                note = note or _r((a, b))
        comp.add(bad, note)
        # samples cluster towards the ends, where the surface is approached to high order
        rep.checks += [ends.done(), comp.done(), _band_check(family, counts, 0.5)]
    for family, want in (("F_pcf", "Interior1"), ("F_ccf", "Interior2")):
        comp = upper(f"{family}_samples_wrong_component", 0, "==")
        bad = 0
        counts = [0, 0]
        for x in rng.uniform(0.0, TWO_PI, 3):
            lf = leaf(curve, family, (float(x),), 64, tol)
            bad += _wrong_samples(curve, lf.samples, want, tol, counts)
        comp.add(bad)
        rep.checks += [comp.done(), _band_check(family, counts, 0.5)]
    # distinct leaves of a foliation never meet
    gap = lower("G_pcf_leaf_separation", 0.0)
    for _ in range(3):
        a, b, c = random_triple(rng, 0.1)
        l1 = leaf(curve, "G_pcf", (a, b), 1000, tol)
        l2 = leaf(curve, "G_pcf", (a, c), 1000, tol)
        D = np.sqrt(np.maximum(0.0, 2.0 - 2.0 * np.abs(l1.samples @ l2.samples.T)))
        gap.add(float(D.min()), _r((a, b, c)))
    rep.checks.append(gap.done())
    return rep


def _conjugate(g: GroupElement, curve: FrenetCurve) -> GroupElement:
    if isinstance(curve, Transformed) and curve.base.kind == "veronese":
        return GroupElement(g.m, curve.g @ g.rho @ np.linalg.inv(curve.g))
    return g


def random_sl2(rng, max_stretch: float = 3.0) -> np.ndarray:
    """Rotation, diagonal stretch in [1, max_stretch], rotation."""
    def rot(a):
        return np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])

    a, b = rng.uniform(0.0, TWO_PI, 2)
    lam = rng.uniform(1.0, max_stretch)
    return rot(a) @ np.diag([lam, 1.0 / lam]) @ rot(b)


def suite_dynamics(curve: FrenetCurve, rng, n: int = 10, tol: Tolerances = DEFAULT,
                   pairs: int = 1000):
    rep = SuiteReport("dynamics", n)
    base = curve.base if isinstance(curve, Transformed) else curve
    if base.kind != "veronese":
        rep.skipped = "the group acts on the Veronese curve and its projective images"
        return rep
    lim = upper("limit_hausdorff_distance", 1e-4)
    for _ in range(n):
        g = _conjugate(dyn.random_hyperbolic(rng), curve)
        steps = dyn.power_for(g)
        for case in dyn.limit_cases(curve, g, rng, tol):
            lim.add(dyn.limit_distance(case, g, steps), f"{case.lemma} {_r(g.fixed_points())}")
    rep.checks.append(lim.done())
    eq = upper("equivariance_distance", 1e-9)
    for _ in range(pairs):
        m = random_sl2(rng)
        g = _conjugate(sym3(m, tol), curve)
        t = float(rng.uniform(0.0, TWO_PI))
        gt = g.act_theta(t)
        for k in (1, 2, 3):
            img = Subspace(g.rho @ curve.eval(t, k, tol).basis)
            eq.add(grassmann_distance(img, curve.eval(gt, k, tol)), _r((list(m.ravel()), t, k)))
    rep.checks.append(eq.done())
    ns = upper("north_south_distance", 1e-6)
    for _ in range(n):
        g = dyn.random_hyperbolic(rng)
        rep_, att = g.fixed_points()
        t = float(rng.uniform(0.0, TWO_PI))
        if circ_dist(t, rep_) < 1e-3:
            continue
        for _ in range(dyn.power_for(g, 1e8)):
            t = g.act_theta(t)
        ns.add(circ_dist(t, att), _r((rep_, att)))
    rep.checks.append(ns.done())
    return rep


def _rank(M: np.ndarray) -> int:
    return int(np.linalg.matrix_rank(M, tol=1e-9 * max(1.0, np.abs(M).max())))


def random_gp_instance(rng, n: int):
    """Random X, Y, W_1..W_k with V = X (+) Y = X (+) W_1 (+) ... (+) W_k."""
    a = int(rng.integers(1, n))
    rest = n - a
    cuts = sorted(rng.choice(np.arange(1, rest), size=int(rng.integers(0, rest)), replace=False)) \
        if rest > 1 else []
    dims = np.diff([0, *cuts, rest]).tolist()
    return (random_subspace(rng, a, n), random_subspace(rng, rest, n),
            [random_subspace(rng, d, n) for d in dims])


def suite_gp_lemma(curve: FrenetCurve, rng, n: int = 1000, tol: Tolerances = DEFAULT):
    rep = SuiteReport("gp-lemma", n)
    total = upper("sum_equals_Y_distance", 1e-9)
    dims = upper("partial_dimension_errors", 0, "==")
    bad, note = 0, ""
    for i in range(n):
        amb = 4 + i % 3
        X, Y, W = random_gp_instance(rng, amb)
        parts = gp_decompose(X, Y, W, tol)
        S, _ = span(parts, tol)
        total.add(grassmann_distance(S, Y) if S.dim == Y.dim else math.inf,
                  f"n={amb} dims={[w.dim for w in W]}")
        acc = 0
        for j in range(1, len(W) + 1):
            acc += W[j - 1].dim
            # independent count: dim(Y meet (X + W_1..W_j)) = dim Y + dim A - dim(Y + A)
            A = np.column_stack([X.basis] + [w.basis for w in W[:j]])
            lhs = Y.dim + _rank(A) - _rank(np.column_stack([Y.basis, A]))
            got = span(parts[:j], tol)[0].dim
            if not (lhs == acc == got):
                bad += 1
                note = note or f"n={amb} j={j} oracle={lhs} sum={acc} pieces={got}"
    dims.add(bad, note)
    rep.checks += [total.done(), dims.done()]
    return rep


def suite_local_convexity(curve: FrenetCurve, rng, n: int = 100, tol: Tolerances = DEFAULT):
    rep = SuiteReport("local-convexity", n)
    if not _analytic(curve):
        rep.skipped = "needs an analytic curve in RP^3"
        return rep
    side = lower("support_one_sidedness", -tol.sup, ">=")
    uniq = lower("support_uniqueness_margin", 0.0)
    smooth = upper("xi2_support_spread", 1e-2)
    for i in range(n):
        x, y = (float(t) for t in random_distinct(rng, 2, 0.05))
        _, r, u = bd.supporting_plane(curve, x, y, tol=tol)
        side.add(r, _r((x, y)))
        uniq.add(u, _r((x, y)))
        if i < max(1, n // 5):
            smooth.add(bd.support_disagreement(curve, x, y, tol=tol), _r((x, y)))
    kink = lower("xi1_support_spread", 1e-2)
    for x in rng.uniform(0.0, TWO_PI, n):
        kink.add(bd.support_disagreement(curve, float(x), float(x), tol=tol), _r(x))
    rep.checks += [side.done(), uniq.done(), smooth.done(), kink.done()]
    return rep


SUITES = {
    "frenet-axioms": suite_frenet_axioms,
    "duality": suite_duality,
    "restriction-projection": suite_restriction_projection,
    "oracle-agreement": suite_oracle_agreement,
    "dev-landing": suite_dev_landing,
    "covering": suite_covering,
    "tetrachotomy": suite_tetrachotomy,
    "patterns": suite_patterns,
    "leaves": suite_leaves,
    "dynamics": suite_dynamics,
    "gp-lemma": suite_gp_lemma,
    "local-convexity": suite_local_convexity,
}


def run_suite(name: str, curve: FrenetCurve | None = None, seed: int = 0, n: int | None = None,
              tol: Tolerances = DEFAULT) -> SuiteReport:
    """Each suite draws from its own stream, so selecting suites never shifts the others."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    curve = curve or Veronese()
    idx = list(SUITES).index(name)
    rng = np.random.default_rng([seed, idx])
    fn = SUITES[name]
    return fn(curve, rng, tol=tol) if n is None else fn(curve, rng, n=n, tol=tol)


def run(names, curve: FrenetCurve | None = None, seed: int = 0, n: int | None = None,
        tol: Tolerances = DEFAULT) -> dict:
    names = list(SUITES) if names in ("all", ["all"]) else list(names)
    curve = curve or Veronese()
    reports = [run_suite(s, curve, seed, n, tol) for s in names]
    return {"curve": curve.describe(), "seed": seed, "n": n,
            "passed": all(r.passed for r in reports),
            "suites": [r.as_dict() for r in reports]}
