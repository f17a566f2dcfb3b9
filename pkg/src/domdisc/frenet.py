"""Hyperconvex Frenet curves, their duals, restrictions and projections.

The boundary circle is parametrized by theta in [0, 2 pi) with t = tan(theta / 2).
Most curves here carry an analytic *lift*: a vector of homogeneous polynomials in
(c, s) = (cos(theta/2), sin(theta/2)) whose osculating spans give the flag. The lift
is used for incidence functions and for extended-precision limit checks; the
plain ``eval`` path always uses the literal meet/span formulas.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import mpmath
import numpy as np

from ._config import DEFAULT, Tolerances
from .projlin import (
    DimMismatch,
    ProjLinError,
    Subspace,
    annihilator,
    grassmann_distance,
    meet,
    span,
)

TWO_PI = 2.0 * math.pi


class BadSpec(ProjLinError):
    pass


class TableMiss(LookupError):
    pass


class Singular(ValueError):
    pass


# circle parameters

def canon(theta: float) -> float:
    t = math.fmod(float(theta), TWO_PI)
    if t < 0.0:
        t += TWO_PI
    return 0.0 if t >= TWO_PI else t + 0.0


def circ_dist(a: float, b: float) -> float:
    d = abs(canon(a) - canon(b))
    return min(d, TWO_PI - d)


def same_param(a: float, b: float, tol: Tolerances = DEFAULT) -> bool:
    return circ_dist(a, b) <= tol.circ


def ccw(a: float, b: float) -> float:
    """Counter-clockwise arc length from a to b, in [0, 2 pi)."""
    return canon(b - a)


def is_positive(x: float, y: float, z: float, tol: Tolerances = DEFAULT) -> bool:
    if min(circ_dist(x, y), circ_dist(y, z), circ_dist(x, z)) <= tol.circ:
        return False
    return ccw(x, y) < ccw(x, z)


def in_open_arc(w: float, a: float, b: float) -> bool:
    """w strictly inside the counter-clockwise arc from a to b."""
    return 0.0 < ccw(a, w) < ccw(a, b)


def positive_order(params: Sequence[float]) -> list[float]:
    return sorted(canon(p) for p in params)


def random_triple(rng: np.random.Generator, sep: float = 1e-3) -> tuple[float, float, float]:
    while True:
        x, y, z = np.sort(rng.uniform(0.0, TWO_PI, 3))
        if min(y - x, z - y, TWO_PI - z + x) > sep:
            shift = int(rng.integers(3))
            t = (float(x), float(y), float(z))
            return t[shift:] + t[:shift]


def random_distinct(rng: np.random.Generator, k: int, sep: float = 1e-3) -> np.ndarray:
    while True:
        p = rng.uniform(0.0, TWO_PI, k)
        q = np.sort(p)
        gaps = np.diff(np.concatenate([q, [q[0] + TWO_PI]]))
        if k == 1 or gaps.min() > sep:
            return p


def half_angle(theta: float) -> tuple[float, float]:
    return math.cos(0.5 * theta), math.sin(0.5 * theta)


def theta_of(c: float, s: float) -> float:
    return canon(2.0 * math.atan2(s, c))


# homogeneous polynomials in (c, s): coefficient i multiplies c^(d-i) s^i

def monomials(theta, d: int) -> np.ndarray:
    c, s = np.cos(0.5 * np.asarray(theta)), np.sin(0.5 * np.asarray(theta))
    return np.stack([c ** (d - i) * s**i for i in range(d + 1)], axis=-1)


def deriv_matrix(d: int) -> np.ndarray:
    """D with d/dtheta monomials(theta, d) = D @ monomials(theta, d)."""
    D = np.zeros((d + 1, d + 1))
    for i in range(d + 1):
        if i + 1 <= d:
            D[i, i + 1] = -(d - i) / 2.0
        if i >= 1:
            D[i, i - 1] = i / 2.0
    return D


def poly_mul(p, q) -> np.ndarray:
    return np.convolve(np.asarray(p, float), np.asarray(q, float))


def _divide_rows(A: np.ndarray, q: np.ndarray, tol: float):
    """Exact division of each row polynomial by q, or None when not exact."""
    d = A.shape[1] - 1
    e = q.size - 1
    if d < e:
        return None
    T = np.zeros((d + 1, d - e + 1))
    for j in range(d - e + 1):
        T[j:j + e + 1, j] = q
    Q, *_ = np.linalg.lstsq(T, A.T, rcond=None)
    res = np.linalg.norm(T @ Q - A.T)
    if res > tol * max(np.linalg.norm(A), 1e-300):
        return None
    return Q.T


def _poly_det(rows: list[list[np.ndarray]]) -> np.ndarray:
    n = len(rows)
    total = None
    for perm in itertools.permutations(range(n)):
        sign = 1.0
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = np.array([sign])
        for i in range(n):
            term = poly_mul(term, rows[i][perm[i]])
        total = term if total is None else total + term
    return total


class HomogLift:
    """Vector of degree-d homogeneous polynomials in (c, s); rows are coordinates."""

    __slots__ = ("A", "_D")

    def __init__(self, A):
        self.A = np.atleast_2d(np.asarray(A, dtype=float))
        self._D = deriv_matrix(self.degree)

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    @property
    def degree(self) -> int:
        return self.A.shape[1] - 1

    def coeffs(self, order: int = 0) -> np.ndarray:
        A = self.A
        for _ in range(order):
            A = A @ self._D
        return A

    def __call__(self, theta, order: int = 0) -> np.ndarray:
        return monomials(theta, self.degree) @ self.coeffs(order).T

    def frame(self, theta: float, k: int) -> np.ndarray:
        m = monomials(theta, self.degree)
        cols, A = [], self.A
        for _ in range(k):
            cols.append(A @ m)
            A = A @ self._D
        return np.column_stack(cols)

    def mp_frame(self, theta, k: int) -> list:
        """Derivative vectors as mpmath matrices at the current working precision."""
        c, s = mpmath.cos(theta / 2), mpmath.sin(theta / 2)
        d = self.degree
        m = mpmath.matrix([c ** (d - i) * s**i for i in range(d + 1)])
        out, A = [], self.A
        for _ in range(k):
            out.append(mpmath.matrix(A.tolist()) * m)
            A = A @ self._D
        return out

    def transformed(self, g) -> "HomogLift":
        return HomogLift(np.asarray(g, float) @ self.A)

    def strip_root(self, theta0: float, tol: float = 1e-9) -> "HomogLift":
        """Divide out the common linear factor vanishing at theta0 as often as possible."""
        c0, s0 = half_angle(theta0)
        lin = np.array([s0, -c0])
        A = self.A
        while A.shape[1] > 1:
            Q = _divide_rows(A, lin, tol)
            if Q is None:
                break
            A = Q
        return HomogLift(A)

    def reduced(self, tol: float = 1e-9) -> "HomogLift":
        """Strip factors of c^2 + s^2 (identically 1) to keep the degree minimal."""
        A = self.A
        circle = np.array([1.0, 0.0, 1.0])
        while A.shape[1] > 3:
            Q = _divide_rows(A, circle, tol)
            if Q is None:
                break
            A = Q
        return HomogLift(A)

    def dual(self) -> "HomogLift":
        """Covector lift killing L, L', ..., L^(n-2): a generalized cross product."""
        n = self.dim
        cols = [self.coeffs(j) for j in range(n - 1)]
        comps = []
        for i in range(n):
            rows = [[cols[j][r] for j in range(n - 1)] for r in range(n) if r != i]
            comps.append((-1) ** i * _poly_det(rows))
        A = np.array(comps)
        A = A / np.abs(A).max()
        return HomogLift(A).reduced()


@dataclass(frozen=True)
class Flag:
    spaces: tuple

    @property
    def v1(self) -> Subspace:
        return self.spaces[0]

    @property
    def v2(self) -> Subspace:
        return self.spaces[1]

    @property
    def v3(self) -> Subspace:
        return self.spaces[2]

    def is_nested(self, tol: Tolerances = DEFAULT) -> bool:
        return all(b.contains(a, tol) for a, b in zip(self.spaces, self.spaces[1:]))


# curves

class FrenetCurve:
    kind = "abstract"
    ambient_dim = 4

    @property
    def lift(self) -> HomogLift | None:
        return None

    @cached_property
    def covector_lift(self) -> HomogLift | None:
        lf = self.lift
        return None if lf is None else lf.dual()

    def eval(self, theta: float, k: int, tol: Tolerances = DEFAULT) -> Subspace:
        raise NotImplementedError

    def _check_k(self, k: int):
        if not 1 <= k <= self.ambient_dim - 1:
            raise DimMismatch(f"flag index {k} outside 1..{self.ambient_dim - 1}")

    def flag(self, theta: float, tol: Tolerances = DEFAULT) -> Flag:
        return Flag(tuple(self.eval(theta, k, tol) for k in range(1, self.ambient_dim)))

    def point(self, theta: float) -> np.ndarray:
        """Unit representative of xi^1(theta)."""
        lf = self.lift
        if lf is not None:
            v = lf(theta)
            return v / np.linalg.norm(v)
        return self.eval(theta, 1).basis[:, 0]

    def dual(self) -> "FrenetCurve":
        return DualCurve(self)

    def describe(self) -> dict:
        return {"kind": self.kind}


class PolyCurve(FrenetCurve):
    """Curve given entirely by an analytic lift; xi^k is the k-th osculating span."""

    kind = "poly"

    def __init__(self, lift: HomogLift):
        self._lift = lift
        self.ambient_dim = lift.dim

    @property
    def lift(self) -> HomogLift:
        return self._lift

    def eval(self, theta, k, tol=DEFAULT):
        self._check_k(k)
        return Subspace(self._lift.frame(theta, k))


VERONESE_A = np.diag([1.0, -3.0, 3.0, -1.0])


class Veronese(PolyCurve):
    """The Fuchsian model: xi^1(theta) = [(cX - sY)^3] in the basis X^3, X^2Y, XY^2, Y^3."""

    kind = "veronese"

    def __init__(self):
        super().__init__(HomogLift(VERONESE_A))

    @cached_property
    def covector_lift(self) -> HomogLift:
        # evaluation functional f -> f(s, c)
        return HomogLift(np.eye(4)[::-1])

    def eval(self, theta, k, tol=DEFAULT):
        self._check_k(k)
        if k == 3:
            c, s = half_angle(theta)
            return annihilator(Subspace(np.array([s**3, s * s * c, s * c * c, c**3])))
        return Subspace(self._lift.frame(theta, k))


class Transformed(FrenetCurve):
    kind = "transformed"

    def __init__(self, g, base: FrenetCurve | None = None):
        self.g = np.asarray(g, dtype=float)
        self.base = base or Veronese()
        self.ambient_dim = self.base.ambient_dim
        if self.g.shape != (self.ambient_dim,) * 2:
            raise DimMismatch("transform shape does not match the curve")
        if abs(np.linalg.det(self.g)) <= 1e-12:
            raise Singular("transform is not invertible")

    @cached_property
    def _lift(self):
        lf = self.base.lift
        return None if lf is None else lf.transformed(self.g)

    @property
    def lift(self):
        return self._lift

    def eval(self, theta, k, tol=DEFAULT):
        self._check_k(k)
        return Subspace(self.g @ self.base.eval(theta, k, tol).basis)

    def describe(self):
        return {"kind": self.kind, "g": self.g.tolist(), "base": self.base.describe()}


class DualCurve(FrenetCurve):
    kind = "dual"

    def __init__(self, of: FrenetCurve):
        self.of = of
        self.ambient_dim = of.ambient_dim

    @property
    def lift(self):
        return self.of.covector_lift

    @cached_property
    def covector_lift(self):
        lf = self.of.lift
        if lf is None:
            return None
        # the dual of the dual lift is the original lift up to scale
        return HomogLift(lf.A / np.abs(lf.A).max())

    def eval(self, theta, k, tol=DEFAULT):
        self._check_k(k)
        return annihilator(self.of.eval(theta, self.ambient_dim - k, tol))

    def dual(self):
        return self.of

    def describe(self):
        return {"kind": self.kind, "of": self.of.describe()}


def _ann_vector(s: Subspace) -> np.ndarray:
    return annihilator(s).basis[:, 0]


class Restricted(FrenetCurve):
    """xi_{x0,D}: the curve y -> xi^{n-D+k}(y) meet xi^D(x0), in a frame of xi^D(x0)."""

    kind = "restricted"

    def __init__(self, of: FrenetCurve, x0: float, D: int):
        n = of.ambient_dim
        if not 1 < D < n:
            raise BadSpec("restriction dimension must satisfy 1 < D < n")
        self.of, self.x0, self.D = of, canon(x0), D
        self.ambient_dim = D
        self.frame = of.eval(self.x0, D).basis

    def eval(self, theta, k, tol=DEFAULT):
        self._check_k(k)
        n, D = self.of.ambient_dim, self.D
        if same_param(theta, self.x0, tol):
            s = self.of.eval(self.x0, k, tol)
        else:
            s, _ = meet([self.of.eval(theta, n - D + k, tol), self.of.eval(self.x0, D, tol)], tol)
        return Subspace(self.frame.T @ s.basis, D)

    @cached_property
    def _lift(self):
        base = self.of.lift
        if base is None or self.of.ambient_dim != 4:
            return None
        A, A1 = base.coeffs(0), base.coeffs(1)
        if self.D == 3:
            kap = _ann_vector(self.of.eval(self.x0, 3))
            raw = np.array([poly_mul(A[i], kap @ A1) - poly_mul(A1[i], kap @ A) for i in range(4)])
        else:
            K = self.of.covector_lift.A
            P, Q = self.of.eval(self.x0, 2).basis.T
            kq, kp = Q @ K, P @ K
            raw = np.outer(P, kq) - np.outer(Q, kp)
        lf = HomogLift(raw / np.abs(raw).max()).strip_root(self.x0).reduced()
        return HomogLift(self.frame.T @ lf.A)

    @property
    def lift(self):
        return self._lift

    def describe(self):
        return {"kind": self.kind, "of": self.of.describe(), "x0": self.x0, "D": self.D}


class Projected(FrenetCurve):
    """tau_yx: z -> (xi^l(x) + xi^j(z)) meet xi^k(y), k = n - l, in a frame of xi^k(y)."""

    kind = "projected"

    def __init__(self, of: FrenetCurve, y: float, x: float, l: int):
        n = of.ambient_dim
        if not 1 <= l <= n - 2:
            raise BadSpec("projection index l must satisfy 1 <= l <= n - 2")
        if same_param(x, y):
            raise BadSpec("projection needs x != y")
        self.of, self.y, self.x, self.l = of, canon(y), canon(x), l
        self.k = n - l
        self.ambient_dim = self.k
        self.frame = of.eval(self.y, self.k).basis

    def eval(self, theta, j, tol=DEFAULT):
        self._check_k(j)
        of, k, l = self.of, self.k, self.l
        target = of.eval(self.y, k, tol)
        if same_param(theta, self.x, tol):
            s, _ = meet([of.eval(self.x, l + j, tol), target], tol)
        elif same_param(theta, self.y, tol):
            s = of.eval(self.y, j, tol)
        else:
            sm, _ = span([of.eval(self.x, l, tol), of.eval(theta, j, tol)], tol)
            s, _ = meet([sm, target], tol)
        return Subspace(self.frame.T @ s.basis, k)

    @cached_property
    def _lift(self):
        base = self.of.lift
        if base is None or self.of.ambient_dim != 4:
            return None
        A = base.coeffs(0)
        if self.l == 1:
            kap = _ann_vector(self.of.eval(self.y, 3))
            lx = base(self.x)
            raw = np.outer(lx, kap @ A) - A * float(kap @ lx)
        else:
            lx, lx1 = base(self.x), base(self.x, 1)
            C = np.empty((4, 4))
            for i in range(4):
                for j in range(4):
                    C[i, j] = np.linalg.det(np.column_stack([np.eye(4)[i], lx, lx1, np.eye(4)[j]]))
            K = C @ A
            P, Q = self.of.eval(self.y, 2).basis.T
            raw = np.outer(P, Q @ K) - np.outer(Q, P @ K)
        lf = HomogLift(raw / np.abs(raw).max()).strip_root(self.x).reduced()
        return HomogLift(self.frame.T @ lf.A)

    @property
    def lift(self):
        return self._lift

    def describe(self):
        return {"kind": self.kind, "of": self.of.describe(), "y": self.y, "x": self.x, "l": self.l}


class Table(FrenetCurve):
    """Sampled flags; evaluation is only defined at the stored parameters."""

    kind = "table"

    def __init__(self, samples: Sequence[tuple[float, Flag]]):
        if not samples:
            raise BadSpec("empty table")
        self.samples = sorted(((canon(t), f) for t, f in samples), key=lambda p: p[0])
        self.ambient_dim = self.samples[0][1].v1.ambient_dim
        self._thetas = np.array([t for t, _ in self.samples])

    def _lookup(self, theta, tol):
        d = np.abs(self._thetas - canon(theta))
        d = np.minimum(d, TWO_PI - d)
        i = int(np.argmin(d))
        if d[i] > tol.circ:
            raise TableMiss(f"no table sample at theta={theta}")
        return self.samples[i][1]

    def eval(self, theta, k, tol=DEFAULT):
        self._check_k(k)
        return self._lookup(theta, tol).spaces[k - 1]

    @property
    def thetas(self) -> np.ndarray:
        return self._thetas.copy()

    def describe(self):
        return {"kind": self.kind, "n": len(self.samples)}


def veronese(theta: float) -> Flag:
    return Veronese().flag(theta)


def curve_eval(curve: FrenetCurve, theta: float, k: int, tol: Tolerances = DEFAULT) -> Subspace:
    return curve.eval(theta, k, tol)


def dual_curve(curve: FrenetCurve) -> FrenetCurve:
    return curve.dual()


def restrict_curve(curve: FrenetCurve, x0: float, D: int) -> FrenetCurve:
    return Restricted(curve, x0, D)


def project_curve(curve: FrenetCurve, y: float, x: float, l: int) -> FrenetCurve:
    return Projected(curve, y, x, l)


def flag_distance(f: Flag, g: Flag) -> float:
    return max(grassmann_distance(a, b) for a, b in zip(f.spaces, g.spaces))


# the irreducible PSL2 action

def _sym3(S: np.ndarray) -> np.ndarray:
    """R with monomials(S (c, s)) = R monomials(c, s) for cubic monomials."""
    cp = np.array([S[0, 0], S[0, 1]])
    sp = np.array([S[1, 0], S[1, 1]])
    R = np.zeros((4, 4))
    for i in range(4):
        p = np.array([1.0])
        for _ in range(3 - i):
            p = poly_mul(p, cp)
        for _ in range(i):
            p = poly_mul(p, sp)
        R[i] = p
    return R


@dataclass(frozen=True)
class GroupElement:
    m: np.ndarray
    rho: np.ndarray = field(repr=False)

    def act_theta(self, theta: float) -> float:
        (a, b), (c, d) = self.m
        ch, sh = half_angle(theta)
        return theta_of(c * sh + d * ch, a * sh + b * ch)

    def act(self, v) -> np.ndarray:
        return self.rho @ np.asarray(v, float)

    def inverse(self) -> "GroupElement":
        return sym3(np.linalg.inv(self.m))

    def compose(self, other: "GroupElement") -> "GroupElement":
        return sym3(self.m @ other.m)

    def power(self, n: int) -> "GroupElement":
        return sym3(np.linalg.matrix_power(self.m, n)) if n >= 0 else self.inverse().power(-n)

    @property
    def orientation_preserving(self) -> bool:
        return np.linalg.det(self.m) > 0

    def is_hyperbolic(self) -> bool:
        return self.orientation_preserving and abs(np.trace(self.m)) > 2.0 + 1e-12

    def fixed_points(self) -> tuple[float, float]:
        """(repelling, attracting) circle parameters of a hyperbolic element."""
        if not self.is_hyperbolic():
            raise ValueError("element is not hyperbolic")
        vals, vecs = np.linalg.eig(self.m)
        vals, vecs = vals.real, vecs.real
        order = np.argsort(np.abs(vals))
        rep, att = (theta_of(vecs[1, i], vecs[0, i]) for i in order)
        return rep, att


def sym3(m, tol: Tolerances = DEFAULT) -> GroupElement:
    """Image of m in PSL4 acting on binary cubic coefficients, equivariant for the Veronese."""
    m = np.asarray(m, dtype=float)
    det = np.linalg.det(m)
    if abs(det) <= tol.rank:
        raise Singular("matrix is singular")
    m = m / math.sqrt(abs(det))
    (a, b), (c, d) = m
    # t' = (a t + b) / (c t + d) on t = s / c moves (c, s) to (c t + d, a t + b) up to scale
    S = np.array([[d, c], [b, a]])
    R = _sym3(S)
    # det R = det(S)^6 = 1 after the normalization of m, so rho needs no rescaling
    rho = VERONESE_A @ R @ np.linalg.inv(VERONESE_A)
    return GroupElement(m, rho)


def hyperbolic_element(repel: float, attract: float, lam: float) -> GroupElement:
    """Element with the given fixed parameters and translation factor lam > 1."""
    def vec(th):
        c, s = half_angle(th)
        return np.array([s, c])

    P = np.column_stack([vec(attract), vec(repel)])
    return sym3(P @ np.diag([lam, 1.0 / lam]) @ np.linalg.inv(P))


# Frenet axiom checkers

def _spec_items(spec):
    out = []
    for item in spec:
        th, k = item
        out.append((float(th), int(k)))
    return out


def _validate_order(ys: list[float], xs: list[float]):
    """The meet points must sit in one gap of the sum points, in increasing order."""
    if not xs or not ys:
        if len(xs) > 1:
            start = xs[0]
            offs = [ccw(start, x) for x in xs]
            if offs != sorted(offs):
                raise BadSpec("meet points are not positively ordered")
        return
    start = xs[0]
    offs = [ccw(start, x) for x in xs]
    if offs != sorted(offs):
        raise BadSpec("meet points are not positively ordered")
    span_end = offs[-1]
    for y in ys:
        if ccw(start, y) < span_end:
            raise BadSpec("order hypothesis violated: a sum point lies between meet points")


def check_general_position(curve: FrenetCurve, spec, meets=None, tol: Tolerances = DEFAULT) -> float:
    """Directness margin of sum_i xi^{k_i}(theta_i) (+ the meet of xi^{n - m_j}(x_j)).

    ``spec`` lists (theta, k) summands; ``meets`` optionally lists (theta, m) pairs for
    the improved form, whose order hypothesis is validated first.
    """
    n = curve.ambient_dim
    sums = _spec_items(spec)
    mts = _spec_items(meets or [])
    pts = [t for t, _ in sums] + [t for t, _ in mts]
    for (i, a), (j, b) in itertools.combinations(enumerate(pts), 2):
        if circ_dist(a, b) <= tol.circ:
            raise BadSpec("points are not distinct")
    if any(not 1 <= k <= n - 1 for _, k in sums + mts):
        raise BadSpec("flag index out of range")
    ptot = sum(k for _, k in sums)
    if not mts:
        if ptot > n or not sums:
            raise BadSpec("index sum exceeds the ambient dimension")
        _, margin = span([curve.eval(t, k, tol) for t, k in sums], tol)
        return margin
    mtot = sum(m for _, m in mts)
    if ptot != mtot or mtot > n:
        raise BadSpec("improved spec needs sum of p_i = sum of m_i <= n")
    _validate_order([t for t, _ in sums], [t for t, _ in mts])
    inter, m1 = meet([curve.eval(t, n - m, tol) for t, m in mts], tol)
    if inter.dim != n - mtot:
        return 0.0
    if not sums:
        return m1
    _, m2 = span([curve.eval(t, k, tol) for t, k in sums] + [inter], tol)
    return min(m1, m2)


def index_compositions(n: int) -> list[tuple[int, ...]]:
    """Ordered tuples of flag indices in 1..n-1 summing to n."""
    out = []

    def rec(rest, acc):
        if rest == 0:
            out.append(tuple(acc))
            return
        for k in range(1, min(rest, n - 1) + 1):
            rec(rest - k, acc + [k])

    rec(n, [])
    return out


def random_gp_spec(rng: np.random.Generator, n: int, sep: float = 1e-3):
    comps = index_compositions(n)
    ks = comps[int(rng.integers(len(comps)))]
    pts = random_distinct(rng, len(ks), sep)
    return [(float(t), k) for t, k in zip(pts, ks)]


# limit compatibility, evaluated in extended precision when a lift is available

MP_DPS = 60


def _mp_orthonormal(vectors: list) -> list:
    basis = []
    for v in vectors:
        w = v.copy()
        for _ in range(2):
            for b in basis:
                w -= (b.T * w)[0] * b
        nrm = mpmath.norm(w)
        if nrm == 0:
            raise ProjLinError("dependent vectors in extended-precision span")
        basis.append(w / nrm)
    return basis


def _mp_complement(basis: list, n: int) -> list:
    out = []
    for i in range(n):
        e = mpmath.matrix([1 if j == i else 0 for j in range(n)])
        w = e.copy()
        for _ in range(2):
            for b in basis + out:
                w -= (b.T * w)[0] * b
        nrm = mpmath.norm(w)
        if nrm > mpmath.mpf(10) ** (-MP_DPS // 3):
            out.append(w / nrm)
        if len(out) + len(basis) == n:
            break
    return out


def _mp_distance(S: list, T: list) -> float:
    n = S[0].rows
    R = np.zeros((n, len(S)))
    for j, s in enumerate(S):
        r = s.copy()
        for t in T:
            r -= (t.T * s)[0] * t
        R[:, j] = [float(r[i]) for i in range(n)]
    sv = np.linalg.svd(R, compute_uv=False)
    return float(np.arcsin(min(1.0, sv[0])))


def _mp_space(curve, theta, k, dual: bool):
    lf = curve.covector_lift if dual else curve.lift
    return lf.mp_frame(theta, k)


@dataclass
class LimitReport:
    scales: list
    distances: list
    monotone: bool
    passed: bool

    def as_dict(self) -> dict:
        return {"scales": self.scales, "distances": self.distances,
                "monotone": self.monotone, "passed": self.passed}


def check_limit_compatibility(curve: FrenetCurve, x: float, spec, scales,
                              meets=None, tol: Tolerances = DEFAULT) -> LimitReport:
    """Distances from the merged sum (or improved sum/meet) to the predicted flag member.

    ``spec`` lists (multiplier, k): the point x + multiplier * s carries xi^k. ``meets``
    lists (multiplier, m) pairs contributing xi^{n - m}; the combined tuple must be
    positively ordered with the meet points contiguous.
    """
    n = curve.ambient_dim
    sums = _spec_items(spec)
    mts = _spec_items(meets or [])
    mults = [u for u, _ in sums] + [u for u, _ in mts]
    if len(set(mults)) != len(mults):
        raise BadSpec("offsets do not define distinct points")
    if any(not 1 <= k <= n - 1 for _, k in sums + mts):
        raise BadSpec("flag index out of range")
    p = sum(k for _, k in sums)
    m = sum(k for _, k in mts)
    if mts:
        if not p <= m <= n:
            raise BadSpec("improved spec needs sum p_i <= sum m_i <= n")
        xs = sorted(u for u, _ in mts)
        if any(xs[0] < u < xs[-1] for u, _ in sums) or [u for u, _ in mts] != xs:
            raise BadSpec("order hypothesis violated")
        target_dim = n - m + p
    else:
        if p > n or not sums:
            raise BadSpec("index sum exceeds the ambient dimension")
        target_dim = p
    scales = [float(s) for s in scales]
    if any(b >= a for a, b in zip(scales, scales[1:])):
        raise BadSpec("scales must decrease")
    if target_dim >= n:
        return LimitReport(scales, [0.0] * len(scales), True, True)

    dists = []
    if curve.lift is not None:
        with mpmath.workdps(MP_DPS):
            X = mpmath.mpf(x)
            T = _mp_orthonormal(curve.lift.mp_frame(X, target_dim))
            for s in scales:
                S_ = mpmath.mpf(s)
                vecs = []
                for u, k in sums:
                    vecs += curve.lift.mp_frame(X + u * S_, k)
                if mts:
                    dual_vecs = []
                    for u, k in mts:
                        dual_vecs += curve.covector_lift.mp_frame(X + u * S_, k)
                    vecs += _mp_complement(_mp_orthonormal(dual_vecs), n)
                Sb = _mp_orthonormal(vecs)
                if len(Sb) != target_dim:
                    raise BadSpec("limit spec produced a subspace of the wrong dimension")
                dists.append(_mp_distance(Sb, T))
    else:
        target = curve.eval(x, target_dim, tol)
        for s in scales:
            parts = [curve.eval(x + u * s, k, tol) for u, k in sums]
            if mts:
                inter, _ = meet([curve.eval(x + u * s, n - k, tol) for u, k in mts], tol)
                parts.append(inter)
            S, _ = span(parts, tol)
            dists.append(grassmann_distance(S, target) if S.dim == target_dim else float("inf"))
    monotone = all(b < a for a, b in zip(dists, dists[1:]))
    return LimitReport(scales, dists, monotone, monotone and dists[-1] < tol.lim)
