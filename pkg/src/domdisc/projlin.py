"""Rank-aware projective linear algebra on R^n (n = 4 unless stated).

Subspaces carry orthonormal column frames. Every sum or intersection reports a
relative singular-value margin so callers can tell a certified direct sum from
a degenerate one instead of trusting a silently truncated rank.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from ._config import DEFAULT, Tolerances


class ProjLinError(ValueError):
    pass


class ZeroVector(ProjLinError):
    pass


class DimMismatch(ProjLinError):
    pass


class NotGeneralPosition(ProjLinError):
    pass


class AtInfinity(ProjLinError):
    pass


def _canon_sign(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > tol)
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


class ProjPoint:
    """A point of RP^{n-1} stored as a unit vector with canonical sign."""

    __slots__ = ("v",)

    def __init__(self, v):
        self.v = np.asarray(v, dtype=float)

    @property
    def ambient_dim(self) -> int:
        return self.v.shape[0]

    def same(self, other: "ProjPoint", tol: Tolerances = DEFAULT) -> bool:
        return abs(float(self.v @ other.v)) >= 1.0 - tol.pt

    def distance(self, other: "ProjPoint") -> float:
        """Angle between the two lines, in radians."""
        c = min(1.0, abs(float(self.v @ other.v)))
        s = np.linalg.norm(self.v - np.sign(self.v @ other.v or 1.0) * other.v)
        # chordal form stays accurate for tiny angles
        return float(2.0 * np.arcsin(min(1.0, s / 2.0))) if c > 0.5 else float(np.arccos(c))

    def as_subspace(self) -> "Subspace":
        return Subspace(self.v[:, None])

    def __repr__(self):
        return f"ProjPoint({np.array2string(self.v, precision=6)})"


def normalize(v) -> ProjPoint:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if not np.isfinite(n) or n <= 1e-300:
        raise ZeroVector("cannot normalize a zero vector")
    return ProjPoint(_canon_sign(v / n))


class Subspace:
    """Linear subspace of R^n given by an orthonormal frame (n x dim)."""

    __slots__ = ("basis", "ambient_dim")

    def __init__(self, basis, ambient_dim: int | None = None, orthonormal: bool = False):
        b = np.asarray(basis, dtype=float)
        if b.ndim == 1:
            b = b[:, None]
        n = b.shape[0] if ambient_dim is None else ambient_dim
        if b.shape[1] and not orthonormal:
            b, _ = np.linalg.qr(b)
        self.basis = b.reshape(n, -1)
        self.ambient_dim = n

    @classmethod
    def zero(cls, n: int = 4) -> "Subspace":
        return cls(np.zeros((n, 0)), n, orthonormal=True)

    @classmethod
    def whole(cls, n: int = 4) -> "Subspace":
        return cls(np.eye(n), n, orthonormal=True)

    @classmethod
    def from_vectors(cls, *vectors) -> "Subspace":
        return cls(np.column_stack(vectors))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def residual(self, v) -> float:
        """Relative distance of a vector (or frame) from the subspace."""
        v = np.asarray(v, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        v = v / np.linalg.norm(v, axis=0)
        r = v - self.basis @ (self.basis.T @ v)
        return float(np.max(np.linalg.norm(r, axis=0)))

    def contains(self, other, tol: Tolerances = DEFAULT) -> bool:
        b = other.basis if isinstance(other, Subspace) else (
            other.v if isinstance(other, ProjPoint) else other)
        return self.residual(b) < tol.sub

    def equals(self, other: "Subspace", tol: Tolerances = DEFAULT) -> bool:
        if self.dim != other.dim:
            return False
        return float(np.linalg.norm(self.projector() - other.projector())) < tol.sub

    def point(self) -> ProjPoint:
        if self.dim != 1:
            raise DimMismatch(f"expected a 1-dimensional subspace, got {self.dim}")
        return normalize(self.basis[:, 0])

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _as_frame(part) -> np.ndarray:
    if isinstance(part, Subspace):
        return part.basis
    if isinstance(part, ProjPoint):
        return part.v[:, None]
    a = np.asarray(part, dtype=float)
    return a[:, None] if a.ndim == 1 else a


def _stack(parts) -> np.ndarray:
    frames = [_as_frame(p) for p in parts]
    if not frames:
        raise ValueError("empty list of subspaces")
    return np.concatenate(frames, axis=1)


def _margin(sv: np.ndarray, cols: int) -> float:
    if cols == 0 or sv.size == 0 or sv[0] == 0.0:
        return 0.0
    if cols > sv.size:
        return 0.0
    return float(sv[cols - 1] / sv[0])


def span(parts: Sequence, tol: Tolerances = DEFAULT) -> tuple[Subspace, float]:
    """Sum of subspaces with its directness margin sigma_min / sigma_max."""
    m = _stack(parts)
    n, cols = m.shape
    if cols == 0:
        return Subspace.zero(n), 1.0
    # unit columns so that point inputs given as raw vectors weigh evenly
    norms = np.linalg.norm(m, axis=0)
    m = m[:, norms > 0] / norms[norms > 0]
    u, sv, _ = np.linalg.svd(m, full_matrices=False)
    margin = _margin(sv, m.shape[1])
    rank = int(np.sum(sv > tol.rank * sv[0])) if sv.size else 0
    return Subspace(u[:, :rank], n, orthonormal=True), margin


def annihilator(s: Subspace) -> Subspace:
    """Covectors vanishing on ``s``, as a subspace of the dual (same coordinates)."""
    n, k = s.ambient_dim, s.dim
    if k == 0:
        return Subspace.whole(n)
    if k == n:
        return Subspace.zero(n)
    q, _ = np.linalg.qr(s.basis, mode="complete")
    return Subspace(q[:, k:], n, orthonormal=True)


def meet(parts: Sequence, tol: Tolerances = DEFAULT,
         expect: int | None = None) -> tuple[Subspace, float]:
    """Intersection computed as the annihilator of the sum of annihilators.

    A zero-dimensional result is returned as ``Subspace.zero`` rather than raised.
    The margin is the directness margin of the dual sum. When ``expect`` gives the
    anticipated dimension of a non-transverse meet (two coplanar lines, say), the
    margin is instead the rank gap sigma_r / sigma_1 at the matching dual rank r,
    and 0 if the actual intersection is smaller.
    """
    subs = [p if isinstance(p, Subspace) else Subspace(_as_frame(p)) for p in parts]
    if not subs:
        raise ValueError("empty list of subspaces")
    n = subs[0].ambient_dim
    dual = [annihilator(s) for s in subs]
    dual = [d for d in dual if d.dim]
    if not dual:
        return Subspace.whole(n), 1.0
    total, margin = span(dual, tol)
    if expect is not None:
        r = n - expect
        sv = np.linalg.svd(_stack(dual), compute_uv=False)
        if r == 0:
            margin = 1.0 if sv[0] <= tol.rank else 0.0
        elif r > sv.size or (r < sv.size and sv[r] > tol.rank * sv[0]):
            margin = 0.0
        else:
            margin = float(sv[r - 1] / sv[0])
            if total.dim != r:
                u, _, _ = np.linalg.svd(_stack(dual), full_matrices=False)
                total = Subspace(u[:, :r], n, orthonormal=True)
    return annihilator(total), margin


def line_meet_plane(line: np.ndarray, covector: np.ndarray) -> np.ndarray:
    """Point of a 2-frame's span killed by ``covector`` (unnormalized)."""
    a = covector @ line
    return line[:, 0] * a[1] - line[:, 1] * a[0]


def grassmann_distance(s: Subspace, t: Subspace) -> float:
    """Largest principal angle between equal-dimensional subspaces."""
    if s.dim != t.dim:
        raise DimMismatch(f"dimensions differ: {s.dim} vs {t.dim}")
    if s.dim == 0:
        return 0.0
    r = s.basis - t.basis @ (t.basis.T @ s.basis)
    sv = np.linalg.svd(r, compute_uv=False)
    return float(np.arcsin(min(1.0, sv[0])))


def gp_decompose(x: Subspace, y: Subspace, ws: Sequence[Subspace],
                 tol: Tolerances = DEFAULT) -> list[Subspace]:
    """Split Y into the pieces (X + W_i) meet Y.

    Requires V = X (+) Y = X (+) W_1 (+) ... (+) W_k as certified direct sums.
    """
    n = x.ambient_dim
    _, m1 = span([x, y], tol)
    _, m2 = span([x, *ws], tol)
    if x.dim + y.dim != n or m1 <= tol.rank:
        raise NotGeneralPosition(f"V != X (+) Y (margin {m1:.3g})")
    if x.dim + sum(w.dim for w in ws) != n or m2 <= tol.rank:
        raise NotGeneralPosition(f"V != X (+) W_1 (+) ... (margin {m2:.3g})")
    return [meet([span([x, w], tol)[0], y], tol)[0] for w in ws]


class Chart:
    """Affine chart: a covector (plane at infinity) plus a frame of its kernel."""

    __slots__ = ("covector", "frame", "origin", "_inv")

    def __init__(self, covector, frame=None):
        k = np.asarray(covector, dtype=float)
        k = k / np.linalg.norm(k)
        origin = k.copy()  # k . origin == 1
        if frame is None:
            q, _ = np.linalg.qr(np.column_stack([k, np.eye(k.size)]), mode="complete")
            frame = q[:, 1:k.size]
        f = np.asarray(frame, dtype=float)
        if f.shape[0] != k.size:
            f = f.T
        f = f - np.outer(origin, k @ f)
        sv = np.linalg.svd(f, compute_uv=False)
        if sv[-1] <= 1e-9:
            raise ProjLinError("chart frame is degenerate")
        self.covector = k
        self.frame = f
        self.origin = origin
        self._inv = np.linalg.inv(np.column_stack([origin, f]))

    @classmethod
    def default(cls) -> "Chart":
        return cls([1.0, 0.0, 0.0, 0.0], np.eye(4)[:, 1:])

    def coords(self, v) -> np.ndarray:
        """Batch-friendly affine coordinates; rows of ``v`` are points."""
        v = np.asarray(v, dtype=float)
        c = v @ self._inv.T
        return c[..., 1:] / c[..., :1]

    def lift(self, xyz) -> np.ndarray:
        xyz = np.asarray(xyz, dtype=float)
        return self.origin + xyz @ self.frame.T


def affine_coords(p, chart: Chart | None = None, tol: Tolerances = DEFAULT) -> np.ndarray:
    chart = chart or Chart.default()
    v = p.v if isinstance(p, ProjPoint) else np.asarray(p, dtype=float)
    v = v / np.linalg.norm(v)
    if abs(float(chart.covector @ v)) <= tol.inf:
        raise AtInfinity("point lies on the chart's plane at infinity")
    return chart.coords(v)


def random_subspace(rng: np.random.Generator, k: int, n: int = 4) -> Subspace:
    return Subspace(rng.standard_normal((n, k)))


def iter_points(parts: Iterable) -> list[ProjPoint]:
    return [p if isinstance(p, ProjPoint) else normalize(p) for p in parts]
