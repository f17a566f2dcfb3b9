"""Hot loops: sign-change scans of binary cubic forms on the circle.

A cubic form w is evaluated at theta as
    h(theta) = w0 c^3 + w1 c^2 s + w2 c s^2 + w3 s^3,  c = cos(theta/2), s = sin(theta/2),
so h(theta + 2 pi) = -h(theta) and each projective root shows up once in [0, 2 pi).

Each kernel exists twice: a numba version and a vectorized numpy twin. ``scan_cubic``
picks one according to ``DOMDISC_NO_NUMBA``; both are importable for the benchmark.
"""
from __future__ import annotations

import numpy as np

from ._accel import HAS_NUMBA, njit

TWO_PI = 2.0 * np.pi
MAX_EVENTS = 8
BISECT_STEPS = 56


def deriv_coeffs(w: np.ndarray) -> np.ndarray:
    """Coefficients of d/dtheta of the cubic form(s) ``w`` (last axis has length 4)."""
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    out[..., 0] = 0.5 * w[..., 1]
    out[..., 1] = -1.5 * w[..., 0] + w[..., 2]
    out[..., 2] = -w[..., 1] + 1.5 * w[..., 3]
    out[..., 3] = -0.5 * w[..., 2]
    return out


def grid_monomials(n: int) -> np.ndarray:
    th = np.linspace(0.0, TWO_PI, n + 1)
    c, s = np.cos(0.5 * th), np.sin(0.5 * th)
    M = np.stack([c**3, c * c * s, c * s * s, s**3], axis=1)
    # exact antiperiodic closure, so a root sitting on theta = 0 is caught in the last cell
    M[n] = -M[0]
    return M


def eval_cubic(w, theta):
    """Vectorized evaluation; ``w`` (..., 4) broadcasts against ``theta``."""
    w = np.asarray(w, dtype=float)
    c, s = np.cos(0.5 * theta), np.sin(0.5 * theta)
    return ((w[..., 0] * c + w[..., 1] * s) * c + w[..., 2] * s * s) * c + w[..., 3] * s**3


# numba path

@njit(cache=True)
def _h1(w0, w1, w2, w3, th):
    c = np.cos(0.5 * th)
    s = np.sin(0.5 * th)
    return ((w0 * c + w1 * s) * c + w2 * s * s) * c + w3 * s * s * s


@njit(cache=True)
def _bisect1(w0, w1, w2, w3, lo, hi, flo):
    for _ in range(BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = _h1(w0, w1, w2, w3, mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo = mid
            flo = fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@njit(cache=True)
def _scan_numba(W, M, roots, crits, cvals, hmax):
    n = M.shape[0] - 1
    step = TWO_PI / n
    hv = np.empty(n + 1)
    gv = np.empty(n + 1)
    ccell = np.empty(MAX_EVENTS, dtype=np.int64)
    for p in range(W.shape[0]):
        w0, w1, w2, w3 = W[p, 0], W[p, 1], W[p, 2], W[p, 3]
        d0, d1, d2, d3 = 0.5 * w1, -1.5 * w0 + w2, -w1 + 1.5 * w3, -0.5 * w2
        top = 0.0
        for i in range(n + 1):
            hv[i] = w0 * M[i, 0] + w1 * M[i, 1] + w2 * M[i, 2] + w3 * M[i, 3]
            gv[i] = d0 * M[i, 0] + d1 * M[i, 1] + d2 * M[i, 2] + d3 * M[i, 3]
            if abs(hv[i]) > top:
                top = abs(hv[i])
        hmax[p] = top
        nc = 0
        for i in range(n):
            if nc >= MAX_EVENTS:
                break
            t0 = i * step
            if gv[i] == 0.0:
                c = t0
            elif gv[i] * gv[i + 1] < 0.0:
                c = _bisect1(d0, d1, d2, d3, t0, t0 + step, gv[i])
            else:
                continue
            crits[p, nc] = c
            cvals[p, nc] = _h1(w0, w1, w2, w3, c)
            ccell[nc] = i
            nc += 1
        nr = 0
        for i in range(n):
            if nr >= MAX_EVENTS:
                break
            t0 = i * step
            if hv[i] == 0.0:
                prev = hv[i - 1] if i > 0 else -hv[n - 1]
                if prev * hv[i + 1] < 0.0:
                    roots[p, nr] = t0
                    nr += 1
            elif hv[i] * hv[i + 1] < 0.0:
                roots[p, nr] = _bisect1(w0, w1, w2, w3, t0, t0 + step, hv[i])
                nr += 1
        # two roots hidden inside one cell around a critical point
        for j in range(nc):
            i = ccell[j]
            a, b, v = hv[i], hv[i + 1], cvals[p, j]
            c = crits[p, j]
            t0 = i * step
            if c <= t0 or a * b <= 0.0 or v * a >= 0.0 or nr + 2 > MAX_EVENTS:
                continue
            roots[p, nr] = _bisect1(w0, w1, w2, w3, t0, c, a)
            roots[p, nr + 1] = _bisect1(w0, w1, w2, w3, c, t0 + step, v)
            nr += 2


def _scan_with_numba(W: np.ndarray, n: int):
    W = np.ascontiguousarray(W, dtype=float)
    N = W.shape[0]
    roots = np.full((N, MAX_EVENTS), np.nan)
    crits = np.full((N, MAX_EVENTS), np.nan)
    cvals = np.full((N, MAX_EVENTS), np.nan)
    hmax = np.zeros(N)
    _scan_numba(W, grid_monomials(n), roots, crits, cvals, hmax)
    return roots, crits, cvals, hmax


# numpy path

def _bisect_vec(w, lo, hi, flo):
    lo, hi, flo = lo.copy(), hi.copy(), flo.copy()
    for _ in range(BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        fm = eval_cubic(w, mid)
        same = (fm < 0.0) == (flo < 0.0)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def _pack(N, pts, vals, *extra):
    """Scatter per-point event lists into padded (N, MAX_EVENTS) arrays."""
    outs = [np.full((N, MAX_EVENTS), np.nan) for _ in range(1 + len(extra))]
    if pts.size == 0:
        return outs
    order = np.lexsort((np.arange(pts.size), pts))
    pts = pts[order]
    first = np.searchsorted(pts, pts, side="left")
    slot = np.arange(pts.size) - first
    keep = slot < MAX_EVENTS
    for out, v in zip(outs, (vals, *extra)):
        out[pts[keep], slot[keep]] = v[order][keep]
    return outs


def _scan_with_numpy(W: np.ndarray, n: int, chunk: int = 256):
    W = np.asarray(W, dtype=float)
    N = W.shape[0]
    M = grid_monomials(n)
    step = TWO_PI / n
    roots = np.full((N, MAX_EVENTS), np.nan)
    crits = np.full((N, MAX_EVENTS), np.nan)
    cvals = np.full((N, MAX_EVENTS), np.nan)
    hmax = np.zeros(N)
    for start in range(0, N, chunk):
        w = W[start:start + chunk]
        wd = deriv_coeffs(w)
        H = w @ M.T
        G = wd @ M.T
        hmax[start:start + len(w)] = np.abs(H).max(axis=1)

        # critical points
        node = G[:, :-1] == 0.0
        change = G[:, :-1] * G[:, 1:] < 0.0
        p_n, i_n = np.nonzero(node)
        p_c, i_c = np.nonzero(change)
        c_change = _bisect_vec(wd[p_c], i_c * step, (i_c + 1) * step, G[p_c, i_c])
        cp = np.concatenate([p_n, p_c])
        ci = np.concatenate([i_n, i_c])
        cc = np.concatenate([i_n * step, c_change])
        order = np.lexsort((ci, cp))
        cp, ci, cc = cp[order], ci[order], cc[order]
        cv = eval_cubic(w[cp], cc)
        c_arr, v_arr, cell_arr = _pack(len(w), cp, cc, cv, ci.astype(float))

        # roots
        prev = np.concatenate([-H[:, n - 1:n], H[:, :n - 1]], axis=1)
        zero = (H[:, :-1] == 0.0) & (prev * H[:, 1:] < 0.0)
        sc = H[:, :-1] * H[:, 1:] < 0.0
        p_z, i_z = np.nonzero(zero)
        p_s, i_s = np.nonzero(sc)
        r_s = _bisect_vec(w[p_s], i_s * step, (i_s + 1) * step, H[p_s, i_s])

        # hidden pairs
        a = H[cp, ci]
        b = H[cp, ci + 1]
        t0 = ci * step
        hid = (cc > t0) & (a * b > 0.0) & (cv * a < 0.0)
        hp, hi_, hc, ha, hv_ = cp[hid], ci[hid], cc[hid], a[hid], cv[hid]
        r_h1 = _bisect_vec(w[hp], hi_ * step, hc, ha)
        r_h2 = _bisect_vec(w[hp], hc, (hi_ + 1) * step, hv_)

        rp = np.concatenate([p_z, p_s, hp, hp])
        rk = np.concatenate([i_z, i_s, hi_, hi_]).astype(float)
        rv = np.concatenate([i_z * step, r_s, r_h1, r_h2])
        # same ordering as the numba loop: cell scan first, hidden pairs last
        tier = np.concatenate([np.zeros(p_z.size + p_s.size), np.ones(2 * hp.size)])
        order = np.lexsort((np.arange(rp.size), rk, tier, rp))
        (r_arr,) = _pack(len(w), rp[order], rv[order])

        sl = slice(start, start + len(w))
        roots[sl], crits[sl], cvals[sl] = r_arr, c_arr, v_arr
    return roots, crits, cvals, hmax


def scan_cubic(W, n: int = 2048, backend: str | None = None):
    """Roots and critical points of many cubic forms over theta in [0, 2 pi).

    Returns ``(roots, crits, crit_values, hmax)``; the first three are NaN-padded
    arrays of shape (N, MAX_EVENTS), ``hmax`` is the grid maximum of |h|.
    """
    W = np.atleast_2d(np.asarray(W, dtype=float))
    if backend is None:
        backend = "numba" if HAS_NUMBA else "numpy"
    if backend == "numba":
        return _scan_with_numba(W, n)
    return _scan_with_numpy(W, n)


@njit(cache=True)
def _disc_numba(W, out):
    for i in range(W.shape[0]):
        a, b, c, d = W[i, 0], W[i, 1], W[i, 2], W[i, 3]
        out[i] = b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d + 18 * a * b * c * d


def discriminant(W, backend: str | None = None) -> np.ndarray:
    """Discriminant of aX^3 + bX^2Y + cXY^2 + dY^3 for each row (a, b, c, d)."""
    W = np.atleast_2d(np.asarray(W, dtype=float))
    if backend is None:
        backend = "numba" if HAS_NUMBA else "numpy"
    if backend == "numba":
        out = np.empty(W.shape[0])
        _disc_numba(np.ascontiguousarray(W), out)
        return out
    a, b, c, d = W.T
    return b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d + 18 * a * b * c * d
