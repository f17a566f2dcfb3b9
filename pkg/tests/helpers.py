"""Independent oracles shared by the tests: binary cubics as plain polynomials."""
import math

import mpmath
import numpy as np


def linear_form(theta):
    """(c X - s Y) as coefficients of (X, Y)."""
    return np.array([math.cos(theta / 2), -math.sin(theta / 2)])


def binary_mul(p, q):
    """Product of binary forms given by coefficients in descending powers of X."""
    return np.convolve(p, q)


def osculating(theta, k):
    """Cubics divisible by (cX - sY)^(4 - k): the k-dimensional flag member, as columns."""
    lf = linear_form(theta)
    base = np.array([1.0])
    for _ in range(4 - k):
        base = binary_mul(base, lf)
    cols = []
    for j in range(k):  # multiply by X^(k-1-j) Y^j
        mono = np.zeros(k)
        mono[j] = 1.0
        cols.append(binary_mul(base, mono) if k > 1 else base)
    return np.column_stack(cols)


def root_discriminant(a, b, c, d):
    """Discriminant from the roots, a^4 prod (ri - rj)^2, in extended precision."""
    with mpmath.workdps(50):
        r = mpmath.polyroots([a, b, c, d], maxsteps=200, extraprec=200)
        out = mpmath.mpf(a) ** 4
        for i in range(3):
            for j in range(i + 1, 3):
                out *= (r[i] - r[j]) ** 2
        return float(mpmath.re(out))


def real_root_thetas(w, imag_tol=1e-7):
    """Thetas of the real projective roots of a t^3 + b t^2 + c t + d, t = tan(theta / 2)."""
    a, b, c, d = (float(u) for u in w)
    out = []
    if abs(a) < 1e-14:
        out.append(math.pi)  # root at infinity
        coeffs = [b, c, d]
        while coeffs and abs(coeffs[0]) < 1e-14:
            coeffs.pop(0)
            out.append(math.pi)
    else:
        coeffs = [a, b, c, d]
    if len(coeffs) > 1:
        with mpmath.workdps(40):
            for r in mpmath.polyroots(coeffs, maxsteps=200, extraprec=100):
                if abs(mpmath.im(r)) < imag_tol:
                    out.append((2 * math.atan(float(mpmath.re(r)))) % (2 * math.pi))
    return sorted(out)


def subspace_dist(A, B):
    """Sine of the largest principal angle, as the spectral norm of the projector difference."""
    qa, _ = np.linalg.qr(A)
    qb, _ = np.linalg.qr(B)
    return float(np.linalg.norm(qa @ qa.T - qb @ qb.T, 2))


def circ(a, b):
    d = abs(a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d)
