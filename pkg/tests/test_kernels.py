import math
import os
import subprocess
import sys

import numpy as np
import pytest

from domdisc._accel import HAS_NUMBA
from domdisc.kernels import deriv_coeffs, discriminant, eval_cubic, scan_cubic

from helpers import real_root_thetas, root_discriminant

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba disabled")


def test_discriminant_against_roots(rng):
    for w in rng.standard_normal((30, 4)):
        want = root_discriminant(*w)
        assert discriminant(w)[0] == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_discriminant_examples():
    # t^3 - t has three real roots, t^3 + t one
    assert discriminant([1, 0, -1, 0])[0] == pytest.approx(4.0)
    assert discriminant([1, 0, 1, 0])[0] == pytest.approx(-4.0)
    assert discriminant([1, -3, 3, -1])[0] == 0.0


def test_derivative_coefficients(rng):
    w = rng.standard_normal(4)
    th = np.linspace(0.1, 6.0, 7)
    h = 1e-6
    fd = (eval_cubic(w, th + h) - eval_cubic(w, th - h)) / (2 * h)
    assert np.allclose(eval_cubic(deriv_coeffs(w), th), fd, atol=1e-8)


def test_scan_roots_against_polynomial_roots(rng):
    W = rng.standard_normal((200, 4))
    roots, _, _, _ = scan_cubic(W, 2048, backend="numpy")
    for w, r in zip(W, roots):
        got = np.sort(r[np.isfinite(r)])
        # h vanishes where w3 u^3 + w2 u^2 + w1 u + w0 does, u = tan(theta / 2)
        want = real_root_thetas(w[::-1])
        if abs(discriminant(w)[0]) < 1e-6:
            continue
        assert len(got) == len(want)
        assert np.allclose(got, want, atol=1e-9)


def test_scan_catches_root_at_zero():
    roots, _, _, _ = scan_cubic([[0.0, 1.0, 2.0, 3.0]], 64, backend="numpy")
    r = roots[0][np.isfinite(roots[0])]
    assert min(min(abs(t), abs(t - 2 * math.pi)) for t in r) < 1e-12


@needs_numba
def test_backends_agree(rng):
    W = rng.standard_normal((500, 4))
    a = scan_cubic(W, 1024, backend="numpy")
    b = scan_cubic(W, 1024, backend="numba")
    for x, y in zip(a, b):
        assert np.array_equal(np.isnan(x), np.isnan(y))
        assert np.allclose(np.nan_to_num(x), np.nan_to_num(y), atol=1e-12)
    assert np.allclose(discriminant(W, "numpy"), discriminant(W, "numba"), rtol=1e-12, atol=1e-13)


def test_env_flag_selects_numpy():
    code = ("from domdisc._accel import HAS_NUMBA; from domdisc import Veronese, classify_point;"
            "print(HAS_NUMBA, classify_point(Veronese(), [0, 1, -1, 0]).tag)")
    env = dict(os.environ, DOMDISC_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "Interior2"]
