"""Selects numba-compiled kernels or their pure numpy twins.

Set ``DOMDISC_NO_NUMBA=1`` to force the numpy path.
"""
import os

DISABLED = os.environ.get("DOMDISC_NO_NUMBA", "0") not in ("", "0", "false", "False")

try:
    if DISABLED:
        raise ImportError
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised with the env flag
    HAS_NUMBA = False
    _njit = None


def njit(*args, **kwargs):
    """``numba.njit`` when enabled, otherwise the identity decorator."""
    if HAS_NUMBA:
        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f
