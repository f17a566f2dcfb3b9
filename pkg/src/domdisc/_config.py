"""Numerical tolerances shared by every operation."""
from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    rank: float = 1e-9  # relative singular value cutoff
    sub: float = 1e-8  # projector Frobenius distance for subspace equality
    pt: float = 1e-12  # 1 - |<p, q>| for point equality
    inf: float = 1e-12  # chart pairing below this is at infinity
    circ: float = 1e-8  # distinct circle parameters
    bnd: float = 1e-9  # tangency band of the incidence function
    gp: float = 1e-6  # general position margin
    lim: float = 1e-6  # final limit compatibility distance
    end: float = 1e-5  # leaf endpoint extrapolation
    tan: float = 1e-3  # one-sided tangent agreement (rad)
    sup: float = 1e-9  # one-sidedness of supporting planes

    def with_overrides(self, **kw) -> "Tolerances":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw)


DEFAULT = Tolerances()
