"""Domains of discontinuity of hyperconvex Frenet curves in RP^3.

The Veronese curve and its projective images, the four developing maps, point and plane
classification, leaf families, the geometry of the boundary surface and the dynamics of
hyperbolic elements on leaves.
"""
from ._config import DEFAULT, Tolerances
from .boundary import (
    IntersectionPattern,
    PlanarCurve,
    SingularKind,
    convexity_margin,
    cusp_classify,
    front_view,
    intersection_pattern,
    support_disagreement,
    supporting_plane,
    top_view,
)
from .domains import (
    Leaf,
    PlaneClass,
    PointClass,
    boundary_point,
    classify_plane,
    classify_point,
    ctaf_preimages,
    dev,
    fuchsian_oracle,
    incidence_params,
    leaf,
    leaves_through_point,
    secant_params,
)
from .frenet import (
    Flag,
    FrenetCurve,
    GroupElement,
    Table,
    Transformed,
    Veronese,
    check_general_position,
    check_limit_compatibility,
    curve_eval,
    dual_curve,
    project_curve,
    restrict_curve,
    sym3,
    veronese,
)
from .projlin import (
    Chart,
    ProjPoint,
    Subspace,
    affine_coords,
    annihilator,
    gp_decompose,
    grassmann_distance,
    meet,
    normalize,
    span,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT", "Tolerances",
    "ProjPoint", "Subspace", "Chart", "normalize", "span", "meet", "annihilator",
    "gp_decompose", "grassmann_distance", "affine_coords",
    "Flag", "FrenetCurve", "GroupElement", "Veronese", "Transformed", "Table", "veronese",
    "curve_eval", "dual_curve", "restrict_curve", "project_curve", "sym3",
    "check_general_position", "check_limit_compatibility",
    "PointClass", "PlaneClass", "Leaf", "dev", "incidence_params", "classify_point",
    "fuchsian_oracle", "classify_plane", "secant_params", "ctaf_preimages", "leaf",
    "leaves_through_point", "boundary_point",
    "PlanarCurve", "SingularKind", "IntersectionPattern", "intersection_pattern", "top_view",
    "front_view", "convexity_margin", "cusp_classify", "supporting_plane",
    "support_disagreement",
]
