"""Expression trees for increasing homeomorphisms of the line."""

from .geometry import StageGeometry
from .nodes import (
    Affine,
    Comp,
    Compose,
    ExpBump,
    HomeoExpr,
    Identity,
    Inverse,
    MovedSet,
    Piecewise,
    StageMap,
    Translation,
    YoccozChart,
    solve_inverse,
)
from .ops import (
    central_derivative,
    check_differentiable,
    compose,
    deriv,
    evaluate,
    invert,
    is_increasing,
    one_sided_derivative,
    piecewise_linear,
    power,
    roundtrip_residual,
)
from .serialize import dumps, from_json, loads, to_json

__all__ = [
    "Affine", "Comp", "Compose", "ExpBump", "HomeoExpr", "Identity", "Inverse", "MovedSet",
    "Piecewise", "StageGeometry", "StageMap", "Translation", "YoccozChart", "central_derivative",
    "check_differentiable", "compose", "deriv", "dumps", "evaluate", "from_json", "invert",
    "is_increasing", "loads", "one_sided_derivative", "piecewise_linear", "power", "roundtrip_residual",
    "solve_inverse", "to_json",
]
