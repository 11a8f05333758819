"""hopfrelax: lattice relaxation of hopfion solitons under a tunable
supercurrent coupling, with continuation in the coupling strength."""

from .lattice import (
    DirectorField,
    LatticeSpec,
    OneFormField,
    TwoFormField,
    exterior_derivative,
    forward_diff,
    l2_inner,
    l2_norm_sq,
    pullback_two_form,
)
from .energy import (
    EnergyBreakdown,
    GradientPair,
    evaluate,
    evaluate_decomposed,
    evaluate_with_gradient,
    gradient,
)

__all__ = [
    "DirectorField",
    "LatticeSpec",
    "OneFormField",
    "TwoFormField",
    "exterior_derivative",
    "forward_diff",
    "l2_inner",
    "l2_norm_sq",
    "pullback_two_form",
    "EnergyBreakdown",
    "GradientPair",
    "evaluate",
    "evaluate_decomposed",
    "evaluate_with_gradient",
    "gradient",
]

__version__ = "0.1.0"
