"""Exact computation in the mod-l motivic Steenrod algebra and its dual."""

from .classical import ClassicalElement, classical_normalize, realize
from .coefficients import BaseScalar, CoefficientRing, Preset, PresetMismatch, binom_mod, scalar_multiply, specialize
from .dual_hopf import (
    GammaElement,
    MilnorMonomial,
    TensorElement,
    antipode,
    coproduct,
    counit,
    eta_left,
    eta_right,
    gamma_multiply,
    milnor_basis,
    milnor_bidegree,
    tau_gen,
    tensor_normalize,
    xi_gen,
)
from .milnor_pairing import (
    LETTER_SLOT,
    DualFunctional,
    UnsupportedPreset,
    convolution_multiply,
    functional,
    matrix_invertible,
    pair,
    pairing_matrix,
)
from .steenrod_ops import (
    FuelExhausted,
    OpElement,
    UnsupportedScalarCommutation,
    adem_step,
    is_admissible,
    normalize,
    op_basis,
    op_bidegree,
    op_multiply,
    power,
    sq,
)
from .textio import ParseError, format_element, parse_element

__all__ = [
    "BaseScalar",
    "ClassicalElement",
    "CoefficientRing",
    "DualFunctional",
    "FuelExhausted",
    "GammaElement",
    "LETTER_SLOT",
    "MilnorMonomial",
    "OpElement",
    "ParseError",
    "Preset",
    "PresetMismatch",
    "TensorElement",
    "UnsupportedPreset",
    "UnsupportedScalarCommutation",
    "adem_step",
    "antipode",
    "binom_mod",
    "classical_normalize",
    "convolution_multiply",
    "coproduct",
    "counit",
    "eta_left",
    "eta_right",
    "format_element",
    "functional",
    "gamma_multiply",
    "is_admissible",
    "matrix_invertible",
    "milnor_basis",
    "milnor_bidegree",
    "normalize",
    "op_basis",
    "op_bidegree",
    "op_multiply",
    "pair",
    "pairing_matrix",
    "parse_element",
    "power",
    "realize",
    "scalar_multiply",
    "specialize",
    "sq",
    "tau_gen",
    "tensor_normalize",
    "xi_gen",
]
