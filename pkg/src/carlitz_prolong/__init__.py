"""Exact arithmetic for prolongations of t-motives and Anderson-Thakur functions."""
from .base_arith import FieldElem, FieldParams
from .errors import (
    CarlitzError,
    ConfigError,
    DivergentEvaluation,
    InversionOfZero,
    PrecisionExhausted,
    PrecisionLoss,
    ShapeMismatch,
)
from .laurent_u import LaurentU
from .t_series import TSeries

__all__ = [
    "CarlitzError", "ConfigError", "DivergentEvaluation", "FieldElem", "FieldParams",
    "InversionOfZero", "LaurentU", "PrecisionExhausted", "PrecisionLoss",
    "ShapeMismatch", "TSeries",
]
