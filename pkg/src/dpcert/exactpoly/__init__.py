"""Exact polynomial arithmetic over the Gaussian rationals."""

from .grammar import PolySyntaxError, format_poly, parse, parse_laurent, parse_scalar
from .poly import (
    PARAMS,
    X,
    Y,
    LaurentPoly,
    Poly,
    VarSet,
    arith,
    partial,
    poly_sum,
    substitute,
)
from .scalar import I, Gaussian, Scalar, as_scalar, div, format_scalar, gaussian, inverse

__all__ = [
    "PARAMS", "X", "Y", "I", "Gaussian", "LaurentPoly", "Poly", "PolySyntaxError",
    "Scalar", "VarSet", "arith", "as_scalar", "div", "format_poly", "format_scalar",
    "gaussian", "inverse", "parse", "parse_laurent", "parse_scalar", "partial",
    "poly_sum", "substitute",
]
