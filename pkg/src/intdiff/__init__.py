"""Exact computations in the algebra of polynomial integro-differential operators."""

from .algebra import (
    AlgebraElement, D, H, I, X, e, e_multi, generator, involution, is_in_ideal, linear_combine,
    multiply, one, to_text, try_invert_finite_unit, zero,
)
from .automorphism import (
    CanonicalAutomorphism, GeneratorImages, InnerUnit, apply_aut, compose, g1_generator, hat_star,
    invert, is_inner, recognize,
)
from .errors import AlgebraError, ParseError
from .ideals import IdealDescriptor, enumerate_ideals, invariant_ideals, parse_ideal, stabilizer
from .module import DividedPolynomial, apply
from .parser import evaluate, parse, parse_element
from .quotient import BAutomorphism, BElement, fredholm_index, quotient_image

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement", "D", "H", "I", "X", "e", "e_multi", "generator", "involution", "is_in_ideal",
    "linear_combine", "multiply", "one", "to_text", "try_invert_finite_unit", "zero",
    "CanonicalAutomorphism", "GeneratorImages", "InnerUnit", "apply_aut", "compose", "g1_generator",
    "hat_star", "invert", "is_inner", "recognize",
    "AlgebraError", "ParseError",
    "IdealDescriptor", "enumerate_ideals", "invariant_ideals", "parse_ideal", "stabilizer",
    "DividedPolynomial", "apply", "evaluate", "parse", "parse_element",
    "BAutomorphism", "BElement", "fredholm_index", "quotient_image",
]
