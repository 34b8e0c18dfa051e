"""
Algebra Package

Finite fields by table lookup, dense univariate polynomials with their
factorization patterns, and symmetric polynomial systems over Y_1..Y_s.
"""

from .ff import FieldCtx, FieldElem, build_field, element, embed, find_normal_element, frobenius
from .upoly import FactPattern, UPoly, factorization_pattern, is_squarefree, poly_divrem
from .symsys import MPoly, SymSystem, elem_sym_eval, hypothesis_check, parse_mpoly, parse_system

__all__ = [
    # Fields
    'FieldCtx',
    'FieldElem',
    'build_field',
    'element',
    'embed',
    'find_normal_element',
    'frobenius',

    # Univariate polynomials
    'FactPattern',
    'UPoly',
    'factorization_pattern',
    'is_squarefree',
    'poly_divrem',

    # Symmetric systems
    'MPoly',
    'SymSystem',
    'elem_sym_eval',
    'hypothesis_check',
    'parse_mpoly',
    'parse_system',
]
