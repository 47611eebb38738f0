"""Orders, ideals and class groups in number fields of degree at most 6."""

from .classgroup import (
    ClassGroupStructure,
    NormEquationResult,
    UnitData,
    class_group,
    cubic_form,
    find_generator,
    fundamental_units,
    is_principal,
    norm_equation,
    solve_norm_equation,
)
from .fields import closure_automorphisms, closure_order, period_field_order, pure_cubic_order
from .ideals import IdealHNF, PrimeIdeal, decompose_prime, factor_ideal, prime_product
from .order import OrderData, maximal_order, maximalize, order_from_polynomial

__all__ = [
    "ClassGroupStructure",
    "IdealHNF",
    "NormEquationResult",
    "OrderData",
    "PrimeIdeal",
    "UnitData",
    "class_group",
    "closure_automorphisms",
    "closure_order",
    "cubic_form",
    "decompose_prime",
    "factor_ideal",
    "find_generator",
    "fundamental_units",
    "is_principal",
    "maximal_order",
    "maximalize",
    "norm_equation",
    "order_from_polynomial",
    "period_field_order",
    "prime_product",
    "pure_cubic_order",
    "solve_norm_equation",
]
