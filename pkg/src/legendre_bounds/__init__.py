"""Exact arithmetic on the Legendre family and explicit torsion bounds for curves in it."""

from ._accel import HAVE_NUMBA, backend
from .logbound import LogBound, LogExpr, lb_max
from .algebraic import NumberField, NFElement
from .curve import LegendreFiber, LegendrePoint, certify_order, j_invariant, multiply
from .divpoly import division_polynomials, primitive_division_polynomial
from .heights import weil_height
from .canonical import canonical_height
from .bounds import mm_curve_bound, ml_bounds, hindry_descent, DescentParams
from .scanner import CurveSpec, scan_section, scan_fiber, verify_mm_bound

__version__ = "0.1.0"

__all__ = [
    "HAVE_NUMBA", "backend", "LogBound", "LogExpr", "lb_max", "NumberField", "NFElement",
    "LegendreFiber", "LegendrePoint", "certify_order", "j_invariant", "multiply",
    "division_polynomials", "primitive_division_polynomial", "weil_height", "canonical_height",
    "mm_curve_bound", "ml_bounds", "hindry_descent", "DescentParams",
    "CurveSpec", "scan_section", "scan_fiber", "verify_mm_bound",
]
