"""mvcurl: exact curl calculus for multivector fields on R^n.

All arithmetic is exact (rational coefficients, canonical rational-function
normal forms), so identity checks are strict equalities rather than numeric
tolerances.
"""

from mvcurl.ring import Polynomial, RationalFunc, poly_gcd, poly_lcm

__all__ = [
    "Polynomial",
    "RationalFunc",
    "poly_gcd",
    "poly_lcm",
]
