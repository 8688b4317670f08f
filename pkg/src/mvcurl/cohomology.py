"""Degree-truncated cohomology of the divergence-free multivector complex.

For a volume-preserving Poisson bivector, bracketing with the bivector maps
curl-free multivectors to curl-free multivectors and squares to zero.  All
computations here happen inside finite polynomial-degree truncations, so
kernel and image dimensions are exact for the truncation but only bound the
untruncated cohomology.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from mvcurl.curl import curl, schouten
from mvcurl.exterior import Chart, Multivector, VolumeForm
from mvcurl.poisson import require_poisson
from mvcurl.ring import Polynomial, RationalFunc
from mvcurl.solver import collect_linear_system, monomial_exponents

__all__ = [
    "NonExactError",
    "MultivectorBasis",
    "lichnerowicz_delta",
    "exact_basis",
    "truncated_exact_cohomology",
    "TruncatedComplexReport",
]


class NonExactError(ValueError):
    """Raised when the bivector fails to be curl-free for the chosen volume."""


class MultivectorBasis:
    """Monomial-coefficient basis of grade-k multivectors up to a degree.

    Elements are ordered blade-major (ascending index mask), monomials
    ascending graded lexicographic within each blade.
    """

    __slots__ = ("chart", "grade", "max_degree", "basis", "_index")

    def __init__(self, chart: Chart, grade: int, max_degree: int):
        if not 0 <= grade <= chart.dim:
            raise ValueError(f"grade {grade} out of range for dimension {chart.dim}")
        if max_degree < 0:
            raise ValueError("degree bound must be non-negative")
        self.chart = chart
        self.grade = grade
        self.max_degree = max_degree
        n = chart.dim
        exponents = monomial_exponents(n, max_degree)
        basis: List[Multivector] = []
        index: Dict[Tuple[int, Tuple[int, ...]], int] = {}
        for mask in range(1 << n):
            if mask.bit_count() != grade:
                continue
            for exps in exponents:
                index[(mask, exps)] = len(basis)
                coeff = RationalFunc(Polynomial.monomial(n, exps))
                basis.append(Multivector(chart, grade, {mask: coeff}))
        self.basis = basis
        self._index = index

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def combine(self, coeffs: Sequence[Fraction]) -> Multivector:
        if len(coeffs) != len(self.basis):
            raise ValueError("coefficient count does not match basis")
        total = Multivector.zero(self.chart, self.grade)
        for c, b in zip(coeffs, self.basis):
            if c:
                total = total + b.scale(c)
        return total

    def coordinates(self, a: Multivector) -> List[Fraction]:
        """Exact coefficient vector of a member; rejects anything outside."""
        if a.grade != self.grade and not a.is_zero():
            raise ValueError("grade does not match basis")
        out = [Fraction(0)] * len(self.basis)
        for mask, coeff in a.terms.items():
            if not coeff.den.is_one():
                raise ValueError("coefficients must be polynomial")
            for exps, value in coeff.num.terms.items():
                slot = self._index.get((mask, exps))
                if slot is None:
                    raise ValueError("multivector exceeds the degree bound")
                out[slot] = value
        return out


class _SpanSpace:
    """Search space spanned by precomputed multivectors rather than atoms."""

    __slots__ = ("chart", "basis")

    def __init__(self, chart: Chart, elements: Sequence[Multivector]):
        self.chart = chart
        self.basis = list(elements)

    def combine(self, coeffs: Sequence[Fraction]) -> Multivector:
        total = None
        for c, b in zip(coeffs, self.basis):
            if c:
                term = b.scale(c)
                total = term if total is None else total + term
        if total is None:
            raise ValueError("empty combination has no defined grade")
        return total


def lichnerowicz_delta(pi: Multivector, a: Multivector) -> Multivector:
    """Coboundary [pi, a]; squares to zero whenever pi is Poisson."""
    require_poisson(pi)
    return schouten(pi, a)


def exact_basis(volume: VolumeForm, grade: int,
                max_degree: int) -> List[Multivector]:
    """Spanning set of the curl-free grade-k multivectors with polynomial
    coefficients of total degree <= max_degree."""
    ambient = MultivectorBasis(volume.chart, grade, max_degree)
    if grade == 0:
        return list(ambient.basis)
    matrix = collect_linear_system(lambda a: curl(volume, a), ambient)
    return [ambient.combine(v) for v in matrix.nullspace()]


@dataclass(frozen=True)
class TruncatedComplexReport:
    """Exact dimensions for one truncated slot of the curl-free complex.

    truncated_h_dim is kernel minus image within the truncation; the caveat
    flag records that this only estimates the untruncated cohomology.
    """

    k: int
    domain_degree_bound: int
    dim_exact_k: int
    dim_kernel: int
    dim_image_from_km1: int
    truncated_h_dim: int
    caveat: bool = True


def truncated_exact_cohomology(volume: VolumeForm, pi: Multivector, k: int,
                               max_degree: int) -> TruncatedComplexReport:
    """Kernel and image dimensions of [pi, .] on curl-free multivectors.

    Requires a Poisson bivector with polynomial coefficients whose curl
    vanishes for the chosen volume, so that the differential preserves the
    curl-free subspace.  Sources for the image are truncated one derivative
    lower so their brackets stay inside the degree bound.
    """
    if pi.grade != 2 and not pi.is_zero():
        raise ValueError(f"expected a bivector, got grade {pi.grade}")
    for coeff in pi.terms.values():
        if not coeff.den.is_one():
            raise ValueError("bivector coefficients must be polynomial")
    require_poisson(pi)
    if not curl(volume, pi).is_zero():
        raise NonExactError("bivector has non-zero curl for this volume")

    chart = volume.chart
    deg_pi = max((c.num.total_degree() for c in pi.terms.values()), default=0)

    domain = exact_basis(volume, k, max_degree)
    dim_exact_k = len(domain)
    if domain:
        span = _SpanSpace(chart, domain)
        delta = collect_linear_system(lambda a: schouten(pi, a), span)
        dim_kernel = dim_exact_k - delta.rank()
    else:
        dim_kernel = 0

    dim_image = 0
    lower_degree = max_degree - deg_pi + 1
    if k > 0 and lower_degree >= 0:
        sources = exact_basis(volume, k - 1, lower_degree)
        if sources:
            span = _SpanSpace(chart, sources)
            delta = collect_linear_system(lambda a: schouten(pi, a), span)
            dim_image = delta.rank()

    if not dim_image <= dim_kernel <= dim_exact_k:
        raise RuntimeError("truncated complex dimensions are inconsistent")
    return TruncatedComplexReport(
        k=k,
        domain_degree_bound=max_degree,
        dim_exact_k=dim_exact_k,
        dim_kernel=dim_kernel,
        dim_image_from_km1=dim_image,
        truncated_h_dim=dim_kernel - dim_image,
    )
