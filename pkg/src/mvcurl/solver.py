"""Exact linear algebra over the rationals for ansatz-space searches.

Kernels of the multiplier, Casimir, and cohomology equations are linear in
the unknown coefficients, so each problem reduces to an exact nullspace or
an exact affine solve.  Residual outputs of the probed map are expanded over
a (blade, monomial) row basis after clearing all denominators with one
common denominator for the whole system; a per-column denominator would
rescale columns and corrupt the recovered solution functions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

from mvcurl.curl import curl, schouten
from mvcurl.exterior import Chart, Multivector, VolumeForm, _BladeSum
from mvcurl.ring import Polynomial, RationalFunc, grlex_key, poly_lcm


class AnsatzSpace:
    """Finite-dimensional search space of candidate functions.

    The basis is either all monomials of total degree <= max_degree, or those
    monomials over a fixed polynomial denominator; ordering is ascending
    graded lexicographic so results are reproducible.
    """

    __slots__ = ("chart", "kind", "basis", "max_degree", "denominator")

    def __init__(self, chart: Chart, max_degree: int,
                 denominator: Polynomial | None = None):
        if max_degree < 0:
            raise ValueError("degree bound must be non-negative")
        if denominator is not None and denominator.is_zero():
            raise ZeroDivisionError("ansatz denominator must be non-zero")
        self.chart = chart
        self.max_degree = max_degree
        self.denominator = denominator
        self.kind = "polynomial" if denominator is None else "fixed-denominator"
        den_rf = None
        if denominator is not None:
            den_rf = RationalFunc(Polynomial.constant(chart.dim, 1), denominator)
        basis = []
        for exps in monomial_exponents(chart.dim, max_degree):
            mono = RationalFunc(Polynomial.monomial(chart.dim, exps))
            basis.append(mono if den_rf is None else mono * den_rf)
        self.basis = basis

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def combine(self, coeffs: Sequence[Fraction]) -> RationalFunc:
        """Linear combination of basis functions with exact coefficients."""
        if len(coeffs) != len(self.basis):
            raise ValueError("coefficient count does not match basis")
        total = RationalFunc.zero(self.chart.dim)
        for c, b in zip(coeffs, self.basis):
            if c:
                total = total + b.scale(c)
        return total


def monomial_exponents(nvars: int, max_degree: int) -> List[Tuple[int, ...]]:
    """Exponent tuples of total degree <= max_degree, ascending graded lex."""

    def compositions(total: int, slots: int):
        if slots == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, slots - 1):
                yield (first,) + rest

    out: List[Tuple[int, ...]] = []
    for total in range(max_degree + 1):
        out.extend(sorted(compositions(total, nvars), key=grlex_key))
    return out


class ExactMatrix:
    """Dense matrix of exact rationals with Gauss-Jordan elimination."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int,
                 data: List[List[Fraction]] | None = None):
        if data is None:
            data = [[Fraction(0)] * cols for _ in range(rows)]
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("inconsistent matrix shape")
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def from_columns(cls, columns: List[Dict[object, Fraction]]) -> "ExactMatrix":
        """Assemble from sparse columns keyed by arbitrary row labels."""
        labels = sorted({k for col in columns for k in col}, key=repr)
        index = {k: i for i, k in enumerate(labels)}
        out = cls(len(labels), len(columns))
        for j, col in enumerate(columns):
            for k, v in col.items():
                out.data[index[k]][j] = v
        return out

    def column(self, j: int) -> List[Fraction]:
        return [self.data[i][j] for i in range(self.rows)]

    def multiply_vector(self, v: Sequence[Fraction]) -> List[Fraction]:
        if len(v) != self.cols:
            raise ValueError("vector length does not match column count")
        return [sum((r[j] * v[j] for j in range(self.cols)), Fraction(0))
                for r in self.data]

    def _rref(self) -> Tuple[List[List[Fraction]], List[int]]:
        m = [row[:] for row in self.data]
        pivots: List[int] = []
        r = 0
        for c in range(self.cols):
            pivot = next((i for i in range(r, self.rows) if m[i][c]), None)
            if pivot is None:
                continue
            m[r], m[pivot] = m[pivot], m[r]
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return m, pivots

    def rank(self) -> int:
        return len(self._rref()[1])

    def nullspace(self) -> List[List[Fraction]]:
        """Exact basis of the right kernel, one vector per free column."""
        m, pivots = self._rref()
        pivot_set = set(pivots)
        basis = []
        for free in range(self.cols):
            if free in pivot_set:
                continue
            v = [Fraction(0)] * self.cols
            v[free] = Fraction(1)
            for r, c in enumerate(pivots):
                v[c] = -m[r][free]
            basis.append(v)
        return basis

    def solve(self, b: Sequence[Fraction]) -> List[Fraction] | None:
        """One exact solution of M x = b, or None when inconsistent."""
        if len(b) != self.rows:
            raise ValueError("right-hand side length does not match rows")
        aug = ExactMatrix(self.rows, self.cols + 1,
                          [row[:] + [Fraction(bi)] for row, bi in zip(self.data, b)])
        m, pivots = aug._rref()
        if self.cols in pivots:
            return None
        x = [Fraction(0)] * self.cols
        for r, c in enumerate(pivots):
            x[c] = m[r][self.cols]
        return x


# -- residual expansion -----------------------------------------------------


def _residual_terms(value) -> Dict[object, RationalFunc]:
    """View a residual as sparse (slot -> coefficient) for row expansion."""
    if isinstance(value, _BladeSum):
        return dict(value.terms)
    if isinstance(value, RationalFunc):
        return {} if value.is_zero() else {0: value}
    if isinstance(value, (list, tuple)):
        return {i: c for i, c in enumerate(value) if not c.is_zero()}
    raise TypeError(f"unsupported residual type: {type(value).__name__}")


def _expand_with_common_denominator(outputs: List[Dict[object, RationalFunc]],
                                    nvars: int) -> List[Dict[object, Fraction]]:
    """Clear all denominators with one shared multiplier; a per-output
    multiplier would rescale columns and corrupt recovered solutions."""
    common = Polynomial.constant(nvars, 1)
    for out in outputs:
        for coeff in out.values():
            if not coeff.den.is_one():
                common = poly_lcm(common, coeff.den)
    common_rf = RationalFunc(common)
    expanded: List[Dict[object, Fraction]] = []
    for out in outputs:
        col: Dict[object, Fraction] = {}
        for slot, coeff in out.items():
            cleared = coeff * common_rf
            if not cleared.den.is_one():
                raise RuntimeError("common denominator failed to clear residual")
            for exps, value in cleared.num.terms.items():
                col[(slot, exps)] = value
        expanded.append(col)
    return expanded


def collect_linear_system(residual_map: Callable, space) -> ExactMatrix:
    """Expand the residual of each basis element into an exact column.

    ``space`` needs ordered ``basis`` elements supporting + and scale (either
    an AnsatzSpace or a multivector basis).  The map must be linear in the
    ansatz coefficients; this is spot-checked on the first basis pair before
    trusting it.
    """
    outputs = [_residual_terms(residual_map(b)) for b in space.basis]
    _linearity_spot_check(residual_map, space, outputs)
    return ExactMatrix.from_columns(
        _expand_with_common_denominator(outputs, space.chart.dim))


def collect_affine_system(residual_map: Callable, space,
                          target) -> Tuple[ExactMatrix, List[Fraction]]:
    """Matrix of the map plus the target expanded over the same rows,
    for solving residual_map(x) = target inside the ansatz."""
    outputs = [_residual_terms(residual_map(b)) for b in space.basis]
    _linearity_spot_check(residual_map, space, outputs)
    expanded = _expand_with_common_denominator(
        outputs + [_residual_terms(target)], space.chart.dim)
    target_sparse = expanded.pop()
    labels = sorted({k for col in expanded for k in col} | set(target_sparse),
                    key=repr)
    index = {k: i for i, k in enumerate(labels)}
    matrix = ExactMatrix(len(labels), len(expanded))
    for j, col in enumerate(expanded):
        for k, v in col.items():
            matrix.data[index[k]][j] = v
    b = [Fraction(0)] * len(labels)
    for k, v in target_sparse.items():
        b[index[k]] = v
    return matrix, b


def _linearity_spot_check(residual_map, space: AnsatzSpace,
                          outputs: List[Dict[object, RationalFunc]]) -> None:
    if not space.basis:
        return
    b0 = space.basis[0]
    doubled = _residual_terms(residual_map(b0.scale(2)))
    expect = {k: v.scale(2) for k, v in outputs[0].items()}
    if doubled != expect:
        raise ValueError("residual map is not linear (scaling check failed)")
    if len(space.basis) > 1:
        b1 = space.basis[1]
        summed = _residual_terms(residual_map(b0 + b1))
        expect2: Dict[object, RationalFunc] = dict(outputs[0])
        for k, v in outputs[1].items():
            s = expect2.get(k)
            s = v if s is None else s + v
            if s.is_zero():
                expect2.pop(k, None)
            else:
                expect2[k] = s
        if summed != expect2:
            raise ValueError("residual map is not linear (additivity check failed)")


def _kernel_functions(residual_map, space: AnsatzSpace) -> List[RationalFunc]:
    matrix = collect_linear_system(residual_map, space)
    return [space.combine(v) for v in matrix.nullspace()]


# -- exact span membership --------------------------------------------------


def vector_span_contains(vectors: Sequence[Sequence[Fraction]],
                         candidate: Sequence[Fraction]) -> bool:
    """Whether candidate lies in the rational span of the given vectors."""
    if not any(candidate):
        return True
    if not vectors:
        return False
    cols = [dict(enumerate(v)) for v in vectors]
    base = ExactMatrix.from_columns(cols)
    extended = ExactMatrix.from_columns(cols + [dict(enumerate(candidate))])
    return base.rank() == extended.rank()


def _function_coordinates(functions: Sequence[RationalFunc]) -> List[Dict[object, Fraction]]:
    nvars = functions[0].nvars
    outputs = [{0: f} if not f.is_zero() else {} for f in functions]
    return _expand_with_common_denominator(outputs, nvars)


def function_span_contains(functions: Sequence[RationalFunc],
                           candidate: RationalFunc) -> bool:
    """Exact membership of a rational function in a finite rational span."""
    if candidate.is_zero():
        return True
    if not functions:
        return False
    cols = _function_coordinates(list(functions) + [candidate])
    extra = cols.pop()
    base = ExactMatrix.from_columns(cols)
    extended = ExactMatrix.from_columns(cols + [extra])
    return base.rank() == extended.rank()


def function_spans_equal(a: Sequence[RationalFunc],
                         b: Sequence[RationalFunc]) -> bool:
    return (all(function_span_contains(b, f) for f in a)
            and all(function_span_contains(a, g) for g in b))


# -- named solvers ----------------------------------------------------------


def lm_solve(volume: VolumeForm, a: Multivector,
             space: AnsatzSpace) -> List[RationalFunc]:
    """Basis of the last multipliers of ``a`` inside the ansatz space.

    Empty output means none in the ansatz, not that none exists.
    """
    return _kernel_functions(lambda m: curl(volume, a.scale(m)), space)


def casimir_solve(pi: Multivector, space: AnsatzSpace) -> List[RationalFunc]:
    """Basis of the functions bracket-commuting with ``pi`` in the ansatz."""
    return _kernel_functions(
        lambda f: schouten(pi, Multivector.scalar(pi.chart, f)), space)
