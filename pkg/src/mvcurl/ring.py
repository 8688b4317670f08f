"""Exact sparse multivariate polynomials and rational functions over the rationals.

A polynomial in n coordinates is a dictionary mapping exponent tuples to
``Fraction`` coefficients; zero coefficients are never stored.  Rational
functions are kept in canonical form: numerator and denominator coprime,
denominator monic with respect to the graded lexicographic term order.
Two equal fractions therefore always have identical representations, so
every identity check in the rest of the package is a strict equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

Exponent = Tuple[int, ...]


def grlex_key(exponents: Exponent) -> tuple:
    """Sort key for the graded lexicographic order (total degree first)."""
    return (sum(exponents), exponents)


class Polynomial:
    """Sparse multivariate polynomial with exact rational coefficients.

    Instances are immutable by convention: no method mutates ``terms`` after
    construction, so values are safe to share.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Exponent, Fraction] | None = None):
        if nvars < 0:
            raise ValueError(f"invalid number of variables: {nvars}")
        clean: Dict[Exponent, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            if len(exps) != nvars:
                raise ValueError(
                    f"exponent tuple {exps} does not match {nvars} variables")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            if coeff != 0:
                clean[tuple(exps)] = Fraction(coeff)
        self.nvars = nvars
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> "Polynomial":
        c = Fraction(value)
        if c == 0:
            return cls(nvars)
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, exps: Exponent, coeff=1) -> "Polynomial":
        return cls(nvars, {tuple(exps): Fraction(coeff)})

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def is_one(self) -> bool:
        return self.terms == {(0,) * self.nvars: Fraction(1)}

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial (raises if non-constant)."""
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms[(0,) * self.nvars]

    def total_degree(self) -> int:
        """Total degree; zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    # -- term order ---------------------------------------------------------

    def leading_exponent(self) -> Exponent:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_exponent()]

    def sorted_terms(self) -> list:
        """Terms in descending graded lexicographic order (leading first)."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise ValueError(
                f"dimension mismatch: {self.nvars} vs {other.nvars} variables")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            s = out.get(exps, 0) + coeff
            if s == 0:
                out.pop(exps, None)
            else:
                out[exps] = s
        return Polynomial(self.nvars, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            s = out.get(exps, 0) - coeff
            if s == 0:
                out.pop(exps, None)
            else:
                out[exps] = s
        return Polynomial(self.nvars, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out: Dict[Exponent, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(e, 0) + ca * cb
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return Polynomial(self.nvars, out)

    def scale(self, value) -> "Polynomial":
        c = Fraction(value)
        if c == 0:
            return Polynomial(self.nvars)
        return Polynomial(self.nvars, {e: k * c for e, k in self.terms.items()})

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    # -- calculus -----------------------------------------------------------

    def diff(self, index: int) -> "Polynomial":
        """Partial derivative with respect to coordinate ``index``."""
        if not 0 <= index < self.nvars:
            raise ValueError(f"coordinate index {index} out of range")
        out: Dict[Exponent, Fraction] = {}
        for exps, coeff in self.terms.items():
            k = exps[index]
            if k == 0:
                continue
            e = list(exps)
            e[index] = k - 1
            out[tuple(e)] = coeff * k
        return Polynomial(self.nvars, out)

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a rational point."""
        values = [Fraction(v) for v in point]
        if len(values) != self.nvars:
            raise ValueError("point dimension does not match variable count")
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = coeff
            for e, v in zip(exps, values):
                if e:
                    term *= v ** e
            total += term
        return total

    # -- division -----------------------------------------------------------

    def exact_div(self, divisor: "Polynomial") -> "Polynomial":
        """Exact quotient self / divisor; raises if the division is inexact."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if divisor.is_constant():
            return self.scale(1 / divisor.constant_value())
        quotient: Dict[Exponent, Fraction] = {}
        rem = self
        lead_e = divisor.leading_exponent()
        lead_c = divisor.terms[lead_e]
        while not rem.is_zero():
            re = rem.leading_exponent()
            diff = tuple(a - b for a, b in zip(re, lead_e))
            if any(d < 0 for d in diff):
                raise ValueError("inexact polynomial division")
            qc = rem.terms[re] / lead_c
            quotient[diff] = quotient.get(diff, Fraction(0)) + qc
            rem = rem - divisor * Polynomial.monomial(self.nvars, diff, qc)
        return Polynomial(self.nvars, quotient)

    def to_string(self, names: Sequence[str]) -> str:
        """Deterministic rendering, terms in descending graded-lex order."""
        if not self.terms:
            return "0"
        if len(names) != self.nvars:
            raise ValueError("name list does not match variable count")
        pieces = []
        for exps, coeff in self.sorted_terms():
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            pieces.append(("-" if coeff < 0 else "+", body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({self.to_string([f'x{i + 1}' for i in range(self.nvars)])})"


# -- greatest common divisors ----------------------------------------------


def _monic(p: Polynomial) -> Polynomial:
    if p.is_zero():
        return p
    lc = p.leading_coefficient()
    return p if lc == 1 else p.scale(1 / lc)


def _variables_used(p: Polynomial) -> set:
    used = set()
    for exps in p.terms:
        for i, e in enumerate(exps):
            if e:
                used.add(i)
    return used


def _degree_in(p: Polynomial, v: int) -> int:
    return max(exps[v] for exps in p.terms)


def _split_by_variable(p: Polynomial, v: int) -> Dict[int, Polynomial]:
    """View p as univariate in coordinate v with polynomial coefficients."""
    buckets: Dict[int, Dict[Exponent, Fraction]] = {}
    for exps, coeff in p.terms.items():
        d = exps[v]
        rest = list(exps)
        rest[v] = 0
        buckets.setdefault(d, {})[tuple(rest)] = coeff
    return {d: Polynomial(p.nvars, t) for d, t in buckets.items()}


def _join_by_variable(coeffs: Dict[int, Polynomial], v: int, nvars: int) -> Polynomial:
    terms: Dict[Exponent, Fraction] = {}
    for d, poly in coeffs.items():
        for exps, coeff in poly.terms.items():
            e = list(exps)
            e[v] = d
            terms[tuple(e)] = coeff
    return Polynomial(nvars, terms)


def _content(polys: Iterable[Polynomial]) -> Polynomial:
    ordered = sorted(polys, key=lambda p: len(p.terms))
    acc = ordered[0]
    for p in ordered[1:]:
        if acc.is_one():
            break
        acc = poly_gcd(acc, p)
    return _monic(acc)


def _uni_prem(a: Dict[int, Polynomial], b: Dict[int, Polynomial]) -> Dict[int, Polynomial]:
    """Classical pseudo-remainder: lc(b)^(da-db+1) * a reduced by b."""
    db = max(b)
    lead_b = b[db]
    budget = max(a) - db + 1
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lead_r = r[dr]
        nxt: Dict[int, Polynomial] = {}
        for d, c in r.items():
            if d != dr:
                nxt[d] = c * lead_b
        for d, c in b.items():
            if d == db:
                continue
            nd = d + dr - db
            t = lead_r * c
            prev = nxt.get(nd)
            nxt[nd] = (prev - t) if prev is not None else -t
        r = {d: c for d, c in nxt.items() if not c.is_zero()}
        budget -= 1
    if r and budget > 0:
        # pad skipped reduction steps so the subresultant divisions stay exact
        mult = lead_b ** budget
        r = {d: c * mult for d, c in r.items()}
    return r


def _subresultant_prs(pa: Dict[int, Polynomial], pb: Dict[int, Polynomial],
                      nvars: int) -> Dict[int, Polynomial]:
    """Last non-zero subresultant remainder of two primitive polynomials."""
    g = Polynomial.constant(nvars, 1)
    h = Polynomial.constant(nvars, 1)
    while True:
        delta = max(pa) - max(pb)
        rem = _uni_prem(pa, pb)
        if not rem:
            return pb
        divisor = g * h ** delta
        if divisor.is_one():
            nxt = rem
        else:
            nxt = {d: p.exact_div(divisor) for d, p in rem.items()}
        pa, pb = pb, nxt
        g = pa[max(pa)]
        if delta == 1:
            h = g
        elif delta > 1:
            h = (g ** delta).exact_div(h ** (delta - 1))


def _monomial_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    exps = [min(min(e[v] for e in a.terms), min(e[v] for e in b.terms))
            for v in range(a.nvars)]
    return Polynomial.monomial(a.nvars, tuple(exps))


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd in Q[x1..xn]: content recursion around a subresultant PRS."""
    if a.nvars != b.nvars:
        raise ValueError("dimension mismatch in gcd")
    if a.is_zero():
        return _monic(b)
    if b.is_zero():
        return _monic(a)
    if a.is_constant() or b.is_constant():
        return Polynomial.constant(a.nvars, 1)
    if a.terms.keys() == b.terms.keys() and _monic(a) == _monic(b):
        return _monic(a)
    if len(a.terms) == 1 or len(b.terms) == 1:
        return _monomial_gcd(a, b)
    common = _variables_used(a) & _variables_used(b)
    if not common:
        return Polynomial.constant(a.nvars, 1)
    v = min(common, key=lambda i: (min(_degree_in(a, i), _degree_in(b, i)),
                                   _degree_in(a, i) + _degree_in(b, i), i))
    ua = _split_by_variable(a, v)
    ub = _split_by_variable(b, v)
    cont_a = _content(ua.values())
    cont_b = _content(ub.values())
    cont_gcd = poly_gcd(cont_a, cont_b)
    if not cont_a.is_one():
        ua = {d: p.exact_div(cont_a) for d, p in ua.items()}
    if not cont_b.is_one():
        ub = {d: p.exact_div(cont_b) for d, p in ub.items()}
    if max(ua) < max(ub):
        ua, ub = ub, ua
    cand = _subresultant_prs(ua, ub, a.nvars)
    ccont = _content(cand.values())
    if not ccont.is_one():
        cand = {d: p.exact_div(ccont) for d, p in cand.items()}
    return _monic(cont_gcd * _join_by_variable(cand, v, a.nvars))


def poly_lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_zero() or b.is_zero():
        return Polynomial.zero(a.nvars)
    return _monic((a * b).exact_div(poly_gcd(a, b)))


class RationalFunc:
    """Quotient of polynomials in canonical form.

    Invariants: the denominator is non-zero and monic (graded-lex leading
    coefficient one) and shares no factor with the numerator, so structural
    equality coincides with equality of rational functions.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None):
        if den is None:
            den = Polynomial.constant(num.nvars, 1)
        if num.nvars != den.nvars:
            raise ValueError("dimension mismatch between numerator and denominator")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num = num
            self.den = Polynomial.constant(num.nvars, 1)
            return
        if den.is_constant():
            c = den.constant_value()
            self.num = num if c == 1 else num.scale(1 / c)
            self.den = Polynomial.constant(num.nvars, 1)
            return
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = num.exact_div(g)
            den = den.exact_div(g)
        lc = den.leading_coefficient()
        if lc != 1:
            num = num.scale(1 / lc)
            den = den.scale(1 / lc)
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, num: Polynomial, den: Polynomial) -> "RationalFunc":
        """Build from an already-coprime pair, fixing only the monic scaling."""
        if num.is_zero():
            return cls.zero(num.nvars)
        if den.is_constant():
            c = den.constant_value()
            out = object.__new__(cls)
            out.num = num if c == 1 else num.scale(1 / c)
            out.den = Polynomial.constant(num.nvars, 1)
            return out
        lc = den.leading_coefficient()
        out = object.__new__(cls)
        if lc == 1:
            out.num = num
            out.den = den
        else:
            out.num = num.scale(1 / lc)
            out.den = den.scale(1 / lc)
        return out

    @classmethod
    def zero(cls, nvars: int) -> "RationalFunc":
        return cls(Polynomial.zero(nvars))

    @classmethod
    def constant(cls, nvars: int, value) -> "RationalFunc":
        return cls(Polynomial.constant(nvars, value))

    @classmethod
    def variable(cls, nvars: int, index: int) -> "RationalFunc":
        return cls(Polynomial.variable(nvars, index))

    # -- predicates ---------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_one()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("rational function is not constant")
        return self.num.constant_value()

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "RationalFunc") -> "RationalFunc":
        a, b = self.num, self.den
        c, d = other.num, other.den
        if b.is_one() and d.is_one():
            return RationalFunc._raw(a + c, b)
        if b == d:
            num = a + c
            if num.is_zero():
                return RationalFunc.zero(a.nvars)
            g = poly_gcd(num, b)
            if g.is_constant():
                return RationalFunc._raw(num, b)
            return RationalFunc._raw(num.exact_div(g), b.exact_div(g))
        # with coprime inputs, any common factor of the sum divides gcd(b, d)
        g = poly_gcd(b, d) if not (b.is_one() or d.is_one()) else None
        if g is None or g.is_constant():
            return RationalFunc._raw(a * d + c * b, b * d)
        d_red = d.exact_div(g)
        num = a * d_red + c * b.exact_div(g)
        if num.is_zero():
            return RationalFunc.zero(a.nvars)
        den = b * d_red
        g2 = poly_gcd(num, g)
        if g2.is_constant():
            return RationalFunc._raw(num, den)
        return RationalFunc._raw(num.exact_div(g2), den.exact_div(g2))

    def __sub__(self, other: "RationalFunc") -> "RationalFunc":
        return self + (-other)

    def __neg__(self) -> "RationalFunc":
        out = object.__new__(RationalFunc)
        out.num = -self.num
        out.den = self.den
        return out

    def __mul__(self, other: "RationalFunc") -> "RationalFunc":
        a, b = self.num, self.den
        c, d = other.num, other.den
        if a.is_zero() or c.is_zero():
            return RationalFunc.zero(a.nvars)
        # cross-cancel: inputs are coprime pairs, so the result is too
        if not (a.is_constant() or d.is_one()):
            g1 = poly_gcd(a, d)
            if not g1.is_constant():
                a = a.exact_div(g1)
                d = d.exact_div(g1)
        if not (c.is_constant() or b.is_one()):
            g2 = poly_gcd(c, b)
            if not g2.is_constant():
                c = c.exact_div(g2)
                b = b.exact_div(g2)
        return RationalFunc._raw(a * c, b * d)

    def __truediv__(self, other: "RationalFunc") -> "RationalFunc":
        return self * other.inverse()

    def inverse(self) -> "RationalFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunc._raw(self.den, self.num)

    def scale(self, value) -> "RationalFunc":
        c = Fraction(value)
        if c == 0:
            return RationalFunc.zero(self.nvars)
        out = object.__new__(RationalFunc)
        out.num = self.num.scale(c)
        out.den = self.den
        return out

    def __pow__(self, exponent: int) -> "RationalFunc":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        out = object.__new__(RationalFunc)
        out.num = self.num ** exponent
        out.den = self.den ** exponent
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # -- calculus -----------------------------------------------------------

    def diff(self, index: int) -> "RationalFunc":
        """Partial derivative; the quotient rule result is re-normalized."""
        if self.den.is_one():
            return RationalFunc(self.num.diff(index))
        return RationalFunc(
            self.num.diff(index) * self.den - self.num * self.den.diff(index),
            self.den * self.den)

    def evaluate(self, point: Sequence) -> Fraction:
        dv = self.den.evaluate(point)
        if dv == 0:
            raise ZeroDivisionError(f"pole at {tuple(point)}")
        return self.num.evaluate(point) / dv

    def to_string(self, names: Sequence[str]) -> str:
        if self.den.is_one():
            return self.num.to_string(names)
        return f"({self.num.to_string(names)})/({self.den.to_string(names)})"

    def __repr__(self) -> str:
        return f"RationalFunc({self.to_string([f'x{i + 1}' for i in range(self.nvars)])})"
