"""Curl operator on multivector fields and the Schouten bracket.

The curl lowers grade by one via the composition sharp . d . flat against a
fixed volume form; on vector fields it is the divergence.  The Schouten
bracket is implemented directly as the derivation-based blade formula, not
through the curl, so the curl/wedge compatibility law stays a genuine
cross-check between two independent computations.

Logarithms never appear symbolically: the bracket of a multivector with
log(m) is realized as the difference of two curls, which keeps the
coefficient field closed under every operation.
"""

from __future__ import annotations

from typing import Dict

from mvcurl.exterior import (
    DifferentialForm,
    Multivector,
    VolumeForm,
    blade_indices,
    exterior_derivative,
    flat,
    marsden_derivative,
    merge_sign,
    sharp,
    witten_derivative,
)
from mvcurl.ring import RationalFunc


def curl(volume: VolumeForm, a: Multivector) -> Multivector:
    """Grade-lowering curl; zero on scalars, divergence on vector fields."""
    if volume.chart != a.chart:
        raise ValueError("chart mismatch")
    if a.grade == 0:
        return Multivector.zero(a.chart, 0)
    return sharp(volume, exterior_derivative(flat(volume, a)))


def divergence(volume: VolumeForm, x: Multivector) -> RationalFunc:
    if x.grade != 1 and not x.is_zero():
        raise ValueError(f"divergence needs a vector field, got grade {x.grade}")
    return curl(volume, x).scalar_value()


def vector_apply(x: Multivector, f: RationalFunc) -> RationalFunc:
    """Directional derivative X(f) of a function along a vector field."""
    if x.grade != 1 and not x.is_zero():
        raise ValueError(f"expected a vector field, got grade {x.grade}")
    total = RationalFunc.zero(x.chart.dim)
    for mask, coeff in x.terms.items():
        i = mask.bit_length() - 1
        fi = f.diff(i)
        if not fi.is_zero():
            total = total + coeff * fi
    return total


def schouten(a: Multivector, b: Multivector) -> Multivector:
    """Schouten bracket, extending the Lie bracket to blades as a derivation.

    Per blade pair (c dI, c' dJ) of grades (p, q) the bracket contributes
        (-1)^(p-1) c (i_{dc'} dI) ^ dJ  -  (-1)^((p-1)(q-1)+(q-1)) c' (i_{dc} dJ) ^ dI,
    the unique graded-antisymmetric derivation extension with [X, f] = X(f).
    """
    if a.chart != b.chart:
        raise ValueError("chart mismatch")
    chart = a.chart
    p, q = a.grade, b.grade
    sign1 = -1 if (p - 1) % 2 else 1
    sign2 = -(1 if ((p - 1) * (q - 1) + (q - 1)) % 2 == 0 else -1)
    out: Dict[int, RationalFunc] = {}

    def accumulate(base_sign: int, coeff: RationalFunc, contracted_mask: int,
                   k: int, other_mask: int) -> None:
        # coeff * (i_{dx_k} d_{contracted_mask | k}) ^ d_{other_mask}
        if contracted_mask & other_mask:
            return
        sign = base_sign * merge_sign(1 << k, contracted_mask) \
            * merge_sign(contracted_mask, other_mask)
        if sign < 0:
            coeff = -coeff
        mask = contracted_mask | other_mask
        prev = out.get(mask)
        s = coeff if prev is None else prev + coeff
        if s.is_zero():
            out.pop(mask, None)
        else:
            out[mask] = s

    for mi, ca in a.terms.items():
        for mj, cb in b.terms.items():
            for k in blade_indices(mi):
                dk = cb.diff(k)
                if not dk.is_zero():
                    accumulate(sign1, ca * dk, mi & ~(1 << k), k, mj)
            for k in blade_indices(mj):
                dk = ca.diff(k)
                if not dk.is_zero():
                    accumulate(sign2, cb * dk, mj & ~(1 << k), k, mi)
    return Multivector(chart, p + q - 1, out)


def last_multiplier_residual(volume: VolumeForm, m: RationalFunc,
                             a: Multivector) -> Multivector:
    """Curl of m*a; the zero multivector exactly when m is a last multiplier."""
    return curl(volume, a.scale(m))


def is_last_multiplier(volume: VolumeForm, m: RationalFunc, a: Multivector) -> bool:
    """Three independent routes; any disagreement is an internal error.

    (a) the curl residual of m*a vanishes;
    (b) flat(a) lies in the kernel of the operator d_m + (m-1)d;
    (c) flat(a) is closed for the conjugated differential (1/m) d(m * .).
    """
    if m.is_zero():
        raise ZeroDivisionError("candidate multiplier must be non-zero")
    omega = flat(volume, a)
    one = RationalFunc.constant(m.nvars, 1)
    via_curl = last_multiplier_residual(volume, m, a).is_zero()
    via_witten = (witten_derivative(1, m, omega)
                  + exterior_derivative(omega).scale(m - one)).is_zero()
    via_marsden = marsden_derivative(m, omega).is_zero()
    if not via_curl == via_witten == via_marsden:
        raise RuntimeError(
            f"multiplier routes disagree: curl={via_curl} "
            f"witten={via_witten} marsden={via_marsden}")
    return via_curl


def curl_scaled(volume: VolumeForm, m: RationalFunc, a: Multivector) -> Multivector:
    """Curl against the rescaled volume m*V."""
    if m.is_zero():
        raise ZeroDivisionError("volume multiplier must be non-zero")
    return curl(volume.scaled(m), a)


def log_bracket(volume: VolumeForm, a: Multivector, m: RationalFunc) -> Multivector:
    """Bracket of a with log(m), realized as curl_scaled - curl."""
    return curl_scaled(volume, m, a) - curl(volume, a)


def is_exact(volume: VolumeForm, a: Multivector) -> bool:
    return curl(volume, a).is_zero()


def inverse_multiplier_check(volume: VolumeForm, h: RationalFunc,
                             x: Multivector) -> bool:
    """True when X(h) = div(X) * h, i.e. 1/h is a last multiplier of X."""
    if h.is_zero():
        raise ZeroDivisionError("inverse multiplier candidate must be non-zero")
    return vector_apply(x, h) == divergence(volume, x) * h


def first_integral_check(x: Multivector, f: RationalFunc) -> bool:
    return vector_apply(x, f).is_zero()
