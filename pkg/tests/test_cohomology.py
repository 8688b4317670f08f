"""Truncated cohomology of the curl-free complex: kernels, images, reports."""

import random
from fractions import Fraction

import pytest

from mvcurl.cohomology import (
    MultivectorBasis,
    NonExactError,
    TruncatedComplexReport,
    exact_basis,
    lichnerowicz_delta,
    truncated_exact_cohomology,
)
from mvcurl.curl import curl
from mvcurl.exterior import Chart, Multivector, VolumeForm
from mvcurl.identities import random_polynomial
from mvcurl.poisson import NonPoissonError, StructureConstants, lie_poisson
from mvcurl.ring import Polynomial, RationalFunc
from mvcurl.solver import vector_span_contains

F = Fraction


def plane():
    chart = Chart(["x", "y"])
    return chart, VolumeForm(chart, chart.one_rf())


def so3_setup():
    chart = Chart(["x", "y", "z"])
    constants = StructureConstants(3, {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1})
    return chart, VolumeForm(chart, chart.one_rf()), lie_poisson(constants, chart)


# -- bases ------------------------------------------------------------------


def test_multivector_basis_enumeration():
    chart, _ = plane()
    mb = MultivectorBasis(chart, 1, 1)
    # two blades, three monomials each, blade-major order
    assert mb.dimension == 6
    assert mb.basis[0] == Multivector.basis_vector(chart, 0)
    assert mb.basis[3] == Multivector.basis_vector(chart, 1)
    with pytest.raises(ValueError):
        MultivectorBasis(chart, 3, 1)


def test_coordinates_roundtrip_and_rejection():
    chart, _ = plane()
    mb = MultivectorBasis(chart, 1, 2)
    rng = random.Random(7)
    coeffs = [F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(mb.dimension)]
    assert mb.coordinates(mb.combine(coeffs)) == coeffs
    cubic = Multivector(chart, 1, {0b01: RationalFunc(Polynomial.monomial(2, (3, 0)))})
    with pytest.raises(ValueError, match="degree bound"):
        mb.coordinates(cubic)
    with pytest.raises(ValueError, match="polynomial"):
        mb.coordinates(Multivector(
            chart, 1, {0b01: RationalFunc(Polynomial.constant(2, 1),
                                          Polynomial.variable(2, 0))}))


def test_exact_basis_dimensions():
    chart, vol = plane()
    # divergence is one linear condition on six affine coefficients
    assert len(exact_basis(vol, 1, 1)) == 5
    top = exact_basis(vol, 2, 0)
    assert len(top) == 1
    assert top[0] == Multivector(chart, 2, {0b11: chart.one_rf()})
    for field in exact_basis(vol, 1, 2):
        assert curl(vol, field).is_zero()


def test_exact_basis_grade_zero_is_everything():
    chart, vol = plane()
    assert len(exact_basis(vol, 0, 2)) == 6


# -- the differential -------------------------------------------------------


def test_delta_squares_to_zero():
    chart, vol, pi = so3_setup()
    rng = random.Random(8)
    for _ in range(6):
        terms = {}
        for mask in (0b001, 0b010, 0b100):
            p = random_polynomial(rng, 3, max_degree=2, max_terms=2)
            if not p.is_zero():
                terms[mask] = RationalFunc(p)
        a = Multivector(chart, 1, terms)
        assert lichnerowicz_delta(pi, lichnerowicz_delta(pi, a)).is_zero()


def test_delta_requires_poisson():
    chart = Chart(["x", "y", "z"])
    x = RationalFunc(Polynomial.variable(3, 0))
    bad = Multivector(chart, 2, {0b011: chart.one_rf(), 0b101: -x})
    with pytest.raises(NonPoissonError):
        lichnerowicz_delta(bad, Multivector.basis_vector(chart, 0))


def test_delta_preserves_curl_free_subspace():
    chart, vol, pi = so3_setup()
    for a in exact_basis(vol, 1, 2):
        assert curl(vol, lichnerowicz_delta(pi, a)).is_zero()


# -- truncated reports ------------------------------------------------------


def test_symplectic_plane_slot_zero():
    chart, vol = plane()
    pi = Multivector(chart, 2, {0b11: chart.one_rf()})
    report = truncated_exact_cohomology(vol, pi, 0, 3)
    assert report == TruncatedComplexReport(
        k=0, domain_degree_bound=3, dim_exact_k=10, dim_kernel=1,
        dim_image_from_km1=0, truncated_h_dim=1)
    assert report.caveat


def test_symplectic_plane_higher_slots():
    chart, vol = plane()
    pi = Multivector(chart, 2, {0b11: chart.one_rf()})
    mid = truncated_exact_cohomology(vol, pi, 1, 2)
    assert (mid.dim_kernel, mid.dim_image_from_km1, mid.truncated_h_dim) == (9, 9, 0)
    top = truncated_exact_cohomology(vol, pi, 2, 2)
    assert (top.dim_kernel, top.dim_image_from_km1, top.truncated_h_dim) == (1, 0, 1)


def test_so3_slot_zero_counts_casimirs():
    chart, vol, pi = so3_setup()
    report = truncated_exact_cohomology(vol, pi, 0, 2)
    assert report.dim_kernel == 2
    assert report.truncated_h_dim == 2


def test_slot_zero_kernel_matches_casimir_solve():
    from mvcurl.solver import AnsatzSpace, casimir_solve

    chart, vol, pi = so3_setup()
    report = truncated_exact_cohomology(vol, pi, 0, 2)
    assert report.dim_kernel == len(casimir_solve(pi, AnsatzSpace(chart, 2)))
    plane_chart, plane_vol = plane()
    sympl = Multivector(plane_chart, 2, {0b11: plane_chart.one_rf()})
    report = truncated_exact_cohomology(plane_vol, sympl, 0, 3)
    assert report.dim_kernel == len(casimir_solve(sympl, AnsatzSpace(plane_chart, 3)))


def test_delta_of_function_is_minus_hamiltonian_field():
    from mvcurl.poisson import hamiltonian_field

    chart, _ = plane()
    pi = Multivector(chart, 2, {0b11: chart.one_rf()})
    x = RationalFunc(Polynomial.variable(2, 0))
    y = RationalFunc(Polynomial.variable(2, 1))
    for f in (x, x * y + y):
        delta_f = lichnerowicz_delta(pi, Multivector.scalar(chart, f))
        assert delta_f == hamiltonian_field(pi, f).scale(-1)
    assert lichnerowicz_delta(pi, pi).is_zero()


def test_rejects_non_unimodular_and_non_polynomial():
    chart, vol = plane()
    x = RationalFunc(Polynomial.variable(2, 0))
    with pytest.raises(NonExactError):
        truncated_exact_cohomology(vol, Multivector(chart, 2, {0b11: x}), 0, 2)
    with pytest.raises(ValueError, match="polynomial"):
        truncated_exact_cohomology(
            vol, Multivector(chart, 2, {0b11: x.inverse()}), 0, 2)
    with pytest.raises(ValueError, match="grade"):
        truncated_exact_cohomology(vol, Multivector.basis_vector(chart, 0), 0, 2)


def test_exact_kernel_embeds_in_full_kernel():
    # kernel vectors computed on the curl-free subcomplex must lie inside the
    # kernel computed on the full polynomial complex
    chart, vol, pi = so3_setup()
    from mvcurl.solver import collect_linear_system

    ambient = MultivectorBasis(chart, 1, 1)
    full_delta = collect_linear_system(lambda a: lichnerowicz_delta(pi, a), ambient)
    full_kernel = full_delta.nullspace()

    class Span:
        def __init__(self, chart, elements):
            self.chart = chart
            self.basis = elements

    exact = exact_basis(vol, 1, 1)
    span = Span(chart, exact)
    sub_delta = collect_linear_system(lambda a: lichnerowicz_delta(pi, a), span)
    for v in sub_delta.nullspace():
        member = None
        for c, b in zip(v, exact):
            if c:
                member = b.scale(c) if member is None else member + b.scale(c)
        assert member is not None
        assert vector_span_contains(full_kernel, ambient.coordinates(member))
