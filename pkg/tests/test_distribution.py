import dataclasses
import math
from fractions import Fraction

import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st
from scipy import integrate as sp_integrate

from q2fock.distribution import (
    A1_by_definition,
    A2_by_definition,
    Atom,
    DomainError,
    Kind,
    aux_functions,
    cdf,
    field_distribution,
    mgf_S,
    mgf_T,
    mgf_taylor,
    q2_distribution,
    q2_stieltjes,
    quadrature_moment,
    spectral_params,
    standard_integral_closed,
    standard_integral_quadrature,
    total_mass,
)
from q2fock.moments import u_by_recursion

SQ5 = math.sqrt(5)
F = Fraction


# -- generating functions ------------------------------------------------------

def test_mgf_T_examples():
    assert mgf_T(0.3, 2.0, 0.0) == 1.0
    x = 1 / 8
    assert mgf_T(0, 1, x) == pytest.approx((1 - math.sqrt(1 - 4 * x)) / (2 * x), rel=1e-14)
    assert mgf_T(-1, 1, 0.5) == pytest.approx(2.0, rel=1e-15)


def test_mgf_T_domain():
    with pytest.raises(DomainError):
        mgf_T(0.5, 1, 0.25)
    with pytest.raises(DomainError):
        mgf_T(-1, 1, 1.0)
    with pytest.raises(DomainError):
        mgf_T(1.5, 1, 0.1)


def test_mgf_T_matches_series_inside_radius():
    q, norm2, x = 0.5, 1.0, 0.05
    u = u_by_recursion(40, F(1, 2), 1).u
    assert mgf_T(q, norm2, x) == pytest.approx(sum(float(c) * x**n for n, c in enumerate(u)), rel=1e-13)


def test_mgf_taylor_examples():
    coeffs = mgf_taylor(F(1, 3), F(5, 7), 3)
    assert coeffs[0] == 1 and coeffs[1] == F(5, 7)
    assert mgf_taylor(0, 1, 8) == [1, 1, 2, 5, 14, 42, 132, 429, 1430]
    assert mgf_taylor(0.5, 1.0, 2)[2] == F(5, 2)


@pytest.mark.parametrize("q", [F(-1, 2), F(0), F(1, 2), F(1)])
def test_mgf_taylor_equals_moments(q):
    assert mgf_taylor(q, 1, 10) == list(u_by_recursion(10, q, 1).u)


def test_mgf_S_examples():
    assert mgf_S(1.3, 0.0) == 1.0
    assert mgf_S(1, 0.5) == pytest.approx(mgf_T(0, 0.25, 0.5), rel=1e-14)
    x = 1e-4
    assert (mgf_S(2, x) - 1) / x == pytest.approx(0.25, rel=1e-3)
    with pytest.raises(DomainError):
        mgf_S(1.5, 1.0)


@settings(max_examples=200)
@given(st.floats(0.05, 2.0), st.floats(-0.95, 0.95))
@example(1.0, 1.2668057743170996e-103)
@example(1.0, 2.404600330403498e-264)
@example(1.0000001, 1e-200)
def test_mgf_S_equals_T_at_quarter_norm(a, x):
    assert mgf_S(a, x) == pytest.approx(mgf_T(a - 1, 0.25, x), rel=1e-11, abs=1e-12)


# -- auxiliary functions and spectral parameters ------------------------------

def test_aux_examples():
    a = 0.5
    bound = (a**3 + 3 * a * a) / (64 * (1 - a))
    assert all(aux_functions(a, x)[1] >= bound for x in (-5, -1, 0, 0.3, 0.7, 1, 4))
    assert aux_functions(1.5, 1.0)[1] == 0.0
    assert aux_functions(1.75, 2.0)[0] == 0.0
    with pytest.raises(DomainError):
        aux_functions(1.0, 0.5)


def test_spectral_named_values():
    p = spectral_params(2)
    # the roots of h_2 are (2 +- sqrt 5)/4
    assert p.a1 == pytest.approx((SQ5 + 2) / 4, abs=1e-14)
    assert p.a2 == pytest.approx((SQ5 - 2) / 4, abs=1e-14)
    assert p.A1 == pytest.approx(16 * (SQ5 - 2) / SQ5, abs=1e-14)
    assert p.atom_weight == pytest.approx((SQ5 - 2) / SQ5, abs=1e-14)
    p = spectral_params(1.5)
    assert (p.a1, p.a2, p.A1) == (1.0, 0.125, 0.0)


def test_A1_two_formulas_at_seven_quarters():
    a = 1.75
    closed = 16 * 0.75 * (1 - a / math.sqrt(a * a + 2 * a - 3))
    assert spectral_params(a).A1 == pytest.approx(closed, abs=1e-14)
    assert A1_by_definition(a) == pytest.approx(closed, abs=1e-12)
    assert A2_by_definition(a) == pytest.approx(spectral_params(a).A2, abs=1e-12)


@given(st.floats(1.0001, 2.0))
def test_spectral_invariants(a):
    p = spectral_params(a)
    assert 0 < p.a2 < p.a1 and p.a1 >= 1
    assert p.a1 * p.a2 == pytest.approx(1 / (16 * (a - 1)), rel=1e-12)
    assert p.a1 - p.a2 == pytest.approx((a + 2) / 4, abs=1e-12)
    assert p.A1 >= 0 and p.A2 == pytest.approx(p.a2 * p.A1, abs=1e-12)
    assert (p.A1 == 0) == (a <= 1.5)


def test_spectral_domain():
    for a in (1.0, 0.5, 2.5):
        with pytest.raises(DomainError):
            spectral_params(a)


# -- squared-field law ---------------------------------------------------------

def test_q2_examples():
    d = q2_distribution(2)
    assert d.kind is Kind.DENSITY_PLUS_ATOMS
    (atom,) = d.atoms
    assert atom.w == pytest.approx((SQ5 - 2) / SQ5, abs=1e-14)
    assert atom.w == pytest.approx(0.105573, abs=1e-6)
    assert atom.x == pytest.approx((SQ5 + 2) / 4, abs=1e-14)

    d = q2_distribution(1.5)
    assert d.kind is Kind.ABSOLUTELY_CONTINUOUS and d.atoms == ()
    for x in (0.01, 0.3, 0.9, 0.999):
        ref = 3 / (8 * math.pi) * math.sqrt(1 - x) / (math.sqrt(x) * (1 - x) * (x + 0.125))
        assert d.density(x) == pytest.approx(ref, rel=1e-12)

    d = q2_distribution(1)
    assert d.kind is Kind.SEMICIRCLE
    assert d.moment(0).value == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DomainError):
        q2_distribution(0)


@pytest.mark.parametrize("a", [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0])
def test_q2_moments_match_quarter_norm(a):
    u = u_by_recursion(5, F(a) - 1, F(1, 4)).u
    d = q2_distribution(a)
    for n in range(6):
        assert d.moment(n).value == pytest.approx(float(u[n]), abs=1e-12)


@pytest.mark.parametrize("a", [0.25, 0.5, 0.75, 1.25, 1.5, 1.75, 2.0])
@pytest.mark.parametrize("t", [-0.5, -0.25, 0.25, 0.5])
def test_stieltjes_both_routes(a, t):
    assert q2_stieltjes(a, t) == pytest.approx(mgf_S(a, t), abs=1e-7)
    assert q2_distribution(a).stieltjes(t).value == pytest.approx(mgf_S(a, t), abs=1e-7)


def test_q2_density_against_scipy():
    a = 0.5
    d = q2_distribution(a)
    ref, _ = sp_integrate.quad(d.density, 0, 1, limit=200, epsabs=1e-12)
    assert ref == pytest.approx(1.0, abs=1e-8)


# -- field law -----------------------------------------------------------------------

def test_field_kinds():
    assert field_distribution(0.3, 0).kind is Kind.POINT_MASS
    d = field_distribution(-1, 2)
    assert d.kind is Kind.TWO_POINT and d.atoms == (Atom(-2, 0.5), Atom(2, 0.5))
    assert field_distribution(0, 1).kind is Kind.SEMICIRCLE
    assert field_distribution(0.5, 1).kind is Kind.ABSOLUTELY_CONTINUOUS
    assert field_distribution(-0.5, 1).kind is Kind.ABSOLUTELY_CONTINUOUS
    assert field_distribution(0.51, 1).kind is Kind.DENSITY_PLUS_ATOMS
    for bad in ((1.5, 1), (-1.2, 1), (0.3, -1)):
        with pytest.raises(DomainError):
            field_distribution(*bad)


def test_semicircle_density():
    d = field_distribution(0, 1)
    for x in (-1.9, -0.5, 0.0, 1.2):
        assert d.density(x) == pytest.approx(math.sqrt(4 - x * x) / (2 * math.pi), rel=1e-14)
    assert d.density(2.5) == 0.0


@pytest.mark.parametrize("q", [-0.75, -0.25, 0.25, 0.75, 1.0])
@pytest.mark.parametrize("norm", [0.5, 1.0, 1.7])
def test_density_matches_closed_formula(q, norm):
    d = field_distribution(q, norm)
    for y in (-0.95, -0.4, 0.1, 0.8):
        x = 2 * norm * y
        ref = (1 + q) * norm**2 / (2 * math.pi) * math.sqrt(4 * norm**2 - x * x) / (
            norm**4 + q * (q + 3) * norm**2 * x * x - q * x**4
        )
        assert d.density(x) == pytest.approx(ref, rel=1e-12)


def test_atoms_at_q_one_quarter_norm():
    d = field_distribution(1, 0.5)
    a1 = (SQ5 + 2) / 4
    w = 0.5 * (1 - 2 / SQ5)
    assert [(at.x, at.w) for at in d.atoms] == [
        pytest.approx((-math.sqrt(a1), w), abs=1e-14),
        pytest.approx((math.sqrt(a1), w), abs=1e-14),
    ]


def test_half_boundary_has_no_atoms_and_integrable_edges():
    d = field_distribution(0.5, 0.5)
    assert d.atoms == ()
    assert math.isfinite(d.density(0.999999))
    assert total_mass(d).value == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("q", [-0.75, -0.25, 0.25, 0.5, 0.75, 1.0])
@pytest.mark.parametrize("norm", [0.5, 1.0])
def test_moment_chain(q, norm):
    d = field_distribution(q, norm)
    u = u_by_recursion(5, F(q), F(norm) ** 2).u
    for n in range(6):
        res = quadrature_moment(d, 2 * n)
        assert res.value == pytest.approx(float(u[n]), abs=1e-6)
        assert res.error <= 1e-10
    for k in (1, 3, 5):
        assert abs(quadrature_moment(d, k).value) <= 1e-10


def test_quadrature_moment_atoms_only():
    d = field_distribution(-1, 1.5)
    res = quadrature_moment(d, 4)
    assert res.value == pytest.approx(1.5**4) and res.evaluations == 0
    with pytest.raises(DomainError):
        quadrature_moment(d, -1)


def test_field_density_against_scipy():
    d = field_distribution(0.75, 1.0)
    ref, _ = sp_integrate.quad(d.density, -2, 2, limit=200, epsabs=1e-12)
    assert ref + sum(at.w for at in d.atoms) == pytest.approx(1.0, abs=1e-8)


# -- CDF ----------------------------------------------------------------------------

def test_cdf_examples():
    assert cdf(field_distribution(0.3, 1), 0.0) == pytest.approx(0.5, abs=1e-10)
    d = field_distribution(-1, 1)
    assert cdf(d, 1.0) == 1.0
    assert cdf(d, 1.0 - 1e-9) == 0.5
    assert cdf(field_distribution(0, 1), 2.0) == pytest.approx(1.0, abs=1e-10)


def test_cdf_atoms_outside_density_support():
    d = field_distribution(1, 1)
    w = d.atoms[0].w
    assert cdf(d, -2.0 - 1e-9) == pytest.approx(w, abs=1e-15)
    assert cdf(d, d.atoms[0].x - 1e-9) == 0.0
    assert cdf(d, d.atoms[1].x) == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(
    st.sampled_from([-0.75, 0.0, 0.5, 0.9]),
    st.lists(st.floats(-3, 3), min_size=2, max_size=6),
)
def test_cdf_monotone(q, xs):
    d = field_distribution(q, 1.0)
    values = [cdf(d, x) for x in sorted(xs)]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_printed_atom_location_breaks_second_moment():
    d = field_distribution(1, 1.0)
    a1 = spectral_params(2).a1
    moved = dataclasses.replace(
        d, atoms=tuple(Atom(math.copysign(math.sqrt(a1) / 2, at.x), at.w) for at in d.atoms)
    )
    assert quadrature_moment(d, 2).value == pytest.approx(1.0, abs=1e-12)
    assert abs(quadrature_moment(moved, 2).value - 1.0) > 0.1


# -- reference integrals -------------------------------------------------------

@pytest.mark.parametrize("which, alpha", [(1, -0.5), (1, 0.25), (1, 0.5), (2, 0.125), (2, 1.0)])
def test_standard_integrals(which, alpha):
    assert standard_integral_quadrature(which, alpha) == pytest.approx(
        standard_integral_closed(which, alpha), abs=1e-9
    )
