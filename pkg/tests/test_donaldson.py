from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elliptic_donaldson import EllipticSurface, gamma, gamma0, gamma1, gamma2, solve_c, solve_d
from elliptic_donaldson.donaldson import (
    InvariantPolynomial,
    constant_C1,
    constant_C2,
    gamma1_expected,
    gamma2_expected,
)
from elliptic_donaldson.exact import RatFunc, var

pg, m1, m2 = var("pg"), var("m1"), var("m2")
odd_multiplicities = st.sampled_from([1, 3, 5, 7, 9])


def test_solve_c_symbolic_and_at_three():
    assert solve_c() == -1 + 1 / (m1 * m1)
    assert solve_c(3) == RatFunc(-8, 9)
    assert solve_c(1) == RatFunc(0)


def test_solve_d_symbolic_and_spot_values():
    m = m1
    assert solve_d() == 2 / m**4 - 8 / m + 6
    assert solve_d(3) == RatFunc(272, 81)
    assert solve_d(1) == RatFunc(0)


def test_constants_at_spot_values():
    assert constant_C1(EllipticSurface(pg=0, m1=3, m2=1)) == RatFunc(-1)
    assert constant_C1(EllipticSurface(pg=3, m1=1, m2=1)) == RatFunc(2)


def test_gamma0_is_one():
    assert gamma0() == InvariantPolynomial({(0, 0): 1})
    assert gamma(0).render() == "1"


def test_gamma1_symbolic():
    S = EllipticSurface()
    assert gamma1(S) == gamma1_expected(S)


def test_gamma1_at_pg_three_without_multiple_fibers():
    value = gamma1(EllipticSurface(pg=3, m1=1, m2=1))
    assert value.render() == "(S2) + 2*(kS)^2"
    assert value.degree == 2


def test_gamma2_symbolic():
    S = EllipticSurface()
    value = gamma2(S)
    C1, C2 = constant_C1(S), constant_C2(S)
    assert value.coefficient(2, 0) == RatFunc(3)
    assert value.coefficient(1, 2) == 6 * C1
    assert value.coefficient(0, 4) == 3 * C1 * C1 - 2 * C2
    assert value.degree == 4


def test_gamma2_top_coefficient_without_multiple_fibers():
    top = gamma2(EllipticSurface(m1=1, m2=1)).coefficient(0, 4)
    assert top == (pg - 1) * (3 * pg - 5)
    assert top == 3 * (pg + 1) * (pg - 1) - 8 * (pg - 1)
    assert gamma2(EllipticSurface(pg=0, m1=1, m2=1)).render() == "3*(S2)^2 - 6*(S2)*(kS)^2 + 5*(kS)^4"


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 6), odd_multiplicities, odd_multiplicities)
def test_gammas_symmetric_in_the_multiplicities(p, a, b):
    assert gamma1(EllipticSurface(pg=p, m1=a, m2=b)) == gamma1(EllipticSurface(pg=p, m1=b, m2=a))
    assert gamma2(EllipticSurface(pg=p, m1=a, m2=b)) == gamma2(EllipticSurface(pg=p, m1=b, m2=a))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 6), odd_multiplicities, odd_multiplicities)
def test_numeric_gammas_match_closed_forms(p, a, b):
    S = EllipticSurface(pg=p, m1=a, m2=b)
    assert gamma1(S) == gamma1_expected(S)
    assert gamma2(S) == gamma2_expected(S)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 6), odd_multiplicities, odd_multiplicities)
def test_gamma2_mixed_coefficient_is_six_times_gamma1_coefficient(p, a, b):
    S = EllipticSurface(pg=p, m1=a, m2=b)
    assert gamma2(S).coefficient(1, 2) == 6 * gamma1(S).coefficient(0, 2)


def test_even_multiplicity_rejected():
    with pytest.raises(ValueError):
        EllipticSurface(m1=2)


def test_gamma_rejects_higher_t():
    with pytest.raises(ValueError):
        gamma(3)


def test_invariant_polynomial_evaluate_and_substitute():
    value = gamma1(EllipticSurface())
    assert value.evaluate(2, 1) == 2 + constant_C1(EllipticSurface())
    numeric = value.substitute({"pg": 3, "m1": 1, "m2": 1})
    assert numeric == gamma1(EllipticSurface(pg=3, m1=1, m2=1))


def test_invariant_polynomial_round_trips_through_expression():
    value = gamma2(EllipticSurface())
    assert InvariantPolynomial.from_expression(value.to_expression()) == value
    assert hash(InvariantPolynomial.from_expression(value.to_expression())) == hash(value)


def test_invariant_polynomial_json():
    payload = gamma2(EllipticSurface(pg=0, m1=1, m2=1)).to_json()
    assert payload == {
        "degree": 4,
        "coefficients": {"(S2)^2": "3/1", "(S2)*(kS)^2": "-6/1", "(kS)^4": "5/1"},
    }


def test_zero_polynomial_renders_as_zero():
    assert InvariantPolynomial({}).render() == "0"
    assert InvariantPolynomial({(1, 0): Fraction(0)}).degree == 0
