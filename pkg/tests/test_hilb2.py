import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from elliptic_donaldson.exact import RatFunc, var
from elliptic_donaldson.hilb2 import (
    Hilb2Class,
    SurfaceNumbers,
    correction_term,
    ey_coefficient_solve,
    ey_intersections,
    jacobian_numbers,
    mu_prime,
    mu_prime_fourth,
    mu_prime_fourth_expected,
    quartic,
)
from elliptic_donaldson.surface import EllipticSurface

from helpers import SYMPY_VARS, sympy_equal, to_sympy

pg, m1, m2, kS, S2 = (var(n) for n in ("pg", "m1", "m2", "kS", "S2"))


def test_jacobian_numbers():
    numbers = jacobian_numbers(EllipticSurface())
    assert numbers.c1_sq == RatFunc(0)
    assert numbers.c2 == 12 * (pg + 1)


def test_pure_divisor_quartic_is_three_times_square():
    x = Hilb2Class(RatFunc(5), RatFunc(2), RatFunc(0), SurfaceNumbers(RatFunc(0), RatFunc(24)))
    assert quartic(x) == RatFunc(75)


def test_pure_exceptional_quartic():
    x = Hilb2Class(RatFunc(0), RatFunc(0), RatFunc(1), SurfaceNumbers(RatFunc(9), RatFunc(3)))
    assert quartic(x) == 8 * (RatFunc(3) - 9)


@settings(max_examples=60)
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-4, 4), st.integers(-3, 3), st.integers(0, 30))
def test_quartic_matches_independent_expansion(a2, c1a, b, c1sq, c2):
    x = Hilb2Class(RatFunc(a2), RatFunc(c1a), RatFunc(b), SurfaceNumbers(RatFunc(c1sq), RatFunc(c2)))
    # Expand (D + bE)^4 with sympy and read monomials off the table.
    D, E = sympy.symbols("D E")
    table = {D**4: 3 * a2**2, D**3 * E: 0, D**2 * E**2: -8 * a2, D * E**3: -8 * c1a, E**4: 8 * (c2 - c1sq)}
    expanded = sympy.Poly(sympy.expand((D + b * E) ** 4), D, E)
    total = sum(coef * table[D**i * E**j] for (i, j), coef in zip(expanded.monoms(), expanded.coeffs()))
    assert quartic(x) == RatFunc(int(total))


@given(st.integers(-4, 4))
def test_scaling_is_homogeneous_of_degree_four(c):
    x = mu_prime(EllipticSurface(), S2)
    assert quartic(x.scaled(c)) == quartic(x) * c**4


def test_mu_prime_components():
    S = EllipticSurface()
    x = mu_prime(S, S2)
    fS = m1 * m2 * kS
    assert x.alpha_sq == S2 + 2 * fS * fS
    assert x.e_coef == -fS / 2
    assert x.alpha_dot_f == 2 * fS
    assert x.alpha_dot_kappa == 2 * kS


def test_quartic_of_mu_prime_identically():
    S = EllipticSurface()
    C1 = (m1 * m2) ** 2 * (pg + 1) - m1 * m1 - m2 * m2
    alpha1_sq = S2 + C1 * kS * kS
    assert mu_prime_fourth(S, alpha1_sq) == mu_prime_fourth_expected(S)


def test_quartic_of_mu_prime_against_sympy():
    S = EllipticSurface()
    C1 = (m1 * m2) ** 2 * (pg + 1) - m1 * m1 - m2 * m2
    value = to_sympy(mu_prime_fourth(S, S2 + C1 * kS * kS).substitute({"S2": 7}))
    p, a, b, k = (SYMPY_VARS[n] for n in ("pg", "m1", "m2", "kS"))
    c1 = (a * b) ** 2 * (p + 1) - a**2 - b**2
    top = 3 * c1**2 - (2 * (p + 1) + 12) * (a * b) ** 4 + 8 * (a**3 * b**4 + a**4 * b**3)
    assert sympy_equal(value, 3 * 49 + 6 * c1 * 7 * k**2 + top * k**4)


def test_quartic_has_no_odd_powers_of_kappa_sigma():
    S = EllipticSurface(pg=2, m1=3, m2=5)
    value = mu_prime_fourth(S, S2 + 4 * kS * kS)
    for sign_flip in (1, -1):
        assert value.substitute({"kS": sign_flip * kS}) == value


def test_correction_term():
    S = EllipticSurface()
    assert correction_term(S) == (m1 * m2) ** 4 * (var("d1") + var("d2c")) * kS**4
    trivial = EllipticSurface(m1=1, m2=1)
    assert correction_term(trivial, d1=5, d2=7).is_zero()
    half = EllipticSurface(m1=3, m2=1)
    assert correction_term(half, d1=2, d2=9) == 81 * 2 * kS**4


def test_exceptional_curve_numbers_and_solve():
    fS = var("kS") * 3
    assert ey_intersections(fS) == (fS, RatFunc(-2))
    assert ey_coefficient_solve(fS) == -fS / 2
    assert mu_prime(EllipticSurface(m1=3, m2=1), S2).e_coef == ey_coefficient_solve(fS)
