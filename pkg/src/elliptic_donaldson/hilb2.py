"""Divisor classes on Hilb^2 of the relative Jacobian and their fourth powers.

H^2(Hilb^2 X) is H_2(X) plus the multiples of E/2, E the locus of
non-reduced subschemes.  Quartic monomials in D_alpha and E are read off the
blow-up description of Hilb^2 X:

    D^4 = 3 (alpha^2)^2      D^3 E = 0        D^2 E^2 = -8 alpha^2
    D E^3 = -8 c1(X).alpha   E^4 = 8 (c2(X) - c1(X)^2)
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional, Tuple

from .exact import RatFunc, as_ratfunc, var
from .surface import EllipticSurface, canonical_coefficient

__all__ = [
    "Hilb2Class",
    "SurfaceNumbers",
    "correction_term",
    "ey_coefficient_solve",
    "ey_intersections",
    "jacobian_numbers",
    "mu_prime",
    "mu_prime_fourth",
    "mu_prime_fourth_expected",
    "quartic",
]


@dataclass(frozen=True)
class SurfaceNumbers:
    """c1^2 and c2 of the surface whose Hilbert square is taken."""

    c1_sq: RatFunc
    c2: RatFunc


def jacobian_numbers(S: EllipticSurface) -> SurfaceNumbers:
    """The relative Jacobian is again elliptic with the same pg: c1^2 = 0, c2 = 12(pg+1)."""
    return SurfaceNumbers(RatFunc(0), S.euler_number)


@dataclass(frozen=True)
class Hilb2Class:
    """D_alpha + e_coef * E, with alpha given through the pairings the table needs."""

    alpha_sq: RatFunc
    c1_dot_alpha: RatFunc
    e_coef: RatFunc
    numbers: SurfaceNumbers
    alpha_dot_f: Optional[RatFunc] = None
    alpha_dot_kappa: Optional[RatFunc] = None

    def scaled(self, c) -> "Hilb2Class":
        c = as_ratfunc(c)
        return Hilb2Class(
            self.alpha_sq * c * c,
            self.c1_dot_alpha * c,
            self.e_coef * c,
            self.numbers,
            None if self.alpha_dot_f is None else self.alpha_dot_f * c,
            None if self.alpha_dot_kappa is None else self.alpha_dot_kappa * c,
        )


def _monomial(x: Hilb2Class, e_power: int) -> RatFunc:
    """D^(4-j) E^j from the multiplication table."""
    a2, c1a, n = x.alpha_sq, x.c1_dot_alpha, x.numbers
    return {
        0: 3 * a2 * a2,
        1: RatFunc(0),
        2: -8 * a2,
        3: -8 * c1a,
        4: 8 * (n.c2 - n.c1_sq),
    }[e_power]


def quartic(x: Hilb2Class) -> RatFunc:
    """(D_alpha + b E)^4 by the binomial theorem."""
    total = RatFunc(0)
    for j in range(5):
        total = total + comb(4, j) * x.e_coef**j * _monomial(x, j)
    return total


def mu_prime(S: EllipticSurface, alpha1_sq, kappa_sigma=None) -> Hilb2Class:
    """D_{alpha2} - ((f.Sigma)/2) E with alpha2 = alpha1 + ((f.Sigma)/2) f.

    alpha1 . f = 2 (f.Sigma), so alpha2^2 = alpha1^2 + 2 (f.Sigma)^2 and
    alpha2 . kappa = 2 (kappa.Sigma).  c1 of the Jacobian is -K.
    """
    kS = var("kS") if kappa_sigma is None else as_ratfunc(kappa_sigma)
    fS = S.m1 * S.m2 * kS
    alpha2_kappa = 2 * kS
    return Hilb2Class(
        alpha_sq=as_ratfunc(alpha1_sq) + 2 * fS * fS,
        c1_dot_alpha=-canonical_coefficient(S) * alpha2_kappa,
        e_coef=-fS / 2,
        numbers=jacobian_numbers(S),
        alpha_dot_f=2 * fS,
        alpha_dot_kappa=alpha2_kappa,
    )


def mu_prime_fourth(S: EllipticSurface, alpha1_sq, kappa_sigma=None) -> RatFunc:
    return quartic(mu_prime(S, alpha1_sq, kappa_sigma))


def mu_prime_fourth_expected(S: EllipticSurface) -> RatFunc:
    m1, m2, pg = S.m1, S.m2, S.pg
    C1 = (m1 * m2) ** 2 * (pg + 1) - m1 * m1 - m2 * m2
    S2, kS = var("S2"), var("kS")
    top = 3 * C1 * C1 - (2 * (pg + 1) + 12) * (m1 * m2) ** 4 + 8 * (m1**3 * m2**4 + m1**4 * m2**3)
    return 3 * S2 * S2 + 6 * C1 * S2 * kS * kS + top * kS**4


def _fiber_correction(m: RatFunc, value) -> RatFunc:
    if m.is_constant() and m.to_fraction() == 1:
        return RatFunc(0)
    return as_ratfunc(value)


def correction_term(S: EllipticSurface, kappa_sigma=None, d1=None, d2=None) -> RatFunc:
    """mu^4 - mu'^4 = m1^4 m2^4 (d(e,m1) + d(e,m2)) (kappa.Sigma)^4, with d(e,1) = 0."""
    kS = var("kS") if kappa_sigma is None else as_ratfunc(kappa_sigma)
    d1 = _fiber_correction(S.m1, var("d1") if d1 is None else d1)
    d2 = _fiber_correction(S.m2, var("d2c") if d2 is None else d2)
    return (S.m1 * S.m2) ** 4 * (d1 + d2) * kS**4


def ey_intersections(fiber_sigma) -> Tuple[RatFunc, RatFunc]:
    """(mu'(Sigma).E_y, E.E_y) for the exceptional curve E_y over a point y.

    The universal sheaf over S x E_y contributes -(1/4) * 4 * (-1) (f.Sigma).
    """
    fS = as_ratfunc(fiber_sigma)
    return -RatFunc(1) / 4 * 4 * (-1) * fS, RatFunc(-2)


def ey_coefficient_solve(fiber_sigma) -> RatFunc:
    """E-coefficient b of mu' = D_alpha2 + b E from mu'.E_y, using D_alpha2 . E_y = 0."""
    mu_ey, e_ey = ey_intersections(fiber_sigma)
    return mu_ey / e_ey
