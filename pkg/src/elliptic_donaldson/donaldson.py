"""Assembly of the Donaldson polynomials gamma_t for t = 0, 1, 2.

The unknown constants are fixed by comparing with the surface that has a
section: c(e, m) from the degree-two polynomial at pg = 0, m2 = 1, and d(e, m)
from the degree-four polynomial.  Both comparisons are linear solves over the
exact rational function field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Mapping, Optional, Tuple

from .exact import RatFunc, as_ratfunc, coefficients_in, format_rational, solve_linear, var
from .grr import GrrContext, mu_section_case, mu_squared_general
from .hilb2 import correction_term, mu_prime_fourth
from .surface import EllipticSurface

__all__ = [
    "AssemblyMismatchError",
    "InvariantPolynomial",
    "OrientationError",
    "SIGMA_NAMES",
    "constant_C1",
    "constant_C2",
    "gamma",
    "gamma0",
    "gamma1",
    "gamma1_expected",
    "gamma2",
    "gamma2_expected",
    "mu_squared_symbolic",
    "section_mu_squared",
    "solve_c",
    "solve_d",
]

SIGMA_NAMES = ("S2", "kS")
Exponent = Tuple[int, int]


class AssemblyMismatchError(ArithmeticError):
    """A computed invariant disagrees with its closed form."""


class OrientationError(ArithmeticError):
    """The leading (Sigma^2) coefficients differ by something other than a sign."""


@dataclass(frozen=True)
class InvariantPolynomial:
    """A polynomial in (Sigma^2) and (kappa.Sigma) with coefficients in pg, m1, m2.

    Keys are exponent pairs (i, j) for (Sigma^2)^i (kappa.Sigma)^j.
    """

    coefficients: Mapping[Exponent, RatFunc] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, c in self.coefficients.items():
            c = as_ratfunc(c)
            if not c.is_zero():
                clean[(int(key[0]), int(key[1]))] = c
        object.__setattr__(self, "coefficients", clean)

    @classmethod
    def from_expression(cls, expr) -> "InvariantPolynomial":
        expr = as_ratfunc(expr)
        return cls(coefficients_in(expr, list(SIGMA_NAMES)))

    def to_expression(self) -> RatFunc:
        S2, kS = var("S2"), var("kS")
        total = RatFunc(0)
        for (i, j), c in self.coefficients.items():
            total = total + c * S2**i * kS**j
        return total

    @property
    def degree(self) -> int:
        """Degree in Sigma, where both (Sigma^2) and (kappa.Sigma)^2 count as 2."""
        if not self.coefficients:
            return 0
        return max(2 * i + j for i, j in self.coefficients)

    def coefficient(self, sigma_sq_power: int, kappa_sigma_power: int) -> RatFunc:
        return self.coefficients.get((sigma_sq_power, kappa_sigma_power), RatFunc(0))

    def items(self) -> Iterator[Tuple[Exponent, RatFunc]]:
        """Terms ordered by Sigma-degree, then by falling power of (Sigma^2)."""
        return iter(sorted(self.coefficients.items(), key=lambda t: (-(2 * t[0][0] + t[0][1]), -t[0][0])))

    def substitute(self, bindings: Mapping[str, object]) -> "InvariantPolynomial":
        return InvariantPolynomial({k: c.substitute(bindings) for k, c in self.coefficients.items()})

    def evaluate(self, sigma_sq, kappa_sigma) -> RatFunc:
        return self.to_expression().substitute({"S2": sigma_sq, "kS": kappa_sigma})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InvariantPolynomial):
            return NotImplemented
        keys = set(self.coefficients) | set(other.coefficients)
        return all(self.coefficient(*k) == other.coefficient(*k) for k in keys)

    def __hash__(self) -> int:
        return hash(frozenset((k, hash(c)) for k, c in self.coefficients.items()))

    def render(self) -> str:
        if not self.coefficients:
            return "0"
        pieces = []
        for (i, j), c in self.items():
            mono = "*".join(
                p
                for p in (_power("(S2)", i), _power("(kS)", j))
                if p
            )
            sign, text = _coefficient_text(c)
            if not mono:
                body = text or "1"
            elif text:
                body = f"{text}*{mono}"
            else:
                body = mono
            if not pieces:
                pieces.append(("-" if sign < 0 else "") + body)
            else:
                pieces.append((" - " if sign < 0 else " + ") + body)
        return "".join(pieces)

    def to_json(self) -> dict:
        out = {}
        for (i, j), c in self.items():
            key = "*".join(p for p in (_power("(S2)", i), _power("(kS)", j)) if p) or "1"
            if c.is_constant():
                out[key] = format_rational(c.to_fraction(), always_slash=True)
            else:
                out[key] = c.render()
        return {"degree": self.degree, "coefficients": out}

    def __str__(self) -> str:
        return self.render()


def _power(base: str, k: int) -> str:
    if k == 0:
        return ""
    return base if k == 1 else f"{base}^{k}"


def _coefficient_text(c: RatFunc) -> Tuple[int, str]:
    """(sign, text) with an empty text standing for a unit coefficient."""
    if c.is_constant():
        q = c.to_fraction()
        sign = -1 if q < 0 else 1
        q = abs(q)
        return sign, "" if q == 1 else format_rational(q)
    return 1, f"({c.render()})"


def constant_C1(S: EllipticSurface) -> RatFunc:
    m1, m2 = S.m1, S.m2
    return (m1 * m2) ** 2 * (S.pg + 1) - m1 * m1 - m2 * m2


def constant_C2(S: EllipticSurface) -> RatFunc:
    m1, m2 = S.m1, S.m2
    return (m1 * m2) ** 4 * (S.pg + 1) - m1**4 - m2**4


def gamma0(S: Optional[EllipticSurface] = None) -> InvariantPolynomial:
    """The moduli space is a point counted once."""
    return InvariantPolynomial({(0, 0): 1})


@lru_cache(maxsize=None)
def mu_squared_symbolic() -> RatFunc:
    """mu(Sigma)^2 for symbolic pg, m1, m2 with the constants c(e, m_i) left as c1, c2."""
    return mu_squared_general(GrrContext.build())


@lru_cache(maxsize=None)
def section_mu_squared(pg=0) -> RatFunc:
    """mu(Sigma)^2 on the moduli space of a surface with a section."""
    return mu_section_case(pg).square() / 16


def _orientation_sign(candidate: RatFunc, reference: RatFunc) -> RatFunc:
    """+1 or -1 so that the (Sigma^2) coefficients agree."""
    ratio = coefficients_in(reference, list(SIGMA_NAMES))[(1, 0)] / coefficients_in(candidate, list(SIGMA_NAMES))[(1, 0)]
    if ratio not in (RatFunc(1), RatFunc(-1)):
        raise OrientationError(f"leading coefficients differ by {ratio.render()}")
    return ratio


def solve_c(m=None) -> RatFunc:
    """c(e, m) from the section comparison at pg = 0 with m2 = 1."""
    m = var("m1") if m is None else as_ratfunc(m)
    reference = section_mu_squared(0)
    candidate = mu_squared_symbolic().substitute({"pg": 0, "m2": 1, "c2": 0, "m1": m})
    sign = _orientation_sign(candidate, reference)
    target = coefficients_in(reference, list(SIGMA_NAMES))[(0, 2)]
    equation = sign * coefficients_in(candidate, list(SIGMA_NAMES))[(0, 2)] - target
    return solve_linear(equation, "c1")


def _substituted_gamma1(S: EllipticSurface, c1, c2) -> RatFunc:
    return mu_squared_symbolic().substitute({"pg": S.pg, "m1": S.m1, "m2": S.m2, "c1": c1, "c2": c2})


def _correction_or_zero(m: RatFunc, value: RatFunc) -> RatFunc:
    return RatFunc(0) if m.is_constant() and m.to_fraction() == 1 else value


def _checked(computed: InvariantPolynomial, expected: InvariantPolynomial) -> InvariantPolynomial:
    if computed != expected:
        raise AssemblyMismatchError(f"computed {computed.render()} but the closed form is {expected.render()}")
    return computed


def gamma1(S: EllipticSurface) -> InvariantPolynomial:
    c1 = _correction_or_zero(S.m1, solve_c(S.m1))
    c2 = _correction_or_zero(S.m2, solve_c(S.m2))
    return _checked(InvariantPolynomial.from_expression(_substituted_gamma1(S, c1, c2)), gamma1_expected(S))


def gamma1_expected(S: EllipticSurface) -> InvariantPolynomial:
    return InvariantPolynomial({(1, 0): 1, (0, 2): constant_C1(S)})


def _mu_fourth(S: EllipticSurface, d1, d2) -> RatFunc:
    alpha1_sq = gamma1(S).to_expression()
    return mu_prime_fourth(S, alpha1_sq) + correction_term(S, d1=d1, d2=d2)


def solve_d(m=None) -> RatFunc:
    """d(e, m) from the degree-four comparison at pg = 0 with m2 = 1."""
    m = var("m1") if m is None else as_ratfunc(m)
    if m == RatFunc(1):
        # A multiplicity-one fiber needs no correction: d(e, 1) = 0.
        return RatFunc(0)
    reference = _mu_fourth(EllipticSurface(pg=0, m1=1, m2=1), 0, 0)
    candidate = _mu_fourth(EllipticSurface(pg=0, m1=m, m2=1), var("d1"), 0)
    target = coefficients_in(reference, list(SIGMA_NAMES))[(0, 4)]
    equation = coefficients_in(candidate, list(SIGMA_NAMES))[(0, 4)] - target
    return solve_linear(equation, "d1")


def gamma2(S: EllipticSurface) -> InvariantPolynomial:
    computed = InvariantPolynomial.from_expression(_mu_fourth(S, solve_d(S.m1), solve_d(S.m2)))
    return _checked(computed, gamma2_expected(S))


def gamma2_expected(S: EllipticSurface) -> InvariantPolynomial:
    C1, C2 = constant_C1(S), constant_C2(S)
    return InvariantPolynomial({(2, 0): 3, (1, 2): 6 * C1, (0, 4): 3 * C1 * C1 - 2 * C2})


def gamma(t: int, S: Optional[EllipticSurface] = None) -> InvariantPolynomial:
    """gamma_t for t in {0, 1, 2}."""
    S = EllipticSurface() if S is None else S
    if t == 0:
        return gamma0(S)
    if t == 1:
        return gamma1(S)
    if t == 2:
        return gamma2(S)
    raise ValueError("only t = 0, 1, 2 are computed")
