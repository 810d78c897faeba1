"""Shared strategies and the sympy oracle used across the test modules."""

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from elliptic_donaldson.exact import Poly, RatFunc

SAMPLE_VARS = ("pg", "m1", "m2", "kS")
SYMPY_VARS = {name: sympy.Symbol(name) for name in SAMPLE_VARS}


def to_sympy(x: RatFunc):
    """Parse the rendered form with sympy; an independent reading of the value."""
    num = sympy.sympify(x.num.render().replace("^", "**"), locals=SYMPY_VARS)
    den = sympy.sympify(x.den.render().replace("^", "**"), locals=SYMPY_VARS)
    return num / den


def sympy_equal(a, b) -> bool:
    # cancel() can hand back an unevaluated sum such as -4 + 4, so compare the
    # expanded numerator of the difference instead.
    return sympy.expand(sympy.numer(sympy.together(a - b))) == 0


small_fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def polys(draw, max_terms: int = 3, max_exp: int = 2):
    total = Poly()
    for _ in range(draw(st.integers(1, max_terms))):
        names = draw(st.lists(st.sampled_from(SAMPLE_VARS), min_size=0, max_size=2, unique=True))
        exps = {n: draw(st.integers(0, max_exp)) for n in names}
        total = total + Poly.monomial(exps, draw(small_fractions))
    return total


@st.composite
def ratfuncs(draw):
    den = draw(polys().filter(lambda p: not p.is_zero()))
    return RatFunc(draw(polys()), den)


bindings = st.fixed_dictionaries({name: small_fractions for name in SAMPLE_VARS})
