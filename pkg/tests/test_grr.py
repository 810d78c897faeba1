from functools import lru_cache

import pytest

from elliptic_donaldson.exact import RatFunc, var
from elliptic_donaldson.grr import (
    GrrContext,
    c1_L_general,
    c1_L_general_expected,
    c1_L_section_case,
    c1_L_section_expected,
    ch_P_section_case,
    correction_from_quotient,
    involuted,
    mu_extension_case,
    mu_extension_expected,
    mu_general,
    mu_general_expected,
    mu_section_case,
    mu_section_expected,
    mu_squared_general,
    mu_squared_general_expected,
    quotient_from_correction,
)
from elliptic_donaldson.prodcalc import ch_rank2_dual, push2, section_setting
from elliptic_donaldson.surface import EllipticSurface, todd_class, todd_coefficient

pg, m1, m2, e, d = (var(n) for n in ("pg", "m1", "m2", "e", "d"))
S2, kS, sS = var("S2"), var("kS"), var("sS")


@lru_cache(maxsize=None)
def general():
    return GrrContext.build()


def test_section_line_bundle_identically_in_pg():
    bundle = c1_L_section_case()
    assert bundle.alpha == c1_L_section_expected(bundle.setting)
    assert bundle.point_coefficient == (-5 * pg + 1) / 2
    assert bundle.rank == RatFunc(1)


def test_section_line_bundle_at_pg_one():
    bundle = c1_L_section_case(1)
    lat = bundle.setting.second
    assert bundle.alpha == lat.gen("sigma") * -3 - lat.gen("f") * 5


def test_section_top_degree_terms_of_ch_P_do_not_contribute():
    st = section_setting()
    lat = st.first
    c1 = lat.gen("sigma") * -3
    base = ch_rank2_dual(c1, (c1.square() + 3 * (pg + 1)) / 4) * todd_class(st.surface, lat)
    truncated = push2(st.left(base) * ch_P_section_case(st).truncate(6))
    bundle = c1_L_section_case(setting=st)
    assert truncated.part(2) == bundle.alpha
    assert bundle.top_degree == st.second.pt() * (3 * pg + 3)


def test_section_mu_matches_both_displays():
    st = section_setting()
    assert mu_section_case(setting=st) == mu_section_expected(st)
    assert mu_extension_case(setting=st) == mu_extension_expected(st)


def test_involution_exchanges_the_two_section_formulas():
    st = section_setting()
    grr_form, extension_form = mu_section_expected(st), mu_extension_expected(st)
    assert involuted(st, grr_form) == extension_form
    assert involuted(st, extension_form) == grr_form


def test_section_mu_squared():
    mu = mu_section_case()
    assert mu.square() / 16 == S2 + (pg - 1) * kS * kS


def test_general_line_bundle_identically():
    ctx = general()
    assert c1_L_general(ctx).alpha == c1_L_general_expected(ctx)


def test_general_line_bundle_pieces():
    ctx = general()
    bundle = c1_L_general(ctx)
    r = todd_coefficient(ctx.surface)
    M = var("d2") / 4 + RatFunc(5, 4) * (1 + pg) - r / 2 * (2 * e + 1)
    T = ctx.setting.second
    assert bundle.pieces["point"] == T.gen("f") * (M * d)
    assert bundle.pieces["codim3"].coefficient("sigma") == -2 * (e + 2)
    total = bundle.pieces["point"] + bundle.pieces["divisor"] + bundle.pieces["codim3"]
    assert total == bundle.alpha


def test_general_pipeline_specializes_to_section_case():
    ctx = GrrContext.build(m1=1, m2=1, e=-2, d=1)
    alpha = c1_L_general(ctx).alpha
    chi = pg + 1
    # delta = -3 sigma: delta^2 = -9 chi, phi^*delta . sigma = 3 chi.
    specialized = alpha.substitute({"d2": -9 * chi, "dsig": 3 * chi})
    assert specialized.coefficient("f") == -RatFunc(5, 2) * chi
    assert specialized.coefficient("sigma") == RatFunc(0)
    assert specialized.coefficient("pdelta") == RatFunc(1)


def test_general_mu_matches_display_with_symbolic_correction():
    ctx = general()
    mu = mu_general(ctx)
    assert mu == mu_general_expected(ctx)
    assert mu.coefficient("pSigma") == RatFunc(4)
    assert mu.coefficient("sigma") == -8 * (e + 2) * ctx.fiber_dot_sigma()


def test_general_mu_meets_fiber_in_twice_fiber_degree():
    ctx = general()
    f = ctx.setting.second.gen("f")
    assert mu_general(ctx).dot(f) / -4 == 2 * ctx.fiber_dot_sigma()


def test_correction_relation_round_trips():
    S = EllipticSurface()
    for i in (1, 2):
        c = correction_from_quotient(S, i, quotient_from_correction(S, i))
        assert c == var(f"c{i}")


def test_correction_vanishes_for_multiplicity_one():
    S = EllipticSurface(m1=1, m2=1)
    for i in (1, 2):
        assert correction_from_quotient(S, i, 0) == RatFunc(0)


def test_mu_squared_cancels_auxiliary_pairings():
    ctx = general()
    value = mu_squared_general(ctx)
    assert value == mu_squared_general_expected(ctx.surface)
    for name in ("dsig", "psig", "dS", "d2", "e", "d"):
        assert name not in value.free_symbols()


def test_mu_squared_after_correction_values():
    value = mu_squared_general_expected(EllipticSurface())
    c = {"c1": -1 + 1 / (m1 * m1), "c2": -1 + 1 / (m2 * m2)}
    closed = S2 + ((m1 * m2) ** 2 * (pg + 1) - m1 * m1 - m2 * m2) * kS * kS
    assert value.substitute(c) == closed
    trivial = value.substitute({"m1": 1, "m2": 1, "c1": 0, "c2": 0})
    assert trivial == S2 + (pg - 1) * kS * kS


@pytest.mark.parametrize("numbers", [(0, 3, 1, 1, 3), (2, 3, 5, -1, 15), (1, 5, 7, 2, 35)])
def test_general_mu_at_numeric_surfaces(numbers):
    p, a, b, ee, dd = numbers
    ctx = GrrContext.build(pg=p, m1=a, m2=b, e=ee, d=dd)
    assert mu_general(ctx) == mu_general_expected(ctx)
    assert c1_L_general(ctx).alpha == c1_L_general_expected(ctx)
