from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elliptic_donaldson.exact import RatFunc, var
from elliptic_donaldson.surface import (
    DivisorData,
    EllipticSurface,
    SigmaPairings,
    base_lattice,
    c2_of_V0,
    canonical_class,
    canonical_coefficient,
    coh_dims_section_case,
    cover_lattice,
    dim_parity,
    involution,
    involution_pullback,
    moduli_dimension,
    section_lattice,
    suitability_check,
    todd_class,
    todd_coefficient,
)

pg, m1, m2 = var("pg"), var("m1"), var("m2")


def test_surface_validation():
    with pytest.raises(ValueError):
        EllipticSurface(pg=0, m1=2, m2=1)
    with pytest.raises(ValueError):
        EllipticSurface(pg=-1, m1=1, m2=1)
    S = EllipticSurface.with_section(3)
    assert S.m1 == RatFunc(1) and S.m2 == RatFunc(1)
    assert S.chi == RatFunc(4)
    assert S.euler_number == RatFunc(48)


def test_canonical_class_unit_multiplicities():
    assert canonical_coefficient(EllipticSurface(1, 1, 1)) == RatFunc(0)
    assert canonical_coefficient(EllipticSurface(m1=1, m2=1)) == pg - 1


def test_canonical_class_multiple_fiber():
    S = EllipticSurface(0, 3, 1)
    lat = base_lattice(S)
    assert canonical_class(S, lat) == -lat.gen("kappa")


def test_canonical_class_expands_fiber_components():
    S = EllipticSurface()
    # (pg-1) f + (m1-1) f/m1 + (m2-1) f/m2 with f = m1 m2 kappa.
    expected = (pg - 1) * m1 * m2 + (m1 - 1) * m2 + (m2 - 1) * m1
    assert canonical_coefficient(S) == expected


def test_todd_data():
    assert todd_coefficient(EllipticSurface(m1=1, m2=1)) == 1 - pg
    assert todd_coefficient(EllipticSurface()) == -(pg + 1) + 1 / m1 + 1 / m2
    S = EllipticSurface.with_section(0)
    lat = section_lattice(S)
    assert todd_class(S, lat) == lat.one() + lat.gen("f") / 2 + lat.pt()


def test_todd_top_degree_integrates_to_chi():
    S = EllipticSurface()
    assert todd_class(S, base_lattice(S)).integral() == pg + 1


def test_moduli_dimension():
    S = EllipticSurface()
    assert moduli_dimension(-3 * (pg + 1), S) == RatFunc(0)
    assert moduli_dimension(-3 * (pg + 1) - 2, S) == RatFunc(2)
    t = var("kS")
    assert moduli_dimension(-3 * (pg + 1) - 2 * t, S) == 2 * t


def test_dim_parity():
    assert dim_parity(-12, 3) == 0
    assert dim_parity(-14, 3) == 1
    with pytest.raises(ValueError):
        dim_parity(-13, 3)
    with pytest.raises(ValueError):
        dim_parity(-10, 3)


def test_c2_of_V0():
    S = EllipticSurface.with_section()
    lat = section_lattice(S)
    delta_sq = (lat.gen("sigma") * -3).square()
    assert c2_of_V0(S, delta_sq) == -Fraction(3, 2) * (pg + 1)
    assert c2_of_V0(EllipticSurface(), -3 * (pg + 1)) == RatFunc(0)
    assert c2_of_V0(EllipticSurface(pg=1), 2) == RatFunc(2)


@pytest.mark.parametrize("a, expected", [(0, (0, 1, 0)), (2, (0, 0, 1)), (1, (0, 0, 0)), (-3, (0, 4, 0)), (4, (0, 0, 3))])
def test_coh_dims_section_case(a, expected):
    assert coh_dims_section_case(a, 3) == expected


@given(st.integers(-20, 20), st.integers(0, 15))
def test_coh_dims_match_riemann_roch(a, genus):
    S = EllipticSurface.with_section(genus)
    lat = section_lattice(S)
    L = -lat.gen("sigma") + lat.gen("f") * (genus + 1 - a)
    K = canonical_class(S, lat)
    h0, h1, h2 = coh_dims_section_case(a, genus)
    assert RatFunc(h0 - h1 + h2) == S.chi + (L.square() - L.dot(K)) / 2


def test_suitability_examples():
    D0 = DivisorData(Fraction(1), Fraction(0), Fraction(0), Fraction(0))
    # f.(2D - Delta) = 0 passes.
    assert suitability_check([D0], fiber_delta=2, polarization_delta=7, c=10) == [True]
    D1 = DivisorData(Fraction(2), Fraction(3), Fraction(0), Fraction(0))
    assert suitability_check([D1], fiber_delta=1, polarization_delta=1, c=10) == [True]
    D2 = DivisorData(Fraction(2), Fraction(0), Fraction(0), Fraction(0))
    assert suitability_check([D2], fiber_delta=1, polarization_delta=1, c=10) == [False]
    # Outside the bound -D^2 + D.Delta <= c there is no condition.
    assert suitability_check([D2], fiber_delta=1, polarization_delta=1, c=-1) == [True]


def test_lattice_relations():
    S = EllipticSurface()
    lat = base_lattice(S)
    f, kappa = lat.gen("f"), lat.gen("kappa")
    assert f.square() == RatFunc(0)
    assert f.dot(kappa) == RatFunc(0)
    assert f == kappa * (m1 * m2)
    assert f.dot(lat.gen("delta")) == 2 * var("e") + 1
    for a in lat.generators:
        for b in lat.generators:
            assert lat.pair(a, b) == lat.pair(b, a)


def test_cover_section_square():
    S = EllipticSurface()
    T = cover_lattice(S)
    assert T.gen("sigma").square() == -var("d") * (pg + 1)
    assert T.gen("sigma").dot(T.gen("f")) == RatFunc(1)


def test_section_square():
    lat = section_lattice(EllipticSurface.with_section())
    assert lat.gen("sigma").square() == -(pg + 1)


def test_involution_fixes_fiber_and_section():
    lat = section_lattice(EllipticSurface.with_section())
    iota = involution(lat, pg)
    assert iota(lat.gen("f")) == lat.gen("f")
    assert iota(lat.gen("sigma")) == lat.gen("sigma")
    # Sigma = sigma in the pullback formula: -sigma + 2[-(pg+1) + (pg+1)] f + 2 sigma = sigma.
    sigma_pairings = SigmaPairings(-(pg + 1), RatFunc(1), -(pg + 1))
    assert involution_pullback(sigma_pairings, pg) == sigma_pairings


def test_involution_pullback_symbolic():
    p = SigmaPairings.symbolic()
    once = involution_pullback(p, pg)
    assert once.self_square == p.self_square
    assert once.fiber == p.fiber
    assert involution_pullback(once, pg) == p


@settings(max_examples=300)
@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30), st.integers(0, 20))
def test_involution_pullback_is_an_involution(s2, fs, ss, genus):
    p = SigmaPairings(RatFunc(s2), RatFunc(fs), RatFunc(ss))
    once = involution_pullback(p, genus)
    assert involution_pullback(once, genus) == p
    assert once.self_square == p.self_square
