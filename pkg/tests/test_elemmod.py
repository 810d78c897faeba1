from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from elliptic_donaldson.elemmod import (
    BundleInvariants,
    ModificationSpec,
    allowable,
    destabilizing_range,
    dual_quotient_degree,
    extension_types,
    generic_step_degree,
    modification_count_bound,
    p1_fiber_modification,
    p1_general_modification,
    section_case_extension_solve,
    step_count_holds,
    trace_modifications,
)
from elliptic_donaldson.exact import RatFunc, var
from elliptic_donaldson.surface import EllipticSurface, moduli_dimension


def test_trivial_general_modification_leaves_p1():
    assert p1_general_modification(-9, 0, 0, 0) == -9


def test_general_modification_on_product_with_symbolic_data():
    p1, c1D, D2, L = var("p1old"), var("c1"), var("d2"), var("d1")
    assert p1_general_modification(p1, c1D, D2, L) == p1 + 2 * c1D + D2 - 4 * L


def test_allowable_step_on_reduced_fiber_lowers_p1_by_two():
    for e in range(-4, 5):
        new = p1_fiber_modification(RatFunc(-3), 2 * e + 1, e + 1)
        assert new == RatFunc(-5)


def test_multiple_fiber_step_lowers_p1_by_two():
    spec = ModificationSpec(3, 1)
    assert spec.restricted_degree(1) == 1
    assert p1_fiber_modification(0, spec.restricted_degree(1), 1) == RatFunc(-2)


def test_dual_quotient_degree():
    assert dual_quotient_degree(Fraction(3, 2)) == Fraction(-3, 2)
    assert dual_quotient_degree(-4) == 4


def test_bad_direction_rejected():
    with pytest.raises(ValueError):
        p1_fiber_modification(0, 1, 1, direction="sideways")


@given(st.integers(-50, 50), st.integers(-7, 7), st.integers(-7, 7))
def test_kernel_and_extension_directions_are_inverse(p1, restricted, quotient):
    there = p1_fiber_modification(p1, restricted, quotient, "kernel")
    assert p1_fiber_modification(there, restricted, quotient, "extension") == RatFunc(p1)


@given(st.integers(-20, 20), st.integers(-6, 6), st.integers(-6, 6))
def test_general_rule_along_fiber_matches_fiber_rule(p1, e, deg_q):
    # A reduced fiber F has F^2 = 0 and c1(V0).F = 2e+1.
    general = p1_general_modification(RatFunc(p1), 2 * e + 1, 0, deg_q)
    assert general == p1_fiber_modification(p1, 2 * e + 1, deg_q)


def test_allowable_examples():
    for e in range(-3, 4):
        assert allowable(ModificationSpec(1, e + 1), e)
        assert not allowable(ModificationSpec(1, e), e)
    assert allowable(ModificationSpec(3, 1), 1)
    assert not allowable(ModificationSpec(3, 0), 1)


@given(st.integers(-10, 10), st.integers(-12, 12))
def test_reduced_fiber_allowability_is_degree_at_least_e_plus_one(e, deg_q):
    assert allowable(ModificationSpec(1, deg_q), e) == (deg_q >= e + 1)


@given(st.integers(-5, 5), st.sampled_from([1, 3, 5, 7]), st.integers(0, 4), st.integers(1, 5))
def test_allowable_chains_strictly_lower_p1(e, m, start, count):
    spec = ModificationSpec(m, Fraction(2 * e + 1, 2 * m) + Fraction(1, 2))
    assert allowable(spec, e)
    values = trace_modifications(-3 * start, e, [spec] * count)
    previous = RatFunc(-3 * start)
    for value in values:
        assert (previous - value).to_fraction() >= 2
        previous = value


def test_trace_refuses_non_allowable_unless_forced():
    bad = ModificationSpec(1, 0)
    with pytest.raises(ValueError):
        trace_modifications(-3, 0, [bad])
    assert trace_modifications(-3, 0, [bad], force=True) == [RatFunc(-1)]


def test_modification_spec_rejects_zero_multiplicity():
    with pytest.raises(ValueError):
        ModificationSpec(0, 1)


def test_count_bound_examples():
    assert modification_count_bound(-3, -3) == 0
    for t in range(6):
        assert modification_count_bound(-3, -3 - 2 * t) == t
    assert modification_count_bound(0, -3) == 1
    with pytest.raises(ValueError):
        modification_count_bound(-5, -3)


def test_generic_step_degree():
    assert generic_step_degree(0) == 1
    assert generic_step_degree(-2) == -1
    for e in range(-5, 6):
        assert generic_step_degree(e) == e + 1
        assert step_count_holds(e, e + 1)
        assert not step_count_holds(e, e + 2)


def test_section_extension_solve_examples():
    assert section_case_extension_solve(1, 2, 2, 0, 2) == (2, 0)
    assert section_case_extension_solve(1, 2, 0, 0, 1) == (1, -1)


def test_section_extension_solve_rejects_bad_input():
    with pytest.raises(ValueError):
        section_case_extension_solve(2, 2, 0, 0, 1)
    with pytest.raises(ValueError):
        section_case_extension_solve(1, 2, 3, 0, 1)
    with pytest.raises(ValueError):
        section_case_extension_solve(1, 2, 0, 0, 2)


@given(st.integers(0, 6), st.data())
def test_extension_solve_keeps_s_at_most_t(t, data):
    r = data.draw(st.integers(0, t))
    u = data.draw(st.integers(0, r))
    twice = t + r - 2 * u
    if twice % 2:
        return
    s, twist = section_case_extension_solve(3, t, r, u, twice // 2)
    assert 0 <= s <= t
    assert twist == u + s - t


def test_extension_types_for_t_two():
    shapes = extension_types(1)
    assert [s.label for s in shapes] == ["Type 1", "Type 2", "Type 3", "Type 4"]
    assert [s.s for s in shapes] == [2, 1, 0, 1]
    assert [s.locally_free for s in shapes] == [True, True, True, False]
    with pytest.raises(ValueError):
        extension_types(2)


def test_destabilizing_range():
    assert destabilizing_range(2, 1, 1, 1) == (3, 3)
    assert destabilizing_range(2, 1, 2, 0) == (1, 3)
    assert destabilizing_range(0, 0, 0, 0) == (0, 0)
    with pytest.raises(ValueError):
        destabilizing_range(1, 1, 0, 1)


def test_bundle_invariants_follow_fiber_rule():
    V0 = BundleInvariants(c1_sq=-9, c1_dot_f=1, c2=-3)
    assert V0.p1 == RatFunc(3)
    assert V0.e == RatFunc(0)
    V = V0.modified_along_fiber(1, 1)
    assert V.p1 == V0.p1 - 2
    assert V.c1_sq == RatFunc(-11)


def test_zero_dimensional_moduli_exactly_at_minus_three_chi():
    S = EllipticSurface(pg=2)
    assert moduli_dimension(-3 * S.chi, S) == RatFunc(0)
    assert moduli_dimension(-3 * S.chi - 2, S) != RatFunc(0)
