"""Registry of exact verification checks run by ``verify`` and by the acceptance tests.

Every check is a list of comparisons between a value produced by a pipeline and
an independently written closed form (or an independent oracle).  A check
passes when every comparison is an exact identity.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Sequence

from .curvesheaf import BundleDesc, CurveKind, SheafDesc, dim_hom_to_rank1, euler_characteristic_hom, h0_h1_rank1
from .donaldson import (
    constant_C1,
    gamma1,
    gamma1_expected,
    gamma2,
    gamma2_expected,
    solve_c,
    solve_d,
)
from .elemmod import p1_fiber_modification, p1_general_modification
from .exact import Poly, RatFunc, declare, var
from .grr import (
    GrrContext,
    c1_L_general,
    c1_L_general_expected,
    c1_L_section_case,
    c1_L_section_expected,
    involuted,
    mu_extension_case,
    mu_extension_expected,
    mu_general,
    mu_general_expected,
    mu_section_case,
    mu_section_expected,
    mu_squared_general,
    mu_squared_general_expected,
)
from .hilb2 import (
    correction_term,
    ey_coefficient_solve,
    ey_intersections,
    mu_prime,
    mu_prime_fourth,
    mu_prime_fourth_expected,
)
from .prodcalc import push2, section_setting
from .surface import (
    EllipticSurface,
    LatticeMap,
    SigmaPairings,
    canonical_class,
    coh_dims_section_case,
    involution,
    involution_pullback,
    section_lattice,
)

__all__ = ["CHECKS", "Comparison", "UnknownCheckError", "VerificationReport", "run_check", "run_checks"]


class UnknownCheckError(KeyError):
    """The selector names no registered check."""


def _render(x) -> str:
    if isinstance(x, (tuple, list)):
        return "(" + ", ".join(_render(v) for v in x) + ")"
    if isinstance(x, Fraction):
        return str(x)
    render = getattr(x, "render", None)
    return render() if callable(render) else str(x)


@dataclass(frozen=True)
class Comparison:
    label: str
    lhs: str
    rhs: str
    equal: bool


def _cmp(label: str, lhs, rhs) -> Comparison:
    return Comparison(label, _render(lhs), _render(rhs), bool(lhs == rhs))


@dataclass
class VerificationReport:
    """Outcome of one check; ``lhs``/``rhs`` show the first failing comparison, or the first one."""

    check_id: str
    statement: str
    status: str
    lhs: str
    rhs: str
    elapsed: float
    comparisons: List[Comparison] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "id": self.check_id,
            "statement": self.statement,
            "status": self.status,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "elapsed_seconds": round(self.elapsed, 6),
            "comparisons": [
                {"label": c.label, "lhs": c.lhs, "rhs": c.rhs, "equal": c.equal} for c in self.comparisons
            ],
        }


@dataclass(frozen=True)
class Check:
    check_id: str
    statement: str
    run: Callable[[], List[Comparison]]


# ---------------------------------------------------------------------------
# Section case on S x S
# ---------------------------------------------------------------------------


def _section_line_bundle() -> List[Comparison]:
    res = c1_L_section_case()
    st = res.setting
    pg = st.surface.pg
    lat = st.second
    return [
        _cmp("c1(L^-1)", res.alpha, c1_L_section_expected(st)),
        _cmp("rank of the pushforward", res.rank, RatFunc(1)),
        _cmp("point coefficient of ch(V0^dual) td(S)", res.point_coefficient, (1 - 5 * pg) / 2),
        _cmp("degree-four part", res.top_degree, lat.pt() * (3 * pg + 3)),
    ]


def _section_mu_map() -> List[Comparison]:
    st = section_setting()
    from_section = mu_section_case(setting=st)
    from_extension = mu_extension_case(setting=st)
    pg = st.surface.pg
    return [
        _cmp("-4 mu from the universal bundle", from_section, mu_section_expected(st)),
        _cmp("-4 mu from the extension construction", from_extension, mu_extension_expected(st)),
        _cmp("inversion carries the first to the second", involuted(st, from_section), from_extension),
        _cmp("inversion carries the second to the first", involuted(st, from_extension), from_section),
        _cmp("mu^2", from_section.square() / 16, var("S2") + (pg - 1) * var("kS") ** 2),
    ]


# ---------------------------------------------------------------------------
# Two multiple fibers, through the cover
# ---------------------------------------------------------------------------


def _general_line_bundle() -> List[Comparison]:
    ctx = GrrContext.build()
    general = c1_L_general(ctx)
    out = [
        _cmp("c1(L^-1) on T", general.alpha, c1_L_general_expected(ctx)),
        _cmp("rank of the pushforward", general.rank, RatFunc(1)),
    ]
    # Specialize to m1 = m2 = 1, d = 1, e = -2, delta = -3 sigma: T becomes the section surface.
    special = GrrContext.build(m1=1, m2=1, e=-2, d=1)
    st = section_setting()
    chi = st.surface.chi
    lat = st.second
    to_section = LatticeMap(
        special.setting.second,
        lat,
        {"sigma": lat.gen("sigma"), "f": lat.gen("f"), "pdelta": lat.gen("sigma") * -3, "pSigma": lat.gen("Sigma")},
        lat.pt(),
    )
    bindings = {"d2": -9 * chi, "dsig": 3 * chi, "psig": var("sS")}
    specialized = to_section(c1_L_general(special).alpha.substitute(bindings))
    out.append(_cmp("specialization to the section case", specialized, c1_L_section_expected(st)))
    return out


def _general_mu_map() -> List[Comparison]:
    ctx = GrrContext.build()
    return [_cmp("-4 mu~ with c(e, m_i) symbolic", mu_general(ctx), mu_general_expected(ctx))]


def _mu_squared_cancellation() -> List[Comparison]:
    ctx = GrrContext.build()
    mu4 = mu_general(ctx)
    squared = mu4.square()
    leftover = squared.free_symbols() & {"dsig", "psig", "dS", "d2", "e"}
    S = ctx.surface
    return [
        _cmp("(-4 mu~)^2", squared, 16 * ctx.d * mu_squared_general_expected(S)),
        _cmp("cancelled indeterminates", sorted(leftover), []),
        _cmp("mu^2 after dividing by 16 d", mu_squared_general(ctx, mu4), mu_squared_general_expected(S)),
    ]


# ---------------------------------------------------------------------------
# Interpolation and assembly
# ---------------------------------------------------------------------------


def _gamma1_assembly() -> List[Comparison]:
    m = var("m1")
    S = EllipticSurface()
    return [
        _cmp("c(e, m)", solve_c(m), -1 + 1 / (m * m)),
        _cmp("c(e, 1)", solve_c(1), RatFunc(0)),
        _cmp("c(e, 3)", solve_c(3), RatFunc(Fraction(-8, 9))),
        _cmp("gamma_1", gamma1(S), gamma1_expected(S)),
        _cmp("C1 at (0, 3, 1)", constant_C1(EllipticSurface(0, 3, 1)), RatFunc(-1)),
        _cmp("C1 at (3, 1, 1)", constant_C1(EllipticSurface(3, 1, 1)), RatFunc(2)),
    ]


def _hilb2_quartic() -> List[Comparison]:
    S = EllipticSurface()
    alpha1_sq = var("S2") + constant_C1(S) * var("kS") ** 2
    computed = mu_prime_fourth(S, alpha1_sq)
    one = EllipticSurface(pg=0, m1=1, m2=1)
    top = mu_prime_fourth(one, var("S2") + constant_C1(one) * var("kS") ** 2)
    return [
        _cmp("mu'^4", computed, mu_prime_fourth_expected(S)),
        _cmp("(kS)^4 coefficient at pg = 0, m = 1", top.substitute({"S2": 0, "kS": 1}), RatFunc(5)),
    ]


def _gamma2_assembly() -> List[Comparison]:
    m = var("m1")
    S = EllipticSurface()
    pg = var("pg")
    unit = gamma2(EllipticSurface(m1=1, m2=1)).coefficient(0, 4)
    return [
        _cmp("d(e, m)", solve_d(m), 2 / m**4 - 8 / m + 6),
        _cmp("d(e, 1)", solve_d(1), RatFunc(0)),
        _cmp("d(e, 3)", solve_d(3), RatFunc(Fraction(272, 81))),
        _cmp("gamma_2", gamma2(S), gamma2_expected(S)),
        _cmp("(fS)^4 coefficient at m = 1", unit, (pg - 1) * (3 * pg - 5)),
        _cmp("same, through the unit-multiplicity closed form", unit, 3 * (pg + 1) * (pg - 1) - 8 * (pg - 1)),
        _cmp("(fS)^4 coefficient at pg = 0, m = 1", unit.substitute({"pg": 0}), RatFunc(5)),
        _cmp("correction at m = 1", correction_term(EllipticSurface(m1=1, m2=1)), RatFunc(0)),
    ]


def _fiber_degree_and_ey() -> List[Comparison]:
    ctx = GrrContext.build()
    fS = ctx.fiber_dot_sigma()
    st = section_setting()
    on_T = mu_general(ctx).dot(ctx.setting.second.gen("f")) / -4
    on_S = mu_section_case(setting=st).dot(st.second.gen("f")) / -4
    S = ctx.surface
    return [
        _cmp("mu(Sigma).f on T", on_T, 2 * fS),
        _cmp("mu(Sigma).f with a section", on_S, 2 * var("kS")),
        _cmp("(mu'.E_y, E.E_y)", ey_intersections(fS), (fS, RatFunc(-2))),
        _cmp("E-coefficient from the E_y solve", ey_coefficient_solve(fS), -fS / 2),
        _cmp("E-coefficient used for mu'", mu_prime(S, var("S2")).e_coef, -fS / 2),
    ]


# ---------------------------------------------------------------------------
# Dimension counts and p1 bookkeeping
# ---------------------------------------------------------------------------


def _section_table(a: int) -> tuple:
    """Transcribed piecewise table for (h0, h1, h2) of -sigma + (pg+1-a) f."""
    h1 = 0 if a > 0 else -a + 1
    h2 = a - 1 if a >= 2 else 0
    return (0, h1, h2)


def _riemann_roch_section(a: int, pg: int) -> RatFunc:
    """chi(L) = chi(O_S) + (L^2 - L.K)/2 from the lattice."""
    S = EllipticSurface.with_section(pg)
    lat = section_lattice(S)
    L = -lat.gen("sigma") + lat.gen("f") * (pg + 1 - a)
    K = canonical_class(S, lat)
    return S.chi + (L.square() - L.dot(K)) / 2


def _hom_oracle_rows(e: int, d: int):
    """(label, dim from the formulas, chi oracle) wherever h^1 vanishes."""
    smooth = CurveKind.SMOOTH
    lam = SheafDesc(smooth, d)
    stable = BundleDesc.stable(smooth, e)
    if d >= e + 1:
        yield f"stable e={e} d={d}", dim_hom_to_rank1(stable, lam).dim, euler_characteristic_hom(stable, lam)
    for l1 in range(e - 2, e + 1):
        split = BundleDesc.split(smooth, l1, 2 * e + 1 - l1)
        h1 = sum(h0_h1_rank1(SheafDesc(smooth, d - deg))[1] for deg in (split.deg_l1, split.deg_l2))
        if h1 == 0:
            yield f"split {l1}+{split.deg_l2} d={d}", dim_hom_to_rank1(split, lam).dim, euler_characteristic_hom(split, lam)
    nodal_lam = SheafDesc(CurveKind.NODAL, d)
    for n in range(1, 4):
        vn = BundleDesc.nodal_vn(n, e)
        if d > e + n:
            yield f"V_n n={n} e={e} d={d}", dim_hom_to_rank1(vn, nodal_lam).dim, euler_characteristic_hom(vn, nodal_lam)


def _dimension_oracles() -> List[Comparison]:
    out = []
    pg = 3
    for a in range(-3, 5):
        h = coh_dims_section_case(a, pg)
        out.append(_cmp(f"(h0, h1, h2) at a={a}", h, _section_table(a)))
        out.append(_cmp(f"Euler characteristic at a={a}", RatFunc(h[0] - h[1] + h[2]), _riemann_roch_section(a, pg)))
    mismatched = []
    for e in range(-5, 6):
        for d in range(-5, 6):
            for label, dim, chi in _hom_oracle_rows(e, d):
                if dim != chi:
                    mismatched.append(label)
    out.append(_cmp("Hom dimensions disagreeing with chi", mismatched, []))
    e, p1 = var("e"), var(declare("p1old"))
    out.append(_cmp("one allowable step at deg Q = e+1", p1_fiber_modification(p1, 2 * e + 1, e + 1) - p1, RatFunc(-2)))
    restricted, quotient = var("d1"), var("d2c")
    out.append(
        _cmp(
            "general modification along a fiber",
            p1_general_modification(p1, restricted, RatFunc(0), quotient),
            p1_fiber_modification(p1, restricted, quotient),
        )
    )
    return out


# ---------------------------------------------------------------------------
# Deterministic property sample
# ---------------------------------------------------------------------------

_SAMPLE_VARS = ("pg", "m1", "m2", "kS")


def _random_poly(rng: random.Random) -> Poly:
    total = Poly()
    for _ in range(rng.randint(1, 3)):
        exps = {v: rng.randint(0, 2) for v in rng.sample(_SAMPLE_VARS, 2)}
        total = total + Poly.monomial(exps, Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
    return total


def _random_ratfunc(rng: random.Random) -> RatFunc:
    # Mostly monomial denominators keep 1000 cases fast; every fifth draw is general.
    if rng.randrange(5):
        exps = {v: rng.randint(0, 2) for v in rng.sample(_SAMPLE_VARS, 2)}
        den = Poly.monomial(exps, rng.choice((1, 2, 3, -1)))
    else:
        den = _random_poly(rng)
        while den.is_zero():
            den = _random_poly(rng)
    return RatFunc(_random_poly(rng), den)


def _field_axiom_failures(rng: random.Random, cases: int) -> List[str]:
    failures = []
    for i in range(cases):
        a, b, c = (_random_ratfunc(rng) for _ in range(3))
        if (a + b) + c != a + (b + c) or a * b != b * a or a * (b + c) != a * b + a * c:
            failures.append(f"ring axioms, case {i}")
        if not b.is_zero() and (a / b) * b != a:
            failures.append(f"division, case {i}")
        point = {v: Fraction(rng.randint(-7, 7), rng.randint(1, 5)) for v in _SAMPLE_VARS}
        try:
            lhs = (a * b + c).substitute(point)
            rhs = a.substitute(point) * b.substitute(point) + c.substitute(point)
        except ZeroDivisionError:
            continue
        if lhs != rhs:
            failures.append(f"substitution, case {i}")
    return failures


def _random_surface_class(rng: random.Random, lat, degree: int):
    if degree == 0:
        return lat.one() * rng.randint(-3, 3)
    if degree == 4:
        return lat.pt() * rng.randint(-3, 3)
    total = lat.zero()
    for g in lat.generators:
        total = total + lat.gen(g) * rng.randint(-3, 3)
    return total


def _prodcalc_failures(rng: random.Random, cases: int) -> List[str]:
    st = section_setting()
    lat = st.first
    failures = []
    for i in range(cases):
        da, db, dc, dd = (rng.choice((0, 2, 4)) for _ in range(4))
        a, b, c, dd_class = (_random_surface_class(rng, lat, k) for k in (da, db, dc, dd))
        x = st.kunneth(a, b)
        y = st.kunneth(c, dd_class)
        prod = x * y
        if not prod.is_zero() and prod.degrees() != {da + db + dc + dd}:
            failures.append(f"degree additivity, case {i}")
        if x * y != y * x:
            failures.append(f"commutativity, case {i}")
        # Projection formula: pi2_*(x . pi2^*c) = pi2_*(x) . c, also for graph classes.
        z = x + st.graph(_random_surface_class(rng, lat, rng.choice((0, 2))))
        if push2(z * st.right(c)) != push2(z).cup(c):
            failures.append(f"projection formula, case {i}")
    return failures


def _involution_failures(rng: random.Random, cases: int) -> List[str]:
    failures = []
    symbolic = SigmaPairings.symbolic()
    pg = var("pg")
    twice = involution_pullback(involution_pullback(symbolic, pg), pg)
    if twice != symbolic or involution_pullback(symbolic, pg).self_square != symbolic.self_square:
        failures.append("symbolic pairings")
    st = section_setting()
    iota = involution(st.second, pg)
    Sigma = st.second.gen("Sigma")
    if iota(iota(Sigma)) != Sigma or iota(Sigma).square() != Sigma.square():
        failures.append("lattice map")
    for i in range(cases):
        p = SigmaPairings(*(RatFunc(Fraction(rng.randint(-20, 20), rng.randint(1, 6))) for _ in range(3)))
        g = rng.randint(0, 9)
        once = involution_pullback(p, g)
        if involution_pullback(once, g) != p or once.self_square != p.self_square:
            failures.append(f"numeric pairings, case {i}")
    return failures


def _property_sample() -> List[Comparison]:
    rng = random.Random(20240601)
    return [
        _cmp("field axioms and substitution (1000 cases)", _field_axiom_failures(rng, 1000), []),
        _cmp("product calculus (100 cases)", _prodcalc_failures(rng, 100), []),
        _cmp("involution (200 cases)", _involution_failures(rng, 200), []),
    ]


CHECKS: Dict[str, Check] = {
    c.check_id: c
    for c in (
        Check(
            "section-line-bundle",
            "c1(L^-1) = -3 sigma - (5/2)(pg+1) f on a surface with a section, with point coefficient (1-5pg)/2",
            _section_line_bundle,
        ),
        Check(
            "section-mu-map",
            "both constructions of -4 mu(Sigma) match their closed forms, are exchanged by the inversion, and mu^2 = (S2) + (pg-1)(fS)^2",
            _section_mu_map,
        ),
        Check(
            "general-line-bundle",
            "c1(L^-1) on the cover T matches its closed form and specializes to the section case",
            _general_line_bundle,
        ),
        Check(
            "general-mu-map",
            "x1^2 - 4 x2 - 4 c2(Q) slanted with Sigma equals the closed form for -4 mu~(Sigma)",
            _general_mu_map,
        ),
        Check(
            "mu-squared-cancellation",
            "(-4 mu~)^2 = 16 d (S2) + 16 d (pg-1-c1-c2)(fS)^2 with every auxiliary pairing cancelled",
            _mu_squared_cancellation,
        ),
        Check(
            "gamma1-assembly",
            "c(e, m) = -1 + 1/m^2 and gamma_1 = (S2) + C1 (kS)^2",
            _gamma1_assembly,
        ),
        Check(
            "hilb2-quartic",
            "(D_alpha2 - (fS/2) E)^4 equals the closed quartic in (S2) and (kS)",
            _hilb2_quartic,
        ),
        Check(
            "gamma2-assembly",
            "d(e, m) = 2/m^4 - 8/m + 6 and gamma_2 = 3(S2)^2 + 6 C1 (S2)(kS)^2 + (3 C1^2 - 2 C2)(kS)^4",
            _gamma2_assembly,
        ),
        Check(
            "fiber-degree-and-ey",
            "mu(Sigma).f = 2(fS), (mu'.E_y, E.E_y) = (fS, -2), and the E-coefficient is -(fS)/2",
            _fiber_degree_and_ey,
        ),
        Check(
            "dimension-oracles",
            "cohomology table, Hom dimensions against Riemann-Roch, and p1 changes under modifications",
            _dimension_oracles,
        ),
        Check(
            "algebraic-properties",
            "field axioms, product-calculus identities, and the inversion on Sigma-pairings",
            _property_sample,
        ),
    )
}


def run_check(check_id: str) -> VerificationReport:
    try:
        check = CHECKS[check_id]
    except KeyError:
        raise UnknownCheckError(check_id) from None
    start = time.perf_counter()
    try:
        comparisons = check.run()
    except Exception as exc:  # a crashing pipeline is a failed check, not a crashed run
        comparisons = [Comparison("exception", type(exc).__name__, str(exc), False)]
    elapsed = time.perf_counter() - start
    failing = [c for c in comparisons if not c.equal]
    shown = failing[0] if failing else comparisons[0]
    return VerificationReport(
        check_id,
        check.statement,
        "fail" if failing else "pass",
        shown.lhs,
        shown.rhs,
        elapsed,
        comparisons,
    )


def run_checks(selector: str = "all") -> List[VerificationReport]:
    if selector == "all":
        ids: Sequence[str] = list(CHECKS)
    elif selector in CHECKS:
        ids = [selector]
    else:
        raise UnknownCheckError(selector)
    return [run_check(i) for i in ids]
