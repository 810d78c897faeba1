"""Grothendieck-Riemann-Roch pipelines for the universal line bundle and the mu map.

Two families of computations live here.

On S x S for a surface with a section (fiber degree -3, c1(V0) = -3 sigma):
the line bundle L^{-1} = pi2_*(pi1^*V0^dual (x) P), with P = I_diag / I_D,
has c1 computed by pushing ch(V0^dual) Todd(S) ch(P) forward; the universal
bundle's p1(ad) then follows from the elementary-modification formula.  An
independent construction through an extension along the diagonal, modified
along S x sigma, gives the second formula for -4 mu(Sigma).

On S x T for the base-changed surface T -> S of degree d: the same pushforward
with P = i_* O(-Gamma + (e+2) H) on the normalized fiber product, and the
universal class p1 = x1^2 - 4 x2 - 4 c2(Q) whose slant product gives
-4 mu~(Sigma) on T.

Everything is kept exactly; classes that do not affect the slant product are
carried along and dropped only when a slant or a degree projection is taken.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

from .elemmod import p1_general_modification
from .exact import RatFunc, as_ratfunc, declare, var
from .prodcalc import (
    FiberDivisor,
    ProductClass,
    ProductSetting,
    ch_diagonal_structure,
    ch_P_general,
    ch_rank2_dual,
    cover_setting,
    exp_series,
    push2,
    section_setting,
    slant,
)
from .surface import (
    EllipticSurface,
    SurfaceClass,
    c2_of_V0,
    involution,
    todd_class,
)

__all__ = [
    "GeneralLineBundle",
    "GrrContext",
    "SectionLineBundle",
    "c1_L_general",
    "c1_L_general_expected",
    "c1_L_section_case",
    "c1_L_section_expected",
    "correction_from_quotient",
    "elementary_modification_p1",
    "mu_extension_expected",
    "mu_general",
    "mu_general_expected",
    "mu_section_case",
    "mu_section_expected",
    "mu_squared_general",
    "mu_squared_general_expected",
    "p1_extension_case",
    "p1_universal_general",
    "p1_universal_section_case",
    "quotient_from_correction",
]

# Second Chern numbers of the quotient sheaves at the two multiple fibers.
QUOTIENT_NAMES = (declare("q1"), declare("q2"))
CORRECTION_NAMES = ("c1", "c2")


def elementary_modification_p1(p1_old, c1_old, divisor, pushed_c1):
    """p1(ad V) for the kernel V of V0 -> i_*L along a divisor D.

    Works for numbers and for classes on a product alike:
    p1(ad V) = p1(ad V0) + 2 c1(V0) D + D^2 - 4 i_*c1(L).
    """
    return p1_general_modification(p1_old, c1_old * divisor, divisor * divisor, pushed_c1)


# ---------------------------------------------------------------------------
# Surfaces with a section
# ---------------------------------------------------------------------------


@dataclass
class SectionLineBundle:
    """Outcome of the section-case pushforward."""

    alpha: SurfaceClass
    rank: RatFunc
    point_coefficient: RatFunc
    top_degree: SurfaceClass
    setting: ProductSetting = field(repr=False)


def _section_v0(setting: ProductSetting):
    lat = setting.first
    S = setting.surface
    c1 = lat.gen("sigma") * -3
    c2 = c2_of_V0(S, c1.square())
    return c1, c2


def ch_P_section_case(setting: ProductSetting) -> ProductClass:
    """ch(I_diag / I_D) = ch O_D - ch O_diag, exact through degree 8."""
    D = setting.fiber_product()
    ch_OD = setting.kunneth() - exp_series(-D)
    return ch_OD - ch_diagonal_structure(setting)


def c1_L_section_case(pg=None, setting: Optional[ProductSetting] = None) -> SectionLineBundle:
    """c1 of pi2_*(pi1^*V0^dual (x) P) on S x S for a surface with a section."""
    st = section_setting(pg) if setting is None else setting
    c1, c2 = _section_v0(st)
    base = ch_rank2_dual(c1, c2) * todd_class(st.surface, st.first)
    pushed = push2(st.left(base) * ch_P_section_case(st))
    return SectionLineBundle(
        alpha=pushed.part(2),
        rank=pushed.unit,
        point_coefficient=base.point,
        top_degree=pushed.part(4),
        setting=st,
    )


def c1_L_section_expected(setting: ProductSetting) -> SurfaceClass:
    lat = setting.second
    chi = setting.surface.chi
    return lat.gen("sigma") * -3 - lat.gen("f") * (chi * 5 / 2)


def p1_universal_section_case(pg=None, setting: Optional[ProductSetting] = None) -> ProductClass:
    """p1(ad V) of the universal bundle on S x S (every term kept)."""
    st = section_setting(pg) if setting is None else setting
    c1, c2 = _section_v0(st)
    alpha = c1_L_section_case(setting=st).alpha
    D = st.fiber_product()
    p1_v0 = c1.square() - 4 * c2
    # c1 of P (x) pi2^*L on D is -diag - pi2^*alpha.
    pushed = FiberDivisor(st, graph=-1, pullback=st.right(-alpha)).push()
    return elementary_modification_p1(st.left(st.first.pt() * p1_v0), st.left(c1), D, pushed)


def mu_section_case(pg=None, setting: Optional[ProductSetting] = None) -> SurfaceClass:
    """-4 mu(Sigma) from the GRR construction."""
    st = section_setting(pg) if setting is None else setting
    return slant(p1_universal_section_case(setting=st).part(4))


def mu_section_expected(setting: ProductSetting) -> SurfaceClass:
    lat = setting.second
    pg = setting.surface.pg
    sS, fS = var("sS"), var("kS")
    return (
        lat.gen("f") * (-6 * sS + (-10 * pg - 8) * fS)
        - lat.gen("sigma") * (12 * fS)
        + lat.gen("Sigma") * 4
    )


def p1_extension_case(pg=None, setting: Optional[ProductSetting] = None) -> ProductClass:
    """p1(ad V) for the universal bundle built from extensions and one modification along S x sigma.

    W sits in 0 -> O((k-1)f) (x) L -> W -> O(sigma - k f) (x) I_diag -> 0 with
    c1(L) = sigma - f and 2k - 1 = pg, so p1(ad W) = (a - b)^2 - 4[diag].  The
    modification quotient is O(kf) (x) M on S x sigma, whose pushed-forward c1
    is k f (x) sigma up to classes of type 1 (x) pt.
    """
    st = section_setting(pg) if setting is None else setting
    first, second = st.first, st.second
    sigma1, f1 = first.gen("sigma"), first.gen("f")
    sigma2, f2 = second.gen("sigma"), second.gen("f")
    k = (st.surface.pg + 1) / 2
    sub_c1 = st.left(f1 * (k - 1)) + st.right(sigma2 - f2)
    quot_c1 = st.left(sigma1 - f1 * k)
    p1_W = (sub_c1 - quot_c1) * (sub_c1 - quot_c1) - st.graph() * 4
    along = st.right(sigma2)
    pushed = st.left(f1 * k) * along
    return elementary_modification_p1(p1_W, sub_c1 + quot_c1, along, pushed)


def mu_extension_case(pg=None, setting: Optional[ProductSetting] = None) -> SurfaceClass:
    st = section_setting(pg) if setting is None else setting
    return slant(p1_extension_case(setting=st).part(4))


def mu_extension_expected(setting: ProductSetting) -> SurfaceClass:
    lat = setting.second
    pg = setting.surface.pg
    sS, fS = var("sS"), var("kS")
    return lat.gen("f") * (2 * sS - 2 * pg * fS) - lat.gen("sigma") * (4 * fS) - lat.gen("Sigma") * 4


def involuted(setting: ProductSetting, x: SurfaceClass) -> SurfaceClass:
    """The fiberwise inversion applied to a class on the second factor."""
    return involution(setting.second, setting.surface.pg)(x)


# ---------------------------------------------------------------------------
# Surfaces with two multiple fibers, through the cover T
# ---------------------------------------------------------------------------


@dataclass
class GrrContext:
    """Parameters of the general pipeline: the surface, its cover, and the fiber degree 2e+1."""

    surface: EllipticSurface
    e: RatFunc
    setting: ProductSetting = field(repr=False)

    @classmethod
    def build(cls, pg=None, m1=None, m2=None, e=None, d=None) -> "GrrContext":
        S = EllipticSurface(pg=pg, m1=m1, m2=m2, cover_degree=d)
        e = var("e") if e is None else as_ratfunc(e)
        return cls(S, e, cover_setting(S, e))

    @property
    def d(self) -> RatFunc:
        return self.surface.cover_degree

    @property
    def c2_V0(self) -> RatFunc:
        return c2_of_V0(self.surface, self.setting.first.gen("delta").square())

    def fiber_dot_sigma(self) -> RatFunc:
        return self.setting.first.gen("f").dot(self.setting.first.gen("Sigma"))


@dataclass
class GeneralLineBundle:
    alpha: SurfaceClass
    rank: RatFunc
    point_coefficient: RatFunc
    pieces: Dict[str, SurfaceClass]


def c1_L_general(ctx: GrrContext) -> GeneralLineBundle:
    """c1 of pi2_*(pi1^*V0^dual (x) P) on T, with the three contributing pieces."""
    st, S = ctx.setting, ctx.surface
    delta = st.first.gen("delta")
    base = ch_rank2_dual(delta, ctx.c2_V0) * todd_class(S, st.first)
    ch_p = ch_P_general(st, ctx.e)
    pulled = st.left(base)
    pieces = {
        "point": push2(st.left(base.part(4)) * ch_p[2]).part(2),
        "divisor": push2(st.left(base.part(2)) * ch_p[4]).part(2),
        "codim3": push2(st.left(base.part(0)) * ch_p[6]).part(2),
    }
    total = push2(pulled * (ch_p[2] + ch_p[4] + ch_p[6]))
    return GeneralLineBundle(
        alpha=total.part(2),
        rank=total.unit,
        point_coefficient=base.point,
        pieces=pieces,
    )


def c1_L_general_expected(ctx: GrrContext) -> SurfaceClass:
    st, S = ctx.setting, ctx.surface
    T = st.second
    e2 = ctx.e + 2
    chi, d = S.chi, ctx.d
    coeff = var("d2") / 4 - chi / 4 - e2 * e2 * chi
    return T.gen("f") * (coeff * d - e2 * var("dsig")) + T.gen("pdelta") - T.gen("sigma") * (2 * e2)


def _block_fraction(S: EllipticSurface, i: int) -> RatFunc:
    """b(m) = 1 - 1/m."""
    return 1 - 1 / S.multiplicity(i)


def correction_from_quotient(S: EllipticSurface, i: int, q=None) -> RatFunc:
    """The multiple-fiber correction c(e, m_i) carried by the universal p1.

    Pushing the GRR expansion of P (x) pi2^*L through gives a block term
    -2 b(m_i) d (f (x) f) in x1^2 - 4 x2, and the quotient contributes
    -4 c2(Q_i) = -4 d q_i / m_i (f (x) f); their sum is c(e, m_i) d (f (x) f).
    """
    q = var(QUOTIENT_NAMES[i - 1]) if q is None else as_ratfunc(q)
    return -2 * _block_fraction(S, i) - 4 * q / S.multiplicity(i)


def quotient_from_correction(S: EllipticSurface, i: int, c=None) -> RatFunc:
    c = var(CORRECTION_NAMES[i - 1]) if c is None else as_ratfunc(c)
    return -S.multiplicity(i) * (c + 2 * _block_fraction(S, i)) / 4


def p1_universal_general(ctx: GrrContext) -> ProductClass:
    """x1^2 - 4 x2 - 4 c2(Q) on S x T with the quotient numbers q_i symbolic.

    c(V~) = pi1^*c(V0) c(P (x) pi2^*L)^{-1} c(Q), and c2(P (x) pi2^*L) comes
    from its Chern character through c2 = (c1^2 - 2 ch2)/2 for a class of
    rank zero.
    """
    st, S = ctx.setting, ctx.surface
    alpha = c1_L_general(ctx).alpha
    D = st.fiber_product()
    G = FiberDivisor(st, graph=-1, section_graph=ctx.e + 2)
    N = FiberDivisor(st, blocks=(-(S.m1 - 1), -(S.m2 - 1)), pullback=D)
    ch2 = G.push() - N.push() / 2 + D * st.right(-alpha)
    c2_P = D * D / 2 - ch2
    delta = st.left(st.first.gen("delta"))
    x1 = delta - D
    x2 = st.left(st.first.pt() * ctx.c2_V0) - delta * D + D * D - c2_P
    f_f = st.kunneth(st.first.gen("f"), st.second.gen("f"))
    quotient = st.zero()
    for i, name in enumerate(QUOTIENT_NAMES, start=1):
        # [F_i x f~_i] = (1/m_i)(f (x) f) per copy, d/m_i copies absorbed into d q_i.
        quotient = quotient + f_f * (ctx.d * var(name) / S.multiplicity(i))
    return x1 * x1 - x2 * 4 - quotient * 4


def mu_general(ctx: GrrContext, symbolic_correction: bool = True) -> SurfaceClass:
    """-4 mu~(Sigma) on T; with ``symbolic_correction`` the q_i are rewritten through c(e, m_i)."""
    out = slant(p1_universal_general(ctx).part(4))
    if symbolic_correction:
        out = out.substitute({f"q{i}": quotient_from_correction(ctx.surface, i) for i in (1, 2)})
    return out


def mu_general_expected(ctx: GrrContext) -> SurfaceClass:
    st, S = ctx.setting, ctx.surface
    T = st.second
    e2 = ctx.e + 2
    chi, d = S.chi, ctx.d
    fS = ctx.fiber_dot_sigma()
    bracket = var("d2") - chi - 4 * e2 * e2 * chi + 2 + var("c1") + var("c2")
    f_coeff = (
        bracket * fS * d
        - 4 * e2 * var("dsig") * fS
        - 4 * e2 * T.pair("sigma", "pSigma")
        + 2 * d * var("dS")
    )
    return (
        T.gen("f") * f_coeff
        + T.gen("pdelta") * (4 * fS)
        - T.gen("sigma") * (8 * e2 * fS)
        + T.gen("pSigma") * 4
    )


def mu_squared_general(ctx: GrrContext, mu4: Optional[SurfaceClass] = None) -> RatFunc:
    """mu(Sigma)^2 on the moduli space: (-4 mu~)^2 / (16 d), written through kappa . Sigma."""
    mu4 = mu_general(ctx) if mu4 is None else mu4
    return mu4.square() / (16 * ctx.d)


def mu_squared_general_expected(S: EllipticSurface) -> RatFunc:
    mm = S.m1 * S.m2
    return var("S2") + mm * mm * (S.pg - 1 - var("c1") - var("c2")) * var("kS") ** 2


__all__ += ["ch_P_section_case", "involuted", "mu_extension_case"]
