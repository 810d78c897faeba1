"""Rank-1 and rank-2 sheaves on genus-one curves, smooth or with one node.

Sheaves are descriptors only: a curve kind, degrees, and a few flags.  The
degree of a torsion-free rank-1 sheaf is its Euler characteristic, which on
an arithmetic genus one curve is the usual degree for line bundles.  All
answers come from closed formulas for Hom and cohomology dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

__all__ = [
    "BundleDesc",
    "BundleKind",
    "CurveKind",
    "HomResult",
    "OutOfScopeError",
    "SheafDesc",
    "deg_hom_rank1",
    "dim_hom_to_rank1",
    "euler_characteristic_hom",
    "h0_h1_rank1",
    "stable_predicate",
]


class CurveKind(str, Enum):
    SMOOTH = "smooth"
    NODAL = "nodal"


class OutOfScopeError(ValueError):
    """The requested dimension is not determined by the closed formulas."""


@dataclass(frozen=True)
class SheafDesc:
    """A torsion-free rank-1 sheaf, described by its degree chi(F).

    ``trivial`` marks the structure sheaf; ``tag`` lets callers state that a
    sheaf coincides with a named summand or quotient of a rank-2 bundle
    (``"L1"`` or ``"L2"``).
    """

    curve: CurveKind
    degree: int
    locally_free: bool = True
    trivial: bool = False
    tag: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "curve", CurveKind(self.curve))
        if self.curve is CurveKind.SMOOTH and not self.locally_free:
            raise ValueError("every torsion-free sheaf on a smooth curve is locally free")
        if self.trivial and (self.degree != 0 or not self.locally_free):
            raise ValueError("the structure sheaf is a line bundle of degree 0")
        if self.tag not in (None, "L1", "L2"):
            raise ValueError(f"unknown tag {self.tag!r}")


class BundleKind(str, Enum):
    SPLIT = "split"
    NONSPLIT_DEG0_TWIST = "nonsplit-deg0-twist"
    STABLE_FP = "stable"
    NODAL_VN_DELTA = "nodal-vn"


@dataclass(frozen=True)
class BundleDesc:
    """A rank-2 bundle on a genus-one curve.

    * ``SPLIT``: L1 + L2 with degrees ``deg_l1 <= deg_l2``.
    * ``NONSPLIT_DEG0_TWIST``: E (x) L with E the nonsplit self-extension of
      O; total degree is ``2 * deg_l1``.
    * ``STABLE_FP``: F_p (x) L, stable of odd degree.
    * ``NODAL_VN_DELTA``: L (x) V_{n,delta} on a nodal curve; its maximal
      destabilizing subsheaf has degree e + n and the quotient e + 1 - n.
    """

    curve: CurveKind
    kind: BundleKind
    degree: int
    deg_l1: Optional[int] = None
    deg_l2: Optional[int] = None
    n: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "curve", CurveKind(self.curve))
        object.__setattr__(self, "kind", BundleKind(self.kind))
        k = self.kind
        if k is BundleKind.SPLIT:
            if self.deg_l1 is None or self.deg_l2 is None:
                raise ValueError("split bundles need both summand degrees")
            if self.deg_l1 + self.deg_l2 != self.degree:
                raise ValueError("summand degrees must add up to the total degree")
            if self.deg_l1 > self.deg_l2:
                raise ValueError("order the summands so that deg L1 <= deg L2")
        elif k is BundleKind.NONSPLIT_DEG0_TWIST:
            if self.deg_l1 is None or 2 * self.deg_l1 != self.degree:
                raise ValueError("E (x) L has degree 2 deg L")
        elif k is BundleKind.STABLE_FP:
            if self.degree % 2 == 0:
                raise ValueError("a stable rank-2 bundle on a genus-one curve has odd degree")
        elif k is BundleKind.NODAL_VN_DELTA:
            if self.curve is not CurveKind.NODAL:
                raise ValueError("V_{n,delta} lives on a nodal curve")
            if self.n is None or self.n < 1:
                raise ValueError("V_{n,delta} needs n >= 1")
            if self.degree % 2 == 0:
                raise ValueError("V_{n,delta} twists have odd degree 2e+1")

    @classmethod
    def split(cls, curve, deg_l1: int, deg_l2: int) -> "BundleDesc":
        return cls(curve, BundleKind.SPLIT, deg_l1 + deg_l2, deg_l1, deg_l2)

    @classmethod
    def stable(cls, curve, e: int) -> "BundleDesc":
        return cls(curve, BundleKind.STABLE_FP, 2 * e + 1)

    @classmethod
    def nodal_vn(cls, n: int, e: int) -> "BundleDesc":
        return cls(CurveKind.NODAL, BundleKind.NODAL_VN_DELTA, 2 * e + 1, n=n)

    @property
    def e(self) -> int:
        """e with degree 2e+1 (odd degrees only)."""
        if self.degree % 2 == 0:
            raise ValueError("bundle has even degree")
        return (self.degree - 1) // 2


@dataclass(frozen=True)
class HomResult:
    """dim Hom(V, lambda) and whether a surjection exists (None when undetermined)."""

    dim: int
    surjection_exists: Optional[bool]

    def __iter__(self):
        return iter((self.dim, self.surjection_exists))


def _same_curve(*curves: CurveKind) -> None:
    if len(set(curves)) != 1:
        raise ValueError("sheaves live on different curves")


def deg_hom_rank1(F1: SheafDesc, F2: SheafDesc) -> int:
    """Degree of the sheaf Hom(F1, F2)."""
    _same_curve(F1.curve, F2.curve)
    if F1.locally_free or F2.locally_free:
        return F2.degree - F1.degree
    return F2.degree - F1.degree + 1


def h0_h1_rank1(F: SheafDesc, trivial: Optional[bool] = None) -> Tuple[int, int]:
    """(h0, h1) of a torsion-free rank-1 sheaf on a genus-one curve.

    Degree 0 is special only for the structure sheaf, which has (1, 1).
    """
    trivial = F.trivial if trivial is None else trivial
    if trivial and (F.degree != 0 or not F.locally_free):
        raise ValueError("only a degree-0 line bundle can be trivial")
    if F.degree > 0:
        return F.degree, 0
    if F.degree < 0:
        return 0, -F.degree
    return (1, 1) if trivial else (0, 0)


def _h0_twist(target: SheafDesc, line_degree: int, isomorphic: bool) -> int:
    """h0(target (x) L^{-1}) for a line bundle L of the given degree."""
    twisted = SheafDesc(
        target.curve,
        target.degree - line_degree,
        locally_free=target.locally_free,
        trivial=isomorphic and target.locally_free and target.degree == line_degree,
    )
    return h0_h1_rank1(twisted)[0]


def euler_characteristic_hom(V: BundleDesc, lam: SheafDesc) -> int:
    """chi(V^dual (x) lambda) = 2 deg(lambda) - deg V by Riemann-Roch."""
    return 2 * lam.degree - V.degree


def dim_hom_to_rank1(V: BundleDesc, lam: SheafDesc) -> HomResult:
    """dim Hom(V, lambda) for a rank-2 bundle V of degree 2e+1 and a rank-1 sheaf lambda."""
    _same_curve(V.curve, lam.curve)
    kind, d = V.kind, lam.degree
    if kind is BundleKind.NONSPLIT_DEG0_TWIST:
        raise ValueError("E (x) L has even degree; Hom dimensions are stated for degree 2e+1")
    e = V.e
    if kind is BundleKind.STABLE_FP:
        if d >= e + 1:
            return HomResult(2 * d - 2 * e - 1, True)
        # A nonzero map would have a kernel of degree at least e+1 > slope.
        return HomResult(0, False)
    if kind is BundleKind.SPLIT:
        l1, l2 = V.deg_l1, V.deg_l2
        if not l1 <= e < l2:
            raise ValueError("split bundle must satisfy deg L1 <= e < deg L2")
        if lam.tag is not None and not lam.locally_free:
            raise ValueError("summands of a split bundle are line bundles")
        if lam.tag == "L1" and d != l1 or lam.tag == "L2" and d != l2:
            raise ValueError("tagged sheaf must have the summand's degree")
        dim = _h0_twist(lam, l1, lam.tag == "L1") + _h0_twist(lam, l2, lam.tag == "L2")
        return HomResult(dim, d > l2 or lam.tag in ("L1", "L2"))
    # L (x) V_{n,delta}: subsheaf L2 of degree e+n, quotient L1 of degree e+1-n.
    n = V.n
    if lam.tag == "L1":
        if d != e + 1 - n or lam.locally_free:
            raise ValueError("the quotient L1 is a non-locally-free sheaf of degree e+1-n")
        return HomResult(1, True)
    if d > e + n:
        return HomResult(2 * d - 2 * e - 1, None)
    raise OutOfScopeError("Hom(L (x) V_{n,delta}, lambda) is only determined for deg lambda > e+n or lambda = L1")


def stable_predicate(V: BundleDesc) -> bool:
    return V.kind is BundleKind.STABLE_FP
