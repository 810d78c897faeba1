"""Elementary modifications: p1(ad) bookkeeping, allowability, and parameter counts.

An elementary modification of V0 along a divisor D is the kernel V of a
surjection V0 -> i_*L.  The change in p1(ad) = c1^2 - 4 c2 is
2 c1(V0).D + D^2 - 4 i_*c1(L); along a fiber F with quotient M of degree
deg M, that specializes to -4(deg M - deg(V|F)/2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .exact import RatFunc, as_ratfunc

__all__ = [
    "BundleInvariants",
    "ExtensionShape",
    "ModificationSpec",
    "allowable",
    "destabilizing_range",
    "dual_quotient_degree",
    "extension_types",
    "generic_step_degree",
    "modification_count_bound",
    "p1_fiber_modification",
    "p1_general_modification",
    "section_case_extension_solve",
    "step_count_holds",
]


@dataclass(frozen=True)
class BundleInvariants:
    """c1^2, c1.f and c2 of a rank-2 bundle; p1(ad) is derived."""

    c1_sq: RatFunc
    c1_dot_f: RatFunc
    c2: RatFunc

    def __post_init__(self):
        for name in ("c1_sq", "c1_dot_f", "c2"):
            object.__setattr__(self, name, as_ratfunc(getattr(self, name)))

    @property
    def p1(self) -> RatFunc:
        return self.c1_sq - 4 * self.c2

    @property
    def e(self) -> RatFunc:
        """Fiber degree c1.f written as 2e+1."""
        return (self.c1_dot_f - 1) / 2

    def modified_along_fiber(self, multiplicity, deg_quotient) -> "BundleInvariants":
        """Invariants of the kernel of V -> i_*Q for Q on the reduced fiber F = f/m.

        c1 drops by [F] and c2 changes so that p1 follows the fiber rule.
        """
        m = as_ratfunc(multiplicity)
        restricted = self.c1_dot_f / m
        new_p1 = p1_fiber_modification(self.p1, restricted, deg_quotient)
        # (c1 - F)^2 = c1^2 - 2 c1.F since F^2 = 0.
        new_c1_sq = self.c1_sq - 2 * restricted
        new_c2 = (new_c1_sq - new_p1) / 4
        return BundleInvariants(new_c1_sq, self.c1_dot_f, new_c2)


@dataclass(frozen=True)
class ModificationSpec:
    """Elementary modification along a fiber of the given multiplicity with quotient degree deg Q."""

    fiber_multiplicity: int
    deg_quotient: Fraction
    quotient_locally_free: bool = True

    def __post_init__(self):
        if self.fiber_multiplicity < 1:
            raise ValueError("fiber multiplicity must be positive")
        object.__setattr__(self, "deg_quotient", Fraction(self.deg_quotient))

    def restricted_degree(self, e) -> Fraction:
        """deg(V|F) = (2e+1)/m on the reduced fiber."""
        return Fraction(2 * e + 1, self.fiber_multiplicity)


def p1_general_modification(p1_old, c1_dot_D, D_sq, pushed_c1_L):
    """p1(ad V) = p1(ad V0) + 2 c1(V0).D + D^2 - 4 i_*c1(L).

    The arguments may be numbers or classes of a common ring.
    """
    return p1_old + c1_dot_D * 2 + D_sq - pushed_c1_L * 4


def p1_fiber_modification(p1, deg_restricted, deg_quotient, direction: str = "kernel"):
    """p1 across 0 -> V1 -> V2 -> i_*M -> 0 along a fiber.

    ``direction="kernel"`` maps p1(ad V2) to p1(ad V1); ``"extension"``
    inverts it.
    """
    shift = 4 * (as_ratfunc(deg_quotient) - as_ratfunc(deg_restricted) / 2)
    if direction == "kernel":
        return as_ratfunc(p1) - shift
    if direction == "extension":
        return as_ratfunc(p1) + shift
    raise ValueError("direction must be 'kernel' or 'extension'")


def dual_quotient_degree(deg_quotient):
    """Degree of the quotient in the dual sequence: deg M' = -deg M."""
    return -deg_quotient


def allowable(spec: ModificationSpec, e: int) -> bool:
    """2 deg Q > deg(V|F); on a reduced fiber this reads deg Q >= e+1."""
    return 2 * spec.deg_quotient > spec.restricted_degree(e)


def modification_count_bound(p1_initial: int, p1_final: int) -> int:
    """Largest number of allowable modifications between two values of p1."""
    diff = p1_initial - p1_final
    if diff < 0:
        raise ValueError("p1 cannot increase along allowable modifications")
    return diff // 2


def step_count_holds(e: int, d: int) -> bool:
    """Whether the parameter count 2d - 2e >= 4d - 4e - 2 allows a quotient of degree d."""
    return 2 * d - 2 * e >= 4 * d - 4 * e - 2


def generic_step_degree(e: int) -> int:
    """The only allowable quotient degree d > e that passes the parameter count."""
    d = e + 1
    while step_count_holds(e, d + 1):
        d += 1
    if not step_count_holds(e, d):
        raise ArithmeticError("no allowable degree passes the count")
    return d


def section_case_extension_solve(pg: int, t: int, r: int, u: int, len_Z: int) -> Tuple[int, int]:
    """(s, b) for a bundle reached by r modifications on a surface with a section.

    The modifications leave a vanishing of the canonical sub-line bundle along
    u fibers and a residual subscheme of length len_Z; p1 forces
    -r + 2u + 2 len_Z = t, and twisting by b f with b = u + len_Z - t brings
    the extension to the normal form with s = len_Z.
    """
    if pg % 2 == 0:
        raise ValueError("the normal form is stated for odd geometric genus")
    if not 0 <= u <= r <= t:
        raise ValueError("need 0 <= u <= r <= t")
    if len_Z < 0:
        raise ValueError("subscheme length is non-negative")
    if -r + 2 * u + 2 * len_Z != t:
        raise ValueError(f"p1 constraint fails: -r + 2u + 2l(Z) = {-r + 2 * u + 2 * len_Z} != t = {t}")
    s = len_Z
    return s, u + len_Z - t


@dataclass(frozen=True)
class ExtensionShape:
    """0 -> O((k-s)f) (x) I_{Z1} -> V -> O(sigma + (-k+s-t)f) (x) I_{Z2} -> 0, twists relative to k."""

    label: str
    s: int
    sub_twist: int
    quotient_twist: int
    len_sub_scheme: int
    len_quotient_scheme: int

    @property
    def locally_free(self) -> bool:
        return self.len_sub_scheme == 0


def extension_types(pg: int, t: int = 2) -> List[ExtensionShape]:
    """The extension shapes for odd pg; for t = 2 they are labelled Type 1 to Type 4.

    Twists are written as offsets from k = (pg+1)/2: ``sub_twist = -s`` means
    O((k-s)f).
    """
    if pg % 2 == 0:
        raise ValueError("extension shapes are enumerated for odd geometric genus")
    shapes = []
    for s in range(t, -1, -1):
        label = f"Type {t - s + 1}" if t == 2 else f"s={s}"
        shapes.append(ExtensionShape(label, s, -s, s - t, 0, s))
    if t == 2:
        # Non-locally-free: the point sits on the sub-line bundle instead.
        shapes.append(ExtensionShape("Type 4", 1, -1, -1, 1, 0))
    return shapes


def destabilizing_range(t: int, k: int, s: int, s0: int) -> Tuple[int, int]:
    """Range of a with O(sigma - a f) maximal destabilizing: t+k-(s-s0) <= a <= t+k."""
    if not 0 <= s0 <= s:
        raise ValueError("need 0 <= s0 <= s")
    return t + k - (s - s0), t + k


def trace_modifications(
    p1_initial, e: int, steps: List[ModificationSpec], force: bool = False
) -> List[RatFunc]:
    """p1 after each modification; refuses non-allowable steps unless forced."""
    out = []
    p1 = as_ratfunc(p1_initial)
    for spec in steps:
        if not force and not allowable(spec, e):
            raise ValueError(f"step on multiplicity-{spec.fiber_multiplicity} fiber with deg Q = {spec.deg_quotient} is not allowable")
        p1 = p1_fiber_modification(p1, spec.restricted_degree(e), spec.deg_quotient)
        out.append(p1)
    return out


__all__ += ["trace_modifications"]
