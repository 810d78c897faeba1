"""Elliptic surfaces, their divisor lattices, and truncated cohomology classes.

A :class:`Lattice` names a handful of divisor generators and records every
pairing between them as a rational function.  A :class:`SurfaceClass` is an
element of ``H^0 + H^2 + H^4`` written in those generators, with the point
class ``pt`` spanning the top degree.  Derived names (for example the fiber
``f`` on a surface with multiple fibers, which is ``m1*m2*kappa``) are stored
as aliases and expanded on construction, so the primitive generators are the
only basis ever stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .exact import RatFunc, as_ratfunc, var

__all__ = [
    "EllipticSurface",
    "Lattice",
    "LatticeMap",
    "SigmaPairings",
    "SurfaceClass",
    "base_lattice",
    "c2_of_V0",
    "canonical_class",
    "canonical_coefficient",
    "coh_dims_section_case",
    "cover_lattice",
    "cover_pullback",
    "dim_parity",
    "involution",
    "involution_pullback",
    "moduli_dimension",
    "moduli_lattice",
    "section_lattice",
    "suitability_check",
    "todd_class",
    "todd_coefficient",
    "DivisorData",
]

UNIT, POINT = "1", "pt"


class PairingError(KeyError):
    """A pairing that the lattice does not record was requested."""


class Lattice:
    """Named divisor generators with a symmetric pairing table."""

    def __init__(
        self,
        name: str,
        generators: Sequence[str],
        pairing: Mapping[Tuple[str, str], object],
        aliases: Optional[Mapping[str, Mapping[str, object]]] = None,
    ):
        self.name = name
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators) or {UNIT, POINT} & set(self.generators):
            raise ValueError("generator names must be distinct and differ from '1' and 'pt'")
        table: Dict[Tuple[str, str], RatFunc] = {}
        for (a, b), v in pairing.items():
            if a not in self.generators or b not in self.generators:
                raise ValueError(f"pairing ({a}, {b}) mentions an unknown generator")
            v = as_ratfunc(v)
            for key in ((a, b), (b, a)):
                if key in table and table[key] != v:
                    raise ValueError(f"asymmetric pairing for {a}, {b}")
                table[key] = v
        self._pairing = table
        self._aliases: Dict[str, Dict[str, RatFunc]] = {}
        for alias, combo in (aliases or {}).items():
            if alias in self.generators:
                raise ValueError(f"alias {alias} shadows a generator")
            self._aliases[alias] = {g: as_ratfunc(c) for g, c in combo.items()}

    def __repr__(self) -> str:
        return f"Lattice({self.name!r}, {self.generators})"

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Lattice):
            return NotImplemented
        return (
            self.name == other.name
            and self.generators == other.generators
            and self._pairing == other._pairing
            and self._aliases == other._aliases
        )

    def __hash__(self) -> int:
        return hash((self.name, self.generators))

    def pair(self, a: str, b: str) -> RatFunc:
        try:
            return self._pairing[(a, b)]
        except KeyError:
            raise PairingError(f"{self.name}: pairing {a}.{b} is not in the table") from None

    def has_pairing(self, a: str, b: str) -> bool:
        return (a, b) in self._pairing

    # -- building classes ------------------------------------------------
    def zero(self) -> "SurfaceClass":
        return SurfaceClass(self)

    def one(self) -> "SurfaceClass":
        return SurfaceClass(self, unit=1)

    def pt(self) -> "SurfaceClass":
        return SurfaceClass(self, point=1)

    def gen(self, name: str) -> "SurfaceClass":
        if name in self.generators:
            return SurfaceClass(self, divisor={name: 1})
        if name in self._aliases:
            return SurfaceClass(self, divisor=self._aliases[name])
        if name == UNIT:
            return self.one()
        if name == POINT:
            return self.pt()
        raise KeyError(f"{self.name}: unknown class name {name!r}")

    def basis_class(self, name: str) -> "SurfaceClass":
        return self.gen(name)

    def divisor(self, **coeffs) -> "SurfaceClass":
        total = self.zero()
        for name, c in coeffs.items():
            total = total + self.gen(name) * c
        return total

    def has(self, name: str) -> bool:
        return name in self.generators or name in self._aliases


def _basis_degree(name: str) -> int:
    return 0 if name == UNIT else 4 if name == POINT else 2


class SurfaceClass:
    """Element of H^0 + H^2 + H^4 of a surface, in a lattice's generators."""

    __slots__ = ("lattice", "unit", "divisor", "point")

    def __init__(
        self,
        lattice: Lattice,
        unit: object = 0,
        divisor: Optional[Mapping[str, object]] = None,
        point: object = 0,
    ):
        self.lattice = lattice
        self.unit = as_ratfunc(unit)
        clean: Dict[str, RatFunc] = {}
        for g, c in (divisor or {}).items():
            if g not in lattice.generators:
                raise KeyError(f"{lattice.name}: {g!r} is not a primitive generator")
            c = as_ratfunc(c)
            if not c.is_zero():
                clean[g] = c
        self.divisor = clean
        self.point = as_ratfunc(point)

    # -- helpers ----------------------------------------------------------
    def _same(self, other: "SurfaceClass") -> None:
        if other.lattice != self.lattice:
            raise ValueError(f"classes live on different lattices ({self.lattice.name} vs {other.lattice.name})")

    def coefficient(self, name: str) -> RatFunc:
        if name == UNIT:
            return self.unit
        if name == POINT:
            return self.point
        return self.divisor.get(name, RatFunc(0))

    def basis_items(self) -> Iterable[Tuple[str, RatFunc]]:
        if not self.unit.is_zero():
            yield UNIT, self.unit
        for g in self.lattice.generators:
            if g in self.divisor:
                yield g, self.divisor[g]
        if not self.point.is_zero():
            yield POINT, self.point

    def part(self, degree: int) -> "SurfaceClass":
        if degree == 0:
            return SurfaceClass(self.lattice, unit=self.unit)
        if degree == 2:
            return SurfaceClass(self.lattice, divisor=self.divisor)
        if degree == 4:
            return SurfaceClass(self.lattice, point=self.point)
        return self.lattice.zero()

    def is_zero(self) -> bool:
        return self.unit.is_zero() and not self.divisor and self.point.is_zero()

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "SurfaceClass") -> "SurfaceClass":
        if not isinstance(other, SurfaceClass):
            return NotImplemented
        self._same(other)
        div = dict(self.divisor)
        for g, c in other.divisor.items():
            div[g] = div.get(g, RatFunc(0)) + c
        return SurfaceClass(self.lattice, self.unit + other.unit, div, self.point + other.point)

    def __neg__(self) -> "SurfaceClass":
        return SurfaceClass(self.lattice, -self.unit, {g: -c for g, c in self.divisor.items()}, -self.point)

    def __sub__(self, other: "SurfaceClass") -> "SurfaceClass":
        return self + (-other)

    def __mul__(self, other) -> "SurfaceClass":
        if isinstance(other, SurfaceClass):
            return self.cup(other)
        c = as_ratfunc(other, strict=False)
        if c is NotImplemented:
            return NotImplemented
        return SurfaceClass(
            self.lattice, self.unit * c, {g: v * c for g, v in self.divisor.items()}, self.point * c
        )

    def __rmul__(self, other) -> "SurfaceClass":
        return self * other

    def __truediv__(self, other) -> "SurfaceClass":
        return self * (1 / as_ratfunc(other))

    def cup(self, other: "SurfaceClass") -> "SurfaceClass":
        self._same(other)
        unit = self.unit * other.unit
        div = {g: self.unit * other.coefficient(g) + other.unit * c for g, c in self.divisor.items()}
        for g, c in other.divisor.items():
            if g not in div:
                div[g] = self.unit * c
        point = self.unit * other.point + other.unit * self.point + self.dot(other)
        return SurfaceClass(self.lattice, unit, div, point)

    def dot(self, other: "SurfaceClass") -> RatFunc:
        """Intersection number of the degree-2 parts."""
        self._same(other)
        total = RatFunc(0)
        for a, ca in self.divisor.items():
            for b, cb in other.divisor.items():
                total = total + ca * cb * self.lattice.pair(a, b)
        return total

    def square(self) -> RatFunc:
        return self.dot(self)

    def integral(self) -> RatFunc:
        return self.point

    def inverse(self) -> "SurfaceClass":
        """Multiplicative inverse of a class with unit part 1."""
        if self.unit != 1:
            raise ValueError("only classes with degree-0 part 1 are inverted")
        x = self.part(2) + self.part(4)
        return self.lattice.one() - x + x.cup(x)

    def substitute(self, bindings: Mapping[str, object]) -> "SurfaceClass":
        return SurfaceClass(
            self.lattice,
            self.unit.substitute(bindings),
            {g: c.substitute(bindings) for g, c in self.divisor.items()},
            self.point.substitute(bindings),
        )

    # -- comparison & display --------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SurfaceClass):
            return NotImplemented
        if other.lattice != self.lattice:
            return False
        names = set(self.divisor) | set(other.divisor)
        return (
            self.unit == other.unit
            and self.point == other.point
            and all(self.coefficient(g) == other.coefficient(g) for g in names)
        )

    __hash__ = None  # type: ignore[assignment]

    def render(self, wrap_vars: bool = False) -> str:
        parts = []
        for name, c in self.basis_items():
            text = c.render(wrap_vars)
            if name == UNIT:
                parts.append(text if len(c.num.terms) <= 1 or c.is_constant() else f"({text})")
                continue
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            elif c.is_constant() or (len(c.num.terms) == 1 and c.is_polynomial()):
                parts.append(f"{text}*{name}")
            else:
                parts.append(f"({text})*{name}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"SurfaceClass[{self.lattice.name}]({self.render()})"


class LatticeMap:
    """Linear map between truncated cohomology rings given on basis elements."""

    def __init__(
        self,
        source: Lattice,
        target: Lattice,
        images: Mapping[str, SurfaceClass],
        point_image: SurfaceClass,
        unit_image: Optional[SurfaceClass] = None,
    ):
        missing = set(source.generators) - set(images)
        if missing:
            raise ValueError(f"no image for generators {sorted(missing)}")
        for img in list(images.values()) + [point_image]:
            if img.lattice != target:
                raise ValueError("images must live on the target lattice")
        self.source, self.target = source, target
        self.images = dict(images)
        self.point_image = point_image
        self.unit_image = unit_image if unit_image is not None else target.one()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatticeMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.images == other.images
            and self.point_image == other.point_image
            and self.unit_image == other.unit_image
        )

    __hash__ = None  # type: ignore[assignment]

    def basis(self, name: str) -> SurfaceClass:
        if name == UNIT:
            return self.unit_image
        if name == POINT:
            return self.point_image
        return self.images[name]

    def __call__(self, x: SurfaceClass) -> SurfaceClass:
        if x.lattice != self.source:
            raise ValueError("class does not live on the source lattice")
        out = self.target.zero()
        for name, c in x.basis_items():
            out = out + self.basis(name) * c
        return out


# ---------------------------------------------------------------------------
# The surface itself
# ---------------------------------------------------------------------------


def _numeric_int(x: RatFunc) -> Optional[int]:
    if x.is_constant():
        q = x.to_fraction()
        if q.denominator == 1:
            return q.numerator
        raise ValueError(f"expected an integer, got {q}")
    return None


@dataclass(frozen=True, eq=False, init=False)
class EllipticSurface:
    """Simply connected elliptic surface over P^1 with at most two multiple fibers.

    Parameters may be numbers or symbolic rational functions.  ``cover_degree``
    is the degree d of the base cover for the pulled-back surface T; it is 1
    for S itself.
    """

    pg: RatFunc
    m1: RatFunc
    m2: RatFunc
    has_section: bool = False
    cover_degree: RatFunc = RatFunc(1)

    def __init__(self, pg=None, m1=None, m2=None, has_section: bool = False, cover_degree=None):
        pg = var("pg") if pg is None else as_ratfunc(pg)
        m1 = var("m1") if m1 is None else as_ratfunc(m1)
        m2 = var("m2") if m2 is None else as_ratfunc(m2)
        d = var("d") if cover_degree is None else as_ratfunc(cover_degree)
        if has_section:
            m1 = m2 = RatFunc(1)
        for name, m in (("m1", m1), ("m2", m2)):
            k = _numeric_int(m)
            if k is not None and (k < 1 or k % 2 == 0):
                raise ValueError(f"{name} must be an odd positive integer, got {k}")
        p = _numeric_int(pg)
        if p is not None and p < 0:
            raise ValueError("geometric genus must be non-negative")
        object.__setattr__(self, "pg", pg)
        object.__setattr__(self, "m1", m1)
        object.__setattr__(self, "m2", m2)
        object.__setattr__(self, "has_section", has_section)
        object.__setattr__(self, "cover_degree", d)

    @classmethod
    def with_section(cls, pg=None) -> "EllipticSurface":
        return cls(pg=pg, has_section=True, cover_degree=1)

    @property
    def chi(self) -> RatFunc:
        """Holomorphic Euler characteristic pg + 1."""
        return self.pg + 1

    @property
    def euler_number(self) -> RatFunc:
        return 12 * self.chi

    @property
    def fiber_in_kappa(self) -> RatFunc:
        return self.m1 * self.m2

    def multiplicity(self, i: int) -> RatFunc:
        return {1: self.m1, 2: self.m2}[i]

    def numeric(self) -> bool:
        return all(x.is_constant() for x in (self.pg, self.m1, self.m2))


@dataclass(frozen=True)
class SigmaPairings:
    """Intersection numbers of the homology class Sigma on a surface with section."""

    self_square: RatFunc
    fiber: RatFunc
    section: RatFunc

    @classmethod
    def symbolic(cls) -> "SigmaPairings":
        return cls(var("S2"), var("kS"), var("sS"))


def canonical_coefficient(S: EllipticSurface) -> RatFunc:
    """Coefficient of kappa in K_S = (pg-1)f + (m1-1)F1 + (m2-1)F2."""
    return (S.pg - 1) * S.m1 * S.m2 + (S.m1 - 1) * S.m2 + (S.m2 - 1) * S.m1


def canonical_class(S: EllipticSurface, lattice: Lattice) -> SurfaceClass:
    return lattice.gen("kappa") * canonical_coefficient(S)


def todd_coefficient(S: EllipticSurface) -> RatFunc:
    """The number r with c1(S) = r*f, so that Todd(S) = 1 + (r/2) f + chi [pt]."""
    return -(S.pg + 1) + 1 / S.m1 + 1 / S.m2


def todd_class(S: EllipticSurface, lattice: Lattice) -> SurfaceClass:
    r = todd_coefficient(S)
    return lattice.one() + lattice.gen("f") * (r / 2) + lattice.pt() * S.chi


def first_chern_class(S: EllipticSurface, lattice: Lattice) -> SurfaceClass:
    """c1(S) = -K_S, written via the fiber so it agrees with the Todd class."""
    return lattice.gen("f") * todd_coefficient(S)


def moduli_dimension(p1, S: EllipticSurface) -> RatFunc:
    return -as_ratfunc(p1) - 3 * S.chi


def dim_parity(p: int, pg: int) -> int:
    """Half the expected moduli dimension; rejects odd or negative dimensions."""
    twice = -p - 3 * (pg + 1)
    if twice < 0:
        raise ValueError(f"p1 = {p} gives negative expected dimension {twice}")
    if twice % 2:
        raise ValueError(f"p1 = {p} with pg = {pg} has odd expected dimension {twice}")
    return twice // 2


def c2_of_V0(S: EllipticSurface, delta_sq) -> RatFunc:
    """Second Chern class of the fiberwise-stable bundle V0, from p1(ad V0) = -3 chi."""
    return (as_ratfunc(delta_sq) + 3 * S.chi) / 4


def coh_dims_section_case(a: int, pg: int) -> Tuple[int, int, int]:
    """(h0, h1, h2) of O(-sigma + (pg+1-a) f) on a surface with a section."""
    return 0, max(0, 1 - a), max(0, a - 1)


@dataclass(frozen=True)
class DivisorData:
    """Pairings of a candidate divisor D used by the suitability test."""

    fiber: Fraction
    polarization: Fraction
    self_square: Fraction
    with_delta: Fraction


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def suitability_check(
    candidates: Sequence[DivisorData],
    fiber_delta,
    polarization_delta,
    c,
) -> list[bool]:
    """Sign test for each candidate D inside the bound -D^2 + D.Delta <= c.

    Candidates outside the bound impose no condition and pass.
    """
    results = []
    for D in candidates:
        if -D.self_square + D.with_delta > c:
            results.append(True)
            continue
        f_side = 2 * D.fiber - fiber_delta
        l_side = 2 * D.polarization - polarization_delta
        results.append(f_side == 0 or _sign(f_side) == _sign(l_side))
    return results


def involution_pullback(pairings: SigmaPairings, pg) -> SigmaPairings:
    """Pairing data of iota^*Sigma for the fiberwise inversion iota.

    iota^*Sigma = -Sigma + 2[(sigma.Sigma) + (pg+1)(f.Sigma)] f + 2(f.Sigma) sigma.
    """
    pg = as_ratfunc(pg)
    S2, fS, sS = pairings.self_square, pairings.fiber, pairings.section
    u = 2 * (sS + (pg + 1) * fS)
    v = 2 * fS
    sigma_sq = -(pg + 1)
    new_f = -fS + v  # f.f = 0, f.sigma = 1
    new_s = -sS + u + v * sigma_sq  # sigma.f = 1
    new_sq = S2 - 2 * u * fS - 2 * v * sS + 2 * u * v + v * v * sigma_sq
    return SigmaPairings(new_sq, new_f, new_s)


def involution(lattice: Lattice, pg) -> LatticeMap:
    """The fiberwise inversion acting on the section lattice (sigma, kappa, Sigma)."""
    pg = as_ratfunc(pg)
    sS = lattice.pair("sigma", "Sigma")
    fS = lattice.gen("f").dot(lattice.gen("Sigma"))
    sigma, f, Sigma = lattice.gen("sigma"), lattice.gen("f"), lattice.gen("Sigma")
    image = -Sigma + f * (2 * (sS + (pg + 1) * fS)) + sigma * (2 * fS)
    return LatticeMap(
        lattice,
        lattice,
        {"sigma": sigma, "kappa": lattice.gen("kappa"), "Sigma": image},
        lattice.pt(),
    )


# ---------------------------------------------------------------------------
# Lattices used by the pipelines
# ---------------------------------------------------------------------------


def section_lattice(S: EllipticSurface) -> Lattice:
    """sigma, kappa (= f here) and the test class Sigma on a surface with section."""
    if not S.has_section:
        raise ValueError("section lattice requires a surface with a section")
    return Lattice(
        "S",
        ("sigma", "kappa", "Sigma"),
        {
            ("sigma", "sigma"): -S.chi,
            ("sigma", "kappa"): 1,
            ("kappa", "kappa"): 0,
            ("sigma", "Sigma"): var("sS"),
            ("kappa", "Sigma"): var("kS"),
            ("Sigma", "Sigma"): var("S2"),
        },
        aliases={"f": {"kappa": 1}},
    )


def base_lattice(S: EllipticSurface, e=None) -> Lattice:
    """kappa, delta = c1(V0) and Sigma on a surface with two multiple fibers."""
    e = var("e") if e is None else as_ratfunc(e)
    mm = S.m1 * S.m2
    return Lattice(
        "S",
        ("kappa", "delta", "Sigma"),
        {
            ("kappa", "kappa"): 0,
            ("kappa", "delta"): (2 * e + 1) / mm,
            ("kappa", "Sigma"): var("kS"),
            ("delta", "delta"): var("d2"),
            ("delta", "Sigma"): var("dS"),
            ("Sigma", "Sigma"): var("S2"),
        },
        aliases={"f": {"kappa": mm}},
    )


def cover_lattice(S: EllipticSurface, e=None) -> Lattice:
    """The pulled-back surface T with section sigma, fiber f, and the pullbacks of delta, Sigma.

    The section satisfies sigma^2 = -chi(O_T) = -d(pg+1): T has d(pg+1)
    times as many nodal fibers as S, hence Euler number 12 d (pg+1).
    """
    e = var("e") if e is None else as_ratfunc(e)
    d = S.cover_degree
    return Lattice(
        "T",
        ("sigma", "f", "pdelta", "pSigma"),
        {
            ("sigma", "sigma"): -d * S.chi,
            ("sigma", "f"): 1,
            ("f", "f"): 0,
            ("f", "pdelta"): 2 * e + 1,
            ("f", "pSigma"): S.m1 * S.m2 * var("kS"),
            ("pdelta", "pdelta"): d * var("d2"),
            ("pdelta", "pSigma"): d * var("dS"),
            ("pSigma", "pSigma"): d * var("S2"),
            ("sigma", "pdelta"): var("dsig"),
            ("sigma", "pSigma"): var("psig"),
        },
    )


def cover_pullback(S: EllipticSurface, base: Lattice, cover: Lattice) -> LatticeMap:
    """Pullback along the degree-d map T -> S."""
    d = S.cover_degree
    return LatticeMap(
        base,
        cover,
        {
            "kappa": cover.gen("f") * (d / (S.m1 * S.m2)),
            "delta": cover.gen("pdelta"),
            "Sigma": cover.gen("pSigma"),
        },
        cover.pt() * d,
    )


def moduli_lattice(S: EllipticSurface, alpha_sq, alpha_dot_kappa) -> Lattice:
    """kappa and a class alpha on the relative Jacobian, which shares pg, m1, m2 with S."""
    return Lattice(
        "J",
        ("kappa", "alpha"),
        {
            ("kappa", "kappa"): 0,
            ("kappa", "alpha"): alpha_dot_kappa,
            ("alpha", "alpha"): alpha_sq,
        },
        aliases={"f": {"kappa": S.m1 * S.m2}},
    )
