"""Graded classes on a product S x T with graph correspondences.

A :class:`ProductClass` is a finite sum over three kinds of basis element:

``("K", a, b)``
    the Kunneth term a (x) b, where a and b are basis names of the two
    factors (``"1"``, a divisor generator, or ``"pt"``);
``("G", b)``
    the pushforward of the class b on T along the graph embedding
    t -> (phi(t), t) of the cover phi: T -> S;
``("H", b)``
    the same along t -> (psi(t), t), where psi = phi o sigma o rho sends a
    point to the image of the section in its fiber.

Graph terms absorb Kunneth factors through the projection formula:
Gamma . (a (x) c) = graph_*(phi^*a . c).  Because every correspondence the
pipelines need is a pushforward from a graph, products of graph terms with
Kunneth terms stay in the basis.  Products of two graph terms inside S x T
are not needed and raise :class:`ProductNotInCalculus`.

When T = S and phi is the identity, the graph is the diagonal and
``("G", x)`` is j_* x.

The normalization D~ of the fiber product S x_{P^1} T carries the divisors
Gamma, H, B1, B2 and pullbacks of divisors on S x T.  :class:`FiberDivisor`
models those, with i_*(X . Y) computed by restricting to graph components:
a divisor restricted to a graph becomes a class on T, and the self
intersection of a graph inside D~ is its normal bundle there.
"""

from __future__ import annotations

from typing import Dict, Mapping, Optional, Tuple

from .exact import RatFunc, as_ratfunc
from .surface import (
    POINT,
    UNIT,
    EllipticSurface,
    Lattice,
    LatticeMap,
    SurfaceClass,
    base_lattice,
    cover_lattice,
    cover_pullback,
    first_chern_class,
    section_lattice,
)

__all__ = [
    "FiberDivisor",
    "ProductClass",
    "ProductNotInCalculus",
    "ProductSetting",
    "ch_P_general",
    "ch_diagonal_structure",
    "ch_rank2_dual",
    "cover_setting",
    "exp_series",
    "multiply",
    "normal_divisor",
    "push2",
    "section_setting",
    "slant",
]

Key = Tuple[str, ...]


class ProductNotInCalculus(ValueError):
    """The requested product is outside the closed rewrite table."""


def _deg(name: str) -> int:
    return 0 if name == UNIT else 4 if name == POINT else 2


def _key_degree(key: Key) -> int:
    if key[0] == "K":
        return _deg(key[1]) + _deg(key[2])
    return 4 + _deg(key[1])


class ProductSetting:
    """The data fixing a product S x T: both lattices, phi^*, the section, d, m1, m2."""

    def __init__(
        self,
        surface: EllipticSurface,
        first: Lattice,
        second: Lattice,
        pullback: LatticeMap,
        first_c1: SurfaceClass,
        section: str = "sigma",
    ):
        if pullback.source != first or pullback.target != second:
            raise ValueError("pullback must map the first lattice to the second")
        self.surface = surface
        self.first, self.second = first, second
        self.pullback = pullback
        self.first_c1 = first_c1
        self.section = section
        self.d = surface.cover_degree

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, ProductSetting):
            return NotImplemented
        mine, theirs = self.surface, other.surface
        return (
            self.first == other.first
            and self.second == other.second
            and self.section == other.section
            and self.first_c1 == other.first_c1
            and all(getattr(mine, k) == getattr(theirs, k) for k in ("pg", "m1", "m2", "cover_degree"))
            and self.pullback == other.pullback
        )

    def __hash__(self) -> int:
        return hash((self.first, self.second))

    # -- maps to T --------------------------------------------------------
    def phi_star(self, x: SurfaceClass) -> SurfaceClass:
        return self.pullback(x)

    def psi_star(self, x: SurfaceClass) -> SurfaceClass:
        """Pullback along psi: divisors go to (phi^*a . sigma) f, points to zero."""
        sigma, f = self.second.gen(self.section), self.second.gen("f")
        divisor = self.pullback(x.part(2))
        return self.second.one() * x.unit + f * divisor.dot(sigma)

    # -- constructors -----------------------------------------------------
    def zero(self) -> "ProductClass":
        return ProductClass(self)

    def kunneth(self, a: Optional[SurfaceClass] = None, b: Optional[SurfaceClass] = None) -> "ProductClass":
        a = self.first.one() if a is None else a
        b = self.second.one() if b is None else b
        if a.lattice != self.first or b.lattice != self.second:
            raise ValueError("Kunneth factors must live on the product's lattices")
        terms: Dict[Key, RatFunc] = {}
        for na, ca in a.basis_items():
            for nb, cb in b.basis_items():
                _accumulate(terms, ("K", na, nb), ca * cb)
        return ProductClass(self, terms)

    def left(self, a: SurfaceClass) -> "ProductClass":
        """pi_1^* a."""
        return self.kunneth(a, None)

    def right(self, b: SurfaceClass) -> "ProductClass":
        """pi_2^* b."""
        return self.kunneth(None, b)

    def _graph_like(self, kind: str, b: Optional[SurfaceClass]) -> "ProductClass":
        b = self.second.one() if b is None else b
        if b.lattice != self.second:
            raise ValueError("graph classes are pushed forward from the second factor")
        terms: Dict[Key, RatFunc] = {}
        for nb, cb in b.basis_items():
            _accumulate(terms, (kind, nb), cb)
        return ProductClass(self, terms)

    def graph(self, b: Optional[SurfaceClass] = None) -> "ProductClass":
        """graph_* b for the graph of phi (the diagonal when T = S)."""
        return self._graph_like("G", b)

    def section_graph(self, b: Optional[SurfaceClass] = None) -> "ProductClass":
        """Pushforward of b along the graph of psi."""
        return self._graph_like("H", b)

    def fiber_product(self) -> "ProductClass":
        """[D] = f (x) 1 + d (1 (x) f)."""
        f1, f2 = self.first.gen("f"), self.second.gen("f")
        return self.kunneth(f1, None) + self.kunneth(None, f2) * self.d

    def block(self, i: int) -> "ProductClass":
        """i_*[B_i] = (d/m_i) f (x) f."""
        m = self.surface.multiplicity(i)
        return self.kunneth(self.first.gen("f"), self.second.gen("f")) * (self.d / m)

    def block_trace(self, i: int) -> SurfaceClass:
        """B_i met with either graph: the d/m_i fibers of T over the i-th multiple fiber."""
        return self.second.gen("f") * (self.d / self.surface.multiplicity(i))


def _accumulate(terms: Dict[Key, RatFunc], key: Key, c: RatFunc) -> None:
    if c.is_zero():
        return
    s = terms.get(key)
    s = c if s is None else s + c
    if s.is_zero():
        terms.pop(key, None)
    else:
        terms[key] = s


class ProductClass:
    """Graded class on S x T in the Kunneth-plus-graph basis."""

    __slots__ = ("setting", "terms")

    def __init__(self, setting: ProductSetting, terms: Optional[Mapping[Key, object]] = None):
        self.setting = setting
        clean: Dict[Key, RatFunc] = {}
        for k, c in (terms or {}).items():
            _accumulate(clean, k, as_ratfunc(c))
        self.terms = clean

    def _same(self, other: "ProductClass") -> None:
        if other.setting != self.setting:
            raise ValueError("classes live on different products")

    def __add__(self, other: "ProductClass") -> "ProductClass":
        if not isinstance(other, ProductClass):
            return NotImplemented
        self._same(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            _accumulate(terms, k, c)
        return ProductClass(self.setting, terms)

    def __neg__(self) -> "ProductClass":
        return ProductClass(self.setting, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "ProductClass") -> "ProductClass":
        return self + (-other)

    def __mul__(self, other) -> "ProductClass":
        if isinstance(other, ProductClass):
            return multiply(self, other)
        c = as_ratfunc(other, strict=False)
        if c is NotImplemented:
            return NotImplemented
        return ProductClass(self.setting, {k: v * c for k, v in self.terms.items()})

    def __rmul__(self, other) -> "ProductClass":
        return self * other

    def __truediv__(self, other) -> "ProductClass":
        return self * (1 / as_ratfunc(other))

    def __pow__(self, k: int) -> "ProductClass":
        out = self.setting.kunneth()
        for _ in range(k):
            out = out * self
        return out

    def degrees(self) -> set[int]:
        return {_key_degree(k) for k in self.terms}

    def part(self, degree: int) -> "ProductClass":
        return ProductClass(self.setting, {k: c for k, c in self.terms.items() if _key_degree(k) == degree})

    def truncate(self, max_degree: int) -> "ProductClass":
        return ProductClass(self.setting, {k: c for k, c in self.terms.items() if _key_degree(k) <= max_degree})

    def is_zero(self) -> bool:
        return not self.terms

    def substitute(self, bindings: Mapping[str, object]) -> "ProductClass":
        return ProductClass(self.setting, {k: c.substitute(bindings) for k, c in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProductClass):
            return NotImplemented
        if other.setting != self.setting:
            return False
        return (self - other).is_zero_exact()

    __hash__ = None  # type: ignore[assignment]

    def is_zero_exact(self) -> bool:
        return all(c.is_zero() for c in self.terms.values())

    def render(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for key in sorted(self.terms, key=lambda k: (-_key_degree(k), k)):
            c = self.terms[key]
            if key[0] == "K":
                basis = f"{key[1]}(x){key[2]}"
            else:
                name = "Gamma" if key[0] == "G" else "H"
                basis = name if key[1] == UNIT else f"{name}[{key[1]}]"
            out.append(f"({c})*{basis}")
        return " + ".join(out)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"ProductClass({self.render()})"


def _basis_product(lattice: Lattice, a: str, b: str) -> Optional[Tuple[RatFunc, str]]:
    if a == UNIT:
        return RatFunc(1), b
    if b == UNIT:
        return RatFunc(1), a
    if a == POINT or b == POINT:
        return None
    return lattice.pair(a, b), POINT


def multiply(x: ProductClass, y: ProductClass) -> ProductClass:
    """Bilinear product using the Kunneth rule and the graph projection formula."""
    x._same(y)
    st = x.setting
    terms: Dict[Key, RatFunc] = {}
    for kx, cx in x.terms.items():
        for ky, cy in y.terms.items():
            c = cx * cy
            if kx[0] == "K" and ky[0] == "K":
                left = _basis_product(st.first, kx[1], ky[1])
                right = _basis_product(st.second, kx[2], ky[2])
                if left is None or right is None:
                    continue
                _accumulate(terms, ("K", left[1], right[1]), c * left[0] * right[0])
                continue
            if kx[0] != "K" and ky[0] != "K":
                raise ProductNotInCalculus(f"product of correspondences {kx} and {ky} in the ambient product")
            graph_key, kun_key = (kx, ky) if kx[0] != "K" else (ky, kx)
            pull = st.phi_star if graph_key[0] == "G" else st.psi_star
            restricted = (
                st.second.basis_class(graph_key[1])
                * pull(st.first.basis_class(kun_key[1]))
                * st.second.basis_class(kun_key[2])
            )
            for nb, cb in restricted.basis_items():
                _accumulate(terms, (graph_key[0], nb), c * cb)
    return ProductClass(st, terms)


def push2(x: ProductClass) -> SurfaceClass:
    """Pushforward to the second factor."""
    st = x.setting
    out = st.second.zero()
    for key, c in x.terms.items():
        if key[0] == "K":
            if key[1] == POINT:
                out = out + st.second.basis_class(key[2]) * c
        else:
            out = out + st.second.basis_class(key[1]) * c
    return out


def slant(x: ProductClass, sigma: Optional[SurfaceClass] = None) -> SurfaceClass:
    """Slant product x / Sigma for a class of degree 4, as push2(x . (Sigma (x) 1)).

    ``sigma`` defaults to the generator named ``Sigma`` on the first factor.
    """
    bad = x.degrees() - {4}
    if bad:
        raise ValueError(f"slant product needs a degree-4 class, found degrees {sorted(bad)}")
    st = x.setting
    sigma = st.first.gen("Sigma") if sigma is None else sigma
    return push2(x * st.left(sigma.part(2)))


def exp_series(x: ProductClass, max_degree: int = 8) -> ProductClass:
    """exp(x) for a class of positive degree, truncated above ``max_degree``."""
    st = x.setting
    if 0 in x.degrees():
        raise ValueError("exp_series needs a class without degree-0 part")
    total, power = st.kunneth(), st.kunneth()
    k = 1
    while True:
        power = (power * x).truncate(max_degree) / k
        if power.is_zero():
            return total
        total = total + power
        k += 1


# ---------------------------------------------------------------------------
# Divisors on the normalized fiber product
# ---------------------------------------------------------------------------


class FiberDivisor:
    """Divisor on D~: a Gamma + b H + c1 B1 + c2 B2 + i^*(pullback)."""

    def __init__(
        self,
        setting: ProductSetting,
        graph=0,
        section_graph=0,
        blocks: Tuple[object, object] = (0, 0),
        pullback: Optional[ProductClass] = None,
    ):
        self.setting = setting
        self.graph = as_ratfunc(graph)
        self.section_graph = as_ratfunc(section_graph)
        self.blocks = (as_ratfunc(blocks[0]), as_ratfunc(blocks[1]))
        self.pullback = setting.zero() if pullback is None else pullback
        if self.pullback.degrees() - {2}:
            raise ValueError("pullback part must be a divisor class on S x T")

    def __add__(self, other: "FiberDivisor") -> "FiberDivisor":
        return FiberDivisor(
            self.setting,
            self.graph + other.graph,
            self.section_graph + other.section_graph,
            (self.blocks[0] + other.blocks[0], self.blocks[1] + other.blocks[1]),
            self.pullback + other.pullback,
        )

    def __mul__(self, c) -> "FiberDivisor":
        c = as_ratfunc(c)
        return FiberDivisor(
            self.setting,
            self.graph * c,
            self.section_graph * c,
            (self.blocks[0] * c, self.blocks[1] * c),
            self.pullback * c,
        )

    __rmul__ = __mul__

    def __neg__(self) -> "FiberDivisor":
        return self * -1

    def __sub__(self, other: "FiberDivisor") -> "FiberDivisor":
        return self + (-other)

    def push(self) -> ProductClass:
        """i_* of the divisor, a degree-4 class on S x T."""
        st = self.setting
        out = st.graph() * self.graph + st.section_graph() * self.section_graph
        for i, c in enumerate(self.blocks, start=1):
            out = out + st.block(i) * c
        return out + st.fiber_product() * self.pullback

    def _restrict(self, kind: str) -> SurfaceClass:
        """Restriction to the graph of phi (kind 'G') or of psi (kind 'H'), as a class on T."""
        st = self.setting
        own, other = (self.graph, self.section_graph) if kind == "G" else (self.section_graph, self.graph)
        graph_unit = st.graph() if kind == "G" else st.section_graph()
        out = push2(graph_unit * self.pullback)
        out = out + st.second.gen(st.section) * other
        for i, c in enumerate(self.blocks, start=1):
            out = out + st.block_trace(i) * c
        if not own.is_zero():
            out = out + graph_normal_class(st, kind) * own
        return out

    def restrict_to_graph(self) -> SurfaceClass:
        return self._restrict("G")

    def restrict_to_section_graph(self) -> SurfaceClass:
        return self._restrict("H")

    def times(self, other: "FiberDivisor") -> ProductClass:
        """i_*(self . other), a degree-6 class on S x T."""
        st = self.setting
        out = st.graph(other.restrict_to_graph()) * self.graph
        out = out + st.section_graph(other.restrict_to_section_graph()) * self.section_graph
        for i, c in enumerate(self.blocks, start=1):
            if c.is_zero():
                continue
            trace = st.block_trace(i)
            # B_i lies in a fiber of D~, so B_i . B_j = 0; it meets each graph in d/m_i fibers.
            out = out + (st.graph(trace) * other.graph + st.section_graph(trace) * other.section_graph) * c
            out = out + st.block(i) * other.pullback * c
        if not self.pullback.is_zero():
            x = self.pullback
            out = out + st.graph() * x * other.graph + st.section_graph() * x * other.section_graph
            for j, c in enumerate(other.blocks, start=1):
                out = out + st.block(j) * x * c
            out = out + st.fiber_product() * x * other.pullback
        return out


def normal_divisor(setting: ProductSetting) -> FiberDivisor:
    """c1 of the normal bundle of D~ -> S x T: i^*D - (m1-1) B1 - (m2-1) B2."""
    S = setting.surface
    return FiberDivisor(
        setting,
        blocks=(-(S.m1 - 1), -(S.m2 - 1)),
        pullback=setting.fiber_product(),
    )


def graph_normal_class(setting: ProductSetting, kind: str) -> SurfaceClass:
    """c1 of the normal bundle of a graph inside D~, as a class on T.

    The graph of a map g: T -> S has normal bundle g^*T_S in S x T; removing
    the normal bundle of D~ restricted to the graph leaves the normal bundle
    inside D~.
    """
    st = setting
    pull = st.phi_star if kind == "G" else st.psi_star
    ambient = pull(st.first_c1)
    return ambient - normal_divisor(st)._restrict_without_self(kind)


def _restrict_without_self(self: FiberDivisor, kind: str) -> SurfaceClass:
    if (kind == "G" and not self.graph.is_zero()) or (kind == "H" and not self.section_graph.is_zero()):
        raise ValueError("normal divisor unexpectedly contains a graph component")
    return self._restrict(kind)


FiberDivisor._restrict_without_self = _restrict_without_self  # type: ignore[attr-defined]


# ---------------------------------------------------------------------------
# Settings used by the pipelines
# ---------------------------------------------------------------------------


def section_setting(pg=None) -> ProductSetting:
    """S x S for a surface with section; the graph of the identity is the diagonal."""
    S = EllipticSurface.with_section(pg)
    lat = section_lattice(S)
    identity = LatticeMap(lat, lat, {g: lat.gen(g) for g in lat.generators}, lat.pt())
    return ProductSetting(S, lat, lat, identity, first_chern_class(S, lat))


def cover_setting(S: Optional[EllipticSurface] = None, e=None) -> ProductSetting:
    """S x T for the degree-d cover T of a surface with two multiple fibers."""
    S = EllipticSurface() if S is None else S
    base = base_lattice(S, e)
    cover = cover_lattice(S, e)
    return ProductSetting(S, base, cover, cover_pullback(S, base, cover), first_chern_class(S, base))


# ---------------------------------------------------------------------------
# Chern characters fed into the pushforwards
# ---------------------------------------------------------------------------


def ch_rank2_dual(c1: SurfaceClass, c2) -> SurfaceClass:
    """ch(V^dual) = 2 - c1 + ((c1^2 - 2 c2)/2) [pt] for a rank-2 bundle V."""
    lat = c1.lattice
    c1 = c1.part(2)
    return lat.one() * 2 - c1 + lat.pt() * ((c1.square() - 2 * as_ratfunc(c2)) / 2)


def ch_diagonal_structure(setting: ProductSetting) -> ProductClass:
    """ch O_diag = j_*(Todd(N)^{-1}) with N = T_S, for the diagonal of S x S."""
    from .surface import todd_class

    todd = todd_class(setting.surface, setting.second)
    return setting.graph(todd.inverse())


def ch_P_general(setting: ProductSetting, e=None) -> Dict[int, ProductClass]:
    """Graded pieces of ch i_*O_{D~}(G) with G = -Gamma + (e+2) H.

    Keys are real degrees 2, 4, 6.  By GRR for the immersion i: D~ -> S x T
    the pieces are i_*1, i_*(G - N/2) and i_*(G^2/2 - G.N/2 + N^2/6), with N
    the normal divisor; higher pieces cannot reach H^2(T) after pushforward.
    """
    from .exact import var

    e = var("e") if e is None else as_ratfunc(e)
    G = FiberDivisor(setting, graph=-1, section_graph=e + 2)
    N = normal_divisor(setting)
    one = setting.fiber_product()
    deg4 = G.push() - N.push() / 2
    deg6 = G.times(G) / 2 - G.times(N) / 2 + N.times(N) / 6
    return {2: one, 4: deg4, 6: deg6}
