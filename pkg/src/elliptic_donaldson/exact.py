"""Exact arithmetic: sparse multivariate polynomials over Q and their fraction field.

Polynomials live over a registry of named indeterminates.  A monomial is a
tuple of ``(index, exponent)`` pairs sorted by registry index, so monomials
built at different times compare equal regardless of how many names have
been declared since.

Rational functions keep a numerator/denominator pair.  Equality is decided by
cross-multiplication, which is always correct.  Normalization is deliberately
light: common monomial factors are cancelled, a constant denominator is folded
into the numerator, exact polynomial division is attempted when the
denominator is not a monomial, and the denominator is scaled to leading
coefficient one.  Every denominator produced by the intersection-theory
pipelines is a monomial in ``m1, m2, d``, and for those the normal form is
unique.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

__all__ = [
    "INDETERMINATES",
    "ExponentOverflowError",
    "NotLinearError",
    "Poly",
    "RatFunc",
    "Scalar",
    "as_ratfunc",
    "coefficients_in",
    "declare",
    "format_rational",
    "solve_linear",
    "symbols",
    "var",
]

_MAX_EXPONENT = 2**63 - 1

# Names of the free parameters used throughout the package.  The order fixes
# the lexicographic tie-break used when printing.
INDETERMINATES: list[str] = [
    "pg", "m1", "m2", "e", "d",
    "S2", "fS", "kS", "sS", "dS",
    "d2", "dsig", "c1", "c2", "d1", "d2c",
]
_INDEX: dict[str, int] = {name: i for i, name in enumerate(INDETERMINATES)}

Monomial = Tuple[Tuple[int, int], ...]
Scalar = Union[int, Fraction]


class ExponentOverflowError(OverflowError):
    """An exponent left the signed 64-bit range."""


class NotLinearError(ValueError):
    """Raised by :func:`solve_linear` when the expression is not affine in the unknown."""


def declare(name: str) -> str:
    """Register an extra indeterminate (idempotent) and return its name."""
    if not name or not name.replace("_", "a").isalnum() or name[0].isdigit():
        raise ValueError(f"invalid indeterminate name {name!r}")
    if name not in _INDEX:
        _INDEX[name] = len(INDETERMINATES)
        INDETERMINATES.append(name)
    return name


def _index(name: str) -> int:
    try:
        return _INDEX[name]
    except KeyError:
        raise KeyError(f"undeclared indeterminate {name!r}") from None


def _check_exponent(k: int) -> int:
    if k > _MAX_EXPONENT:
        raise ExponentOverflowError(f"exponent {k} exceeds 64-bit range")
    return k


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for i, k in b:
        merged[i] = _check_exponent(merged.get(i, 0) + k)
    return tuple(sorted(merged.items()))


def _mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when monomial ``a`` divides ``b``."""
    eb = dict(b)
    return all(eb.get(i, 0) >= k for i, k in a)


def _mono_div(b: Monomial, a: Monomial) -> Monomial:
    eb = dict(b)
    for i, k in a:
        eb[i] -= k
    return tuple(sorted((i, k) for i, k in eb.items() if k))


def _mono_degree(m: Monomial) -> int:
    return sum(k for _, k in m)


def _grlex_key(m: Monomial) -> tuple:
    # Larger key = earlier in printed order: total degree first, then the
    # exponent of the earliest registered variable, and so on.
    width = (m[-1][0] + 1) if m else 0
    vec = [0] * width
    for i, k in m:
        vec[i] = k
    return (_mono_degree(m), tuple(vec))


def _to_fraction(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


def format_rational(q: Fraction, always_slash: bool = False) -> str:
    """Render a rational as ``p/q`` (or ``p`` for integers unless ``always_slash``)."""
    q = Fraction(q)
    if q.denominator == 1 and not always_slash:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Poly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                c = _to_fraction(c)
                if c:
                    clean[mono] = c
        self._terms = clean

    # -- constructors -----------------------------------------------------
    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Poly":
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        c = _to_fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls._raw({((_index(name), 1),): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Mapping[str, int], coeff: Scalar = 1) -> "Poly":
        mono = tuple(sorted((_index(n), _check_exponent(k)) for n, k in exponents.items() if k))
        if any(k < 0 for _, k in mono):
            raise ValueError("negative exponent in polynomial monomial")
        return cls({mono: coeff})

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def variables(self) -> set[str]:
        return {INDETERMINATES[i] for m in self._terms for i, _ in m}

    def total_degree(self) -> int:
        return max((_mono_degree(m) for m in self._terms), default=-1)

    def degree_in(self, name: str) -> int:
        idx = _index(name)
        best = -1 if not self._terms else 0
        for m in self._terms:
            for i, k in m:
                if i == idx and k > best:
                    best = k
        return best

    def sorted_terms(self) -> list[Tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_term(self) -> Tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self._terms.items(), key=lambda t: _grlex_key(t[0]))

    def monomial_content(self) -> Monomial:
        """Largest monomial dividing every term."""
        it = iter(self._terms)
        try:
            common = dict(next(it))
        except StopIteration:
            return ()
        for m in it:
            em = dict(m)
            for i in list(common):
                k = min(common[i], em.get(i, 0))
                if k:
                    common[i] = k
                else:
                    del common[i]
            if not common:
                break
        return tuple(sorted(common.items()))

    # -- arithmetic -------------------------------------------------------
    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __add__(self, other: Union["Poly", Scalar]) -> "Poly":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __sub__(self, other: Union["Poly", Scalar]) -> "Poly":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other: Union["Poly", Scalar]) -> "Poly":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        if k == 0:
            return Poly.const(1)
        if len(self._terms) == 1:
            (m, c), = self._terms.items()
            return Poly._raw({tuple((i, _check_exponent(e * k)) for i, e in m): c**k})
        result, base = Poly.const(1), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: Scalar) -> "Poly":
        c = _to_fraction(c)
        if not c:
            return Poly()
        return Poly._raw({m: v * c for m, v in self._terms.items()})

    def shift_down(self, mono: Monomial) -> "Poly":
        """Divide every term by a monomial that is known to divide it."""
        return Poly._raw({_mono_div(m, mono): c for m, c in self._terms.items()})

    def exact_quotient(self, divisor: "Poly") -> Optional["Poly"]:
        """Return ``self / divisor`` if the division is exact, else ``None``.

        Uses the multivariate division algorithm in graded-lex order; with a
        single divisor the remainder vanishes exactly when ``divisor`` divides
        ``self``.
        """
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lm, lc = divisor.leading_term()
        rest = dict(self._terms)
        quotient: Dict[Monomial, Fraction] = {}
        while rest:
            m, c = max(rest.items(), key=lambda t: _grlex_key(t[0]))
            if not _mono_divides(lm, m):
                return None
            qm, qc = _mono_div(m, lm), c / lc
            quotient[qm] = quotient.get(qm, 0) + qc
            for dm, dc in divisor._terms.items():
                mm = _mono_mul(qm, dm)
                s = rest.get(mm, 0) - qc * dc
                if s:
                    rest[mm] = s
                else:
                    rest.pop(mm, None)
        return Poly(quotient)

    def coefficient_content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients."""
        num, den = 0, 1
        for c in self._terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den) if num else Fraction(1)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == Poly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- evaluation -------------------------------------------------------
    def evaluate_at(self, point: Mapping[int, Fraction]) -> Fraction:
        """Evaluate with every variable index present in ``point``."""
        total = Fraction(0)
        for m, c in self._terms.items():
            v = c
            for i, k in m:
                v *= point[i] ** k
            total += v
        return total

    def render(self, wrap_vars: bool = False) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            body = _render_monomial(m, wrap_vars)
            if not body:
                text = format_rational(abs(c))
            elif abs(c) == 1:
                text = body
            else:
                text = f"{format_rational(abs(c))}*{body}"
            pieces.append(("-" if c < 0 else "+", text))
        sign, first = pieces[0]
        out = ("-" if sign == "-" else "") + first
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Poly({self.render()!r})"


def _render_monomial(m: Monomial, wrap_vars: bool) -> str:
    parts = []
    for i, k in m:
        name = INDETERMINATES[i]
        if wrap_vars:
            name = f"({name})"
        parts.append(name if k == 1 else f"{name}^{k}")
    return "*".join(parts)


def _as_poly(x) -> "Poly":
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Poly.const(x)
    return NotImplemented


class RatFunc:
    """Immutable quotient of two polynomials, compared by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: Union[Poly, Scalar] = 0, den: Union[Poly, Scalar, None] = None):
        num = _as_poly(num)
        den = Poly.const(1) if den is None else _as_poly(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("RatFunc parts must be polynomials or rationals")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num, self.den = _normalize(num, den)

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFunc":
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num.constant_value() / self.den.constant_value()

    def free_symbols(self) -> set[str]:
        return self.num.variables() | self.den.variables()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    # -- arithmetic -------------------------------------------------------
    def __neg__(self) -> "RatFunc":
        return RatFunc._raw(-self.num, self.den)

    def __add__(self, other) -> "RatFunc":
        other = as_ratfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        if self.den.is_monomial() and other.den.is_monomial():
            (ma, ca), = self.den.items()
            (mb, cb), = other.den.items()
            lcm = dict(ma)
            for i, k in mb:
                lcm[i] = max(lcm.get(i, 0), k)
            lm = tuple(sorted(lcm.items()))
            num = self.num * Poly({_mono_div(lm, ma): 1 / ca}) + other.num * Poly({_mono_div(lm, mb): 1 / cb})
            return RatFunc(num, Poly({lm: 1}))
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc":
        other = as_ratfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        return as_ratfunc(other) - self

    def __mul__(self, other) -> "RatFunc":
        other = as_ratfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = as_ratfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return as_ratfunc(other) / self

    def __pow__(self, k: int) -> "RatFunc":
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        if k < 0:
            if self.is_zero():
                raise ZeroDivisionError("negative power of zero")
            return RatFunc._raw(*_normalize(self.den**-k, self.num**-k))
        return RatFunc._raw(self.num**k, self.den**k)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        other = as_ratfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        # Consistent with cross-multiplication equality: hash the value at a
        # fixed generic rational point.  Representatives whose denominator
        # vanishes there all share one bucket.
        names = self.num.variables() | self.den.variables()
        point = {_INDEX[n]: _HASH_POINT(_INDEX[n]) for n in names}
        d = self.den.evaluate_at(point)
        if not d:
            return 0x5EED
        return hash(self.num.evaluate_at(point) / d)

    # -- substitution -----------------------------------------------------
    def substitute(self, bindings: Mapping[str, object]) -> "RatFunc":
        """Ring homomorphism sending the named indeterminates to the given values.

        Values may be integers, Fractions, or RatFuncs.  Raises
        ZeroDivisionError when the denominator vanishes identically.
        """
        if not bindings:
            return self
        values = {_index(k): as_ratfunc(v) for k, v in bindings.items()}
        num = _substitute_poly(self.num, values)
        den = _substitute_poly(self.den, values)
        if den.is_zero():
            raise ZeroDivisionError("denominator vanishes under substitution")
        return num / den

    def __call__(self, **bindings) -> "RatFunc":
        return self.substitute(bindings)

    # -- display ----------------------------------------------------------
    def render(self, wrap_vars: bool = False) -> str:
        num = self.num.render(wrap_vars)
        if self.den == Poly.const(1):
            return num
        den = self.den.render(wrap_vars)
        if len(self.num.terms) > 1:
            num = f"({num})"
        if not self.den.is_monomial() or (self.den.is_monomial() and "*" in den and not self.den.is_constant()):
            den = f"({den})"
        return f"{num}/{den}"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"RatFunc({self.render()!r})"


def _HASH_POINT(i: int) -> Fraction:
    return Fraction(1_000_003 + 7919 * i, 97 + i)


def _substitute_poly(p: Poly, values: Mapping[int, RatFunc]) -> RatFunc:
    if all(v.is_constant() for v in values.values()):
        consts = {i: v.to_fraction() for i, v in values.items()}
        out: Dict[Monomial, Fraction] = {}
        for m, c in p.items():
            rest = []
            for i, k in m:
                if i in consts:
                    c = c * consts[i] ** k
                else:
                    rest.append((i, k))
            if c:
                key = tuple(rest)
                s = out.get(key, 0) + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return RatFunc(Poly._raw(out))
    total = RatFunc(0)
    powers: Dict[Tuple[int, int], RatFunc] = {}
    for m, c in p.items():
        term = RatFunc(c)
        rest = []
        for i, k in m:
            if i in values:
                key = (i, k)
                if key not in powers:
                    powers[key] = values[i] ** k
                term = term * powers[key]
            else:
                rest.append((i, k))
        if rest:
            term = term * RatFunc(Poly._raw({tuple(rest): Fraction(1)}))
        total = total + term
    return total


def _normalize(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    if num.is_zero():
        return Poly(), Poly.const(1)
    common = _common_monomial(num.monomial_content(), den.monomial_content())
    if common:
        num, den = num.shift_down(common), den.shift_down(common)
    if den.is_constant():
        return num.scale(1 / den.constant_value()), Poly.const(1)
    if not den.is_monomial():
        q = num.exact_quotient(den)
        if q is not None:
            return q, Poly.const(1)
        if not num.is_constant():
            q = den.exact_quotient(num)
            if q is not None:
                num, den = Poly.const(1), q
                if den.is_constant():
                    return Poly.const(1 / den.constant_value()), Poly.const(1)
    _, lc = den.leading_term()
    if lc != 1:
        num, den = num.scale(1 / lc), den.scale(1 / lc)
    return num, den


def _common_monomial(a: Monomial, b: Monomial) -> Monomial:
    eb = dict(b)
    return tuple((i, min(k, eb[i])) for i, k in a if i in eb)


def as_ratfunc(x, strict: bool = True):
    """Coerce ints, Fractions and Polys to RatFunc."""
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc(x)
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return RatFunc._raw(Poly.const(x), Poly.const(1))
    if strict:
        raise TypeError(f"cannot interpret {x!r} as a rational function")
    return NotImplemented


def var(name: str) -> RatFunc:
    """The indeterminate ``name`` as a rational function (declaring it if new)."""
    declare(name)
    return RatFunc._raw(Poly.var(name), Poly.const(1))


def symbols(names: str) -> tuple[RatFunc, ...]:
    return tuple(var(n) for n in names.split())


def solve_linear(expr: RatFunc, name: str) -> RatFunc:
    """Root of ``expr = 0`` for ``expr`` affine in the indeterminate ``name``."""
    expr = as_ratfunc(expr)
    if name in expr.den.variables() or expr.num.degree_in(name) > 1:
        raise NotLinearError(f"expression is not affine in {name}")
    b = expr.substitute({name: 0})
    a = expr.substitute({name: 1}) - b
    if a.is_zero():
        raise NotLinearError(f"expression does not depend on {name}")
    return -b / a


def coefficients_in(expr: RatFunc, names: Iterable[str]) -> Dict[Tuple[int, ...], RatFunc]:
    """Group ``expr`` by exponents of ``names``.

    The denominator must not involve ``names``.  Keys are exponent tuples in
    the order given; values are the (nonzero) coefficient rational functions.
    """
    expr = as_ratfunc(expr)
    names = list(names)
    idx = [_index(n) for n in names]
    if expr.den.variables() & set(names):
        raise ValueError("denominator involves a collected indeterminate")
    grouped: Dict[Tuple[int, ...], Dict[Monomial, Fraction]] = {}
    for m, c in expr.num.items():
        em = dict(m)
        key = tuple(em.pop(i, 0) for i in idx)
        rest = tuple(sorted(em.items()))
        bucket = grouped.setdefault(key, {})
        bucket[rest] = bucket.get(rest, 0) + c
    return {k: RatFunc(Poly(v), expr.den) for k, v in grouped.items() if Poly(v) != Poly()}
