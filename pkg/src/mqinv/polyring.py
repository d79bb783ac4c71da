"""Sparse multivariate polynomials over GF(q) with grevlex/lex term orders.

Monomials are exponent tuples ``(e_1, ..., e_n)``; variable ``x_1`` is index 0
and is the largest variable in both orders.  Polynomials map monomials to
nonzero integer field reps.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Iterable, Mapping, Sequence

from .field import FieldElement, FieldParams

Monomial = tuple[int, ...]


class PolyError(ValueError):
    pass


@dataclass(frozen=True)
class TermOrder:
    kind: str

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex"):
            raise PolyError(f"unknown term order {self.kind!r}")

    def key(self, m: Monomial):
        """Sort key: larger key means larger monomial."""
        if self.kind == "lex":
            return m
        return (sum(m), tuple(-e for e in reversed(m)))

    @property
    def degree_compatible(self) -> bool:
        return self.kind == "grevlex"

    def __str__(self):
        return self.kind


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")


def as_order(order: TermOrder | str) -> TermOrder:
    return order if isinstance(order, TermOrder) else TermOrder(order)


def monomial_cmp(u: Monomial, v: Monomial, order: TermOrder | str = GREVLEX) -> int:
    """-1, 0 or 1 as u is smaller than, equal to or greater than v."""
    if len(u) != len(v):
        raise PolyError("monomials live in rings of different dimension")
    order = as_order(order)
    ku, kv = order.key(u), order.key(v)
    return (ku > kv) - (ku < kv)


def mono_mul(u: Monomial, v: Monomial) -> Monomial:
    return tuple(a + b for a, b in zip(u, v))


def mono_div(u: Monomial, v: Monomial) -> Monomial:
    return tuple(a - b for a, b in zip(u, v))


def mono_divides(v: Monomial, u: Monomial) -> bool:
    return all(a <= b for a, b in zip(v, u))


def mono_lcm(u: Monomial, v: Monomial) -> Monomial:
    return tuple(max(a, b) for a, b in zip(u, v))


def unit(n: int, i: int, e: int = 1) -> Monomial:
    return tuple(e if j == i else 0 for j in range(n))


def count_monomials(n: int, d: int) -> int:
    """dim R_d = C(n+d-1, d)."""
    if d < 0:
        return 0
    return comb(n + d - 1, d)


@lru_cache(maxsize=512)
def _monomials_of_degree(n: int, d: int, kind: str) -> tuple[Monomial, ...]:
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    order = TermOrder(kind)
    out.sort(key=order.key, reverse=True)
    return tuple(out)


def monomials_of_degree(n: int, d: int, order: TermOrder | str = GREVLEX) -> list[Monomial]:
    """All degree-d monomials in n variables, strictly decreasing."""
    if n < 1 or d < 0:
        raise PolyError("need n >= 1 and d >= 0")
    return list(_monomials_of_degree(n, d, as_order(order).kind))


@lru_cache(maxsize=256)
def _monomials_upto(n: int, d: int, kind: str) -> tuple[Monomial, ...]:
    out = []
    for k in range(d, -1, -1):
        out.extend(_monomials_of_degree(n, k, "grevlex"))
    if kind == "lex":
        out.sort(reverse=True)
    return tuple(out)


def monomials_upto(n: int, d: int, order: TermOrder | str = GREVLEX) -> list[Monomial]:
    """All monomials of degree <= d, strictly decreasing in the order."""
    return list(_monomials_upto(n, d, as_order(order).kind))


def monomial_type(u: Monomial) -> tuple[int, int, int] | None:
    """(D, k, a) with k the 1-based index of the first variable present and a its
    exponent; None for the constant monomial."""
    for i, e in enumerate(u):
        if e:
            return (sum(u), i + 1, e)
    return None


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps monomial -> nonzero rep."""

    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field: FieldParams, nvars: int, terms: Mapping[Monomial, int] | None = None):
        self.field = field
        self.nvars = nvars
        clean = {}
        if terms:
            for m, c in terms.items():
                if len(m) != nvars:
                    raise PolyError(f"monomial {m} does not have {nvars} exponents")
                if c:
                    clean[tuple(m)] = int(c)
        self.terms: dict[Monomial, int] = clean
        self._hash = None

    @classmethod
    def _raw(cls, field, nvars, terms):
        """Trusted constructor: terms already clean."""
        obj = cls.__new__(cls)
        obj.field, obj.nvars, obj.terms, obj._hash = field, nvars, terms, None
        return obj

    @classmethod
    def zero(cls, field, nvars):
        return cls._raw(field, nvars, {})

    @classmethod
    def constant(cls, field, nvars, c: int):
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, field, nvars, i: int):
        return cls._raw(field, nvars, {unit(nvars, i): 1})

    @classmethod
    def monomial(cls, field, nvars, m: Monomial, c: int = 1):
        return cls(field, nvars, {tuple(m): c})

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def monomials(self, order: TermOrder | str = GREVLEX) -> list[Monomial]:
        return sorted(self.terms, key=as_order(order).key, reverse=True)

    def leading_monomial(self, order: TermOrder | str = GREVLEX) -> Monomial:
        if not self.terms:
            raise PolyError("zero polynomial has no leading monomial")
        return max(self.terms, key=as_order(order).key)

    def leading_coefficient(self, order: TermOrder | str = GREVLEX) -> int:
        return self.terms[self.leading_monomial(order)]

    def coefficient(self, m: Monomial) -> int:
        return self.terms.get(tuple(m), 0)

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._raw(self.field, self.nvars, {m: c for m, c in self.terms.items() if sum(m) == d})

    # arithmetic
    def _check(self, other: "Polynomial"):
        if self.field != other.field or self.nvars != other.nvars:
            raise PolyError("polynomials from different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        add = self.field.add_table
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = add[out.get(m, 0)][c]
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.field, self.nvars, out)

    def __neg__(self) -> "Polynomial":
        neg = self.field.neg_table
        return Polynomial._raw(self.field, self.nvars, {m: neg[c] for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, c: int) -> "Polynomial":
        if c == 0:
            return Polynomial.zero(self.field, self.nvars)
        mul = self.field.mul_table[c]
        return Polynomial._raw(self.field, self.nvars, {m: mul[a] for m, a in self.terms.items()})

    def shift(self, u: Monomial) -> "Polynomial":
        """Multiply by the monomial u."""
        return Polynomial._raw(self.field, self.nvars, {mono_mul(m, u): c for m, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        add, mul = self.field.add_table, self.field.mul_table
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            row = mul[c1]
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = add[out.get(m, 0)][row[c2]]
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.field, self.nvars, out)

    def __pow__(self, k: int) -> "Polynomial":
        result = Polynomial.constant(self.field, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def monic(self, order: TermOrder | str = GREVLEX) -> "Polynomial":
        return self.scale(self.field.inv(self.leading_coefficient(order)))

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.field == other.field
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({to_text(self)!r}, {self.field!r}, n={self.nvars})"

    def evaluate(self, point: Sequence[int | FieldElement]) -> int:
        return evaluate(self, point)


def top_part(f: Polynomial) -> Polynomial:
    """Homogeneous component of largest degree."""
    if f.is_zero():
        raise PolyError("zero polynomial has no top part")
    return f.homogeneous_part(f.degree())


def _rep(x) -> int:
    return x.rep if isinstance(x, FieldElement) else int(x)


def evaluate(f: Polynomial, point: Sequence[int | FieldElement]) -> int:
    """Value of f at a point of GF(q)^n, as an integer rep."""
    if len(point) != f.nvars:
        raise PolyError(f"point has {len(point)} coordinates, ring has {f.nvars} variables")
    F = f.field
    vals = [_rep(a) for a in point]
    add, mul = F.add_table, F.mul_table
    powers: dict[tuple[int, int], int] = {}
    total = 0
    for m, c in f.terms.items():
        v = c
        for i, e in enumerate(m):
            if e:
                key = (i, e)
                pw = powers.get(key)
                if pw is None:
                    pw = powers[key] = F.pow(vals[i], e)
                v = mul[v][pw]
                if not v:
                    break
        total = add[total][v]
    return total


def reduce_mod_field_eqs(f: Polynomial, q: int | None = None) -> Polynomial:
    """Rewrite x^q -> x until every exponent is at most q-1."""
    q = f.field.q if q is None else q
    add = f.field.add_table
    out: dict[Monomial, int] = {}
    for m, c in f.terms.items():
        r = tuple(e if e < q else (e - 1) % (q - 1) + 1 for e in m)
        v = add[out.get(r, 0)][c]
        if v:
            out[r] = v
        else:
            out.pop(r, None)
    return Polynomial._raw(f.field, f.nvars, out)


def substitute(f: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    """f(images[0], ..., images[n-1]); the images may live in another ring."""
    if len(images) != f.nvars:
        raise PolyError("need one image per variable")
    if not images:
        return f
    target = images[0]
    result = Polynomial.zero(target.field, target.nvars)
    cache: dict[tuple[int, int], Polynomial] = {}
    one = Polynomial.constant(target.field, target.nvars, 1)
    for m, c in f.terms.items():
        term = one.scale(c)
        for i, e in enumerate(m):
            if e:
                pw = cache.get((i, e))
                if pw is None:
                    pw = cache[(i, e)] = images[i] ** e
                term = term * pw
        result = result + term
    return result


# ---------------------------------------------------------------- text format

def _term_text(m: Monomial, c: int) -> str:
    factors = [f"x{i + 1}^{e}" for i, e in enumerate(m) if e]
    return "*".join([str(c)] + factors) if factors else str(c)


def to_text(f: Polynomial, order: TermOrder | str = GREVLEX) -> str:
    if f.is_zero():
        return "0"
    return " + ".join(_term_text(m, f.terms[m]) for m in f.monomials(order))


_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse_polynomial(text: str, field: FieldParams, nvars: int) -> Polynomial:
    """Inverse of :func:`to_text`; whitespace-insensitive, ``^1`` optional."""
    s = "".join(text.split())
    if not s:
        raise PolyError("empty polynomial")
    add, mul = field.add_table, field.mul_table
    out: dict[Monomial, int] = {}
    for term in s.split("+"):
        if not term:
            raise PolyError(f"empty term in {text!r}")
        coeff = 1
        exps = [0] * nvars
        for factor in term.split("*"):
            if factor.isdigit():
                c = int(factor)
                if c >= field.q:
                    raise PolyError(f"coefficient {c} is not an element of {field!r}")
                coeff = mul[coeff][c]
                continue
            mt = _FACTOR.match(factor)
            if not mt:
                raise PolyError(f"cannot parse factor {factor!r}")
            i = int(mt.group(1)) - 1
            if not 0 <= i < nvars:
                raise PolyError(f"variable x{i + 1} outside x1..x{nvars}")
            exps[i] += int(mt.group(2)) if mt.group(2) else 1
        m = tuple(exps)
        v = add[out.get(m, 0)][coeff]
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return Polynomial._raw(field, nvars, out)


# ---------------------------------------------------------------- systems

@dataclass
class PolySystem:
    polys: list[Polynomial]
    metadata: dict[str, str] = dc_field(default_factory=dict)

    def __post_init__(self):
        self.polys = list(self.polys)
        if not self.polys:
            raise PolyError("a polynomial system must be nonempty")
        f0 = self.polys[0]
        for f in self.polys[1:]:
            if f.field != f0.field or f.nvars != f0.nvars:
                raise PolyError("all polynomials of a system must share field and variable count")

    @property
    def field(self) -> FieldParams:
        return self.polys[0].field

    @property
    def nvars(self) -> int:
        return self.polys[0].nvars

    @property
    def q(self) -> int:
        return self.field.q

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    @property
    def degrees(self) -> list[int]:
        return [f.degree() for f in self.polys]

    def max_degree(self) -> int:
        return max(self.degrees)

    def top(self) -> "PolySystem":
        """The homogeneous system of top parts (zero polynomials dropped)."""
        return PolySystem([top_part(f) for f in self.polys if not f.is_zero()], dict(self.metadata))

    def is_homogeneous(self) -> bool:
        return all(f.is_homogeneous() for f in self.polys)

    def evaluate(self, point) -> list[int]:
        return [evaluate(f, point) for f in self.polys]

    def has_field_equations(self) -> bool:
        """True when x_i^q - x_i is present for every variable."""
        q, n, F = self.q, self.nvars, self.field
        wanted = set()
        for i in range(n):
            wanted.add(frozenset({(unit(n, i, q), 1), (unit(n, i), F.neg(1))}))
        present = {frozenset(f.terms.items()) for f in self.polys}
        return wanted <= present

    def __eq__(self, other):
        return isinstance(other, PolySystem) and self.polys == other.polys


def field_equations(field: FieldParams, nvars: int) -> list[Polynomial]:
    q = field.q
    return [
        Polynomial._raw(field, nvars, {unit(nvars, i, q): 1, unit(nvars, i): field.neg(1)})
        for i in range(nvars)
    ]


def polys_from_terms(field: FieldParams, nvars: int, rows: Iterable[Mapping[Monomial, int]]) -> list[Polynomial]:
    return [Polynomial(field, nvars, t) for t in rows]
