"""Table-backed arithmetic in small finite fields GF(p^e).

Elements are plain integers in ``[0, q)``: the base-``p`` digits of an
element are the coefficients of the residue-class representative, lowest
power first.  Every field carries full ``q x q`` addition/multiplication
tables, both as numpy arrays (for vectorised elimination) and as nested
lists (for scalar loops, where list indexing is much cheaper).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product

import numpy as np

MAX_Q = 64
MAX_E = 4

# Fixed moduli, low coefficient first.  Normative: file formats depend on them.
MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),  # t^2 + t + 1
    (2, 3): (1, 1, 0, 1),  # t^3 + t + 1
    (2, 4): (1, 1, 0, 0, 1),  # t^4 + t + 1
    (3, 2): (1, 0, 1),  # t^2 + 1
    (3, 3): (1, 2, 0, 1),  # t^3 + 2t + 1
    (5, 2): (1, 1, 1),  # t^2 + t + 1
    (7, 2): (1, 0, 1),  # t^2 + 1
}


class FieldError(ValueError):
    """Unsupported field parameters or an illegal field operation."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _poly_mod_p(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a by monic b over GF(p); lists are low-first."""
    a = a[:]
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return [x % p for x in a[:db]] + [0] * max(0, db - len(a))


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Brute-force irreducibility test for monic polynomials of degree <= 4."""
    e = len(modulus) - 1
    if e < 1 or modulus[-1] != 1:
        return False
    if e == 1:
        return True
    # no monic factor of degree 1..e//2
    for d in range(1, e // 2 + 1):
        for low in product(range(p), repeat=d):
            divisor = list(low) + [1]
            if not any(_poly_mod_p(list(modulus), divisor, p)):
                return False
    return True


@dataclass(frozen=True, eq=False)
class FieldParams:
    p: int
    e: int
    modulus: tuple[int, ...]
    q: int = dc_field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p**self.e)
        add, mul = _build_tables(self.p, self.e, self.modulus)
        neg = [0] * self.q
        inv = [0] * self.q
        for a in range(self.q):
            neg[a] = add[a].index(0)
            if a:
                inv[a] = mul[a].index(1)
        sub = [[add[a][neg[b]] for b in range(self.q)] for a in range(self.q)]
        object.__setattr__(self, "add_table", add)
        object.__setattr__(self, "sub_table", sub)
        object.__setattr__(self, "mul_table", mul)
        object.__setattr__(self, "neg_table", neg)
        object.__setattr__(self, "inv_table", inv)
        object.__setattr__(self, "ADD", np.array(add, dtype=np.uint8))
        object.__setattr__(self, "SUB", np.array(sub, dtype=np.uint8))
        object.__setattr__(self, "MUL", np.array(mul, dtype=np.uint8))
        object.__setattr__(self, "NEG", np.array(neg, dtype=np.uint8))
        object.__setattr__(self, "INV", np.array(inv, dtype=np.uint8))

    # Equality by parameters so that pickled copies compare equal.
    def __eq__(self, other):
        return isinstance(other, FieldParams) and (self.p, self.e, self.modulus) == (
            other.p,
            other.e,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __reduce__(self):
        return (make_field, (self.p, self.e))

    def __repr__(self):
        return f"GF({self.q})"

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    @property
    def char2(self) -> bool:
        return self.p == 2

    # scalar helpers on integer reps
    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.sub_table[a][b]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul_table[a][self.inv(b)]

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result = 1
        while k:
            if k & 1:
                result = self.mul_table[result][a]
            a = self.mul_table[a][a]
            k >>= 1
        return result

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> GF(q)."""
        return n % self.p

    def element(self, rep: int) -> "FieldElement":
        return FieldElement(self, rep)


def _digits(a: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        out.append(a % p)
        a //= p
    return out


def _undigits(d: list[int], p: int) -> int:
    a = 0
    for c in reversed(d):
        a = a * p + c
    return a


def _build_tables(p: int, e: int, modulus: tuple[int, ...]):
    q = p**e
    digits = [_digits(a, p, e) for a in range(q)]
    add = [[_undigits([(x + y) % p for x, y in zip(digits[a], digits[b])], p) for b in range(q)] for a in range(q)]
    mul = [[0] * q for _ in range(q)]
    for a in range(q):
        for b in range(a, q):
            prod = [0] * (2 * e - 1)
            for i, x in enumerate(digits[a]):
                if x:
                    for j, y in enumerate(digits[b]):
                        prod[i + j] += x * y
            r = _undigits(_poly_mod_p(prod, list(modulus), p), p) if e > 1 else prod[0] % p
            mul[a][b] = mul[b][a] = r
    return add, mul


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> FieldParams:
    """GF(p^e) with the modulus fixed by :data:`MODULI`.

    Raises FieldError for non-prime p or parameters outside the supported range.
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if not 1 <= e <= MAX_E or p**e > MAX_Q:
        raise FieldError(f"unsupported field GF({p}^{e}): need 1 <= e <= {MAX_E} and q <= {MAX_Q}")
    if e == 1:
        modulus = (0, 1)
    else:
        if (p, e) not in MODULI:
            raise FieldError(f"no modulus registered for GF({p}^{e})")
        modulus = MODULI[(p, e)]
        if not is_irreducible(modulus, p):
            raise FieldError(f"registered modulus for GF({p}^{e}) is reducible")
    return FieldParams(p, e, modulus)


def field_of_size(q: int) -> FieldParams:
    """Look up GF(q) by its cardinality."""
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1:
                break
            return make_field(p, e)
    raise FieldError(f"{q} is not a prime power")


@dataclass(frozen=True)
class FieldElement:
    field: FieldParams
    rep: int

    def __post_init__(self):
        if not 0 <= self.rep < self.field.q:
            raise FieldError(f"rep {self.rep} outside [0, {self.field.q})")

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement) or other.field != self.field:
            raise FieldError("field mismatch")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.add(self.rep, other.rep))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.sub(self.rep, other.rep))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.mul(self.rep, other.rep))

    def __truediv__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.div(self.rep, other.rep))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.rep))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.rep, k))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.rep))

    def __int__(self):
        return self.rep

    def __repr__(self):
        return f"{self.rep}@{self.field!r}"


_BINARY = {"add", "sub", "mul", "div"}


def field_arith(a: FieldElement, b: FieldElement | int | None, op: str) -> FieldElement:
    """Dispatch a named field operation; ``b`` is the exponent for ``pow``."""
    if op in _BINARY:
        if not isinstance(b, FieldElement):
            raise FieldError(f"{op} needs two field elements")
        a._check(b)
        if op == "div" and b.rep == 0:
            raise ZeroDivisionError("division by zero")
        return {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}[op](b)
    if op == "neg":
        return -a
    if op == "inv":
        if a.rep == 0:
            raise ZeroDivisionError("inverse of zero")
        return a.inverse()
    if op == "pow":
        if not isinstance(b, int):
            raise FieldError("pow needs an integer exponent")
        return a**b
    raise FieldError(f"unknown operation {op!r}")


def sample_uniform(field: FieldParams, rng: np.random.Generator) -> FieldElement:
    return FieldElement(field, int(rng.integers(field.q)))


def sample_reps(field: FieldParams, rng: np.random.Generator, size) -> np.ndarray:
    """Vector of uniform element reps."""
    return rng.integers(field.q, size=size).astype(np.uint8)
