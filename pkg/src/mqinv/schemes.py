"""Instance generators: random and LPP-sharp systems, HFEv- and Rainbow public
keys, linear disguise, squaring by fixing variables, field equations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .field import FieldParams, field_of_size, make_field
from .groebner import EXHAUSTIVE_LIMIT, solve_system
from .macaulay import build_homogeneous, gf_inverse, gf_matmul, gf_solve, matrix_rank, random_invertible
from .polyring import (
    LEX,
    Monomial,
    Polynomial,
    PolyError,
    PolySystem,
    evaluate,
    field_equations,
    monomials_of_degree,
    monomials_upto,
    reduce_mod_field_eqs,
    substitute,
    top_part,
    unit,
)


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def _fmt(values) -> str:
    return ",".join(str(int(v)) for v in values)


# ---------------------------------------------------------------- random / LPP

def gen_random_system(
    q: int,
    n: int,
    m: int,
    degrees: Sequence[int] | int,
    rng=None,
    independent_top: bool = False,
) -> PolySystem:
    """Dense uniform polynomials with deg f_i = degrees[i].

    ``independent_top`` resamples until the top parts are linearly independent
    (possible only for equal degrees and m <= dim R_D).
    """
    rng = _rng(rng)
    F = field_of_size(q)
    if isinstance(degrees, int):
        degrees = [degrees] * m
    degrees = list(degrees)
    if len(degrees) != m:
        raise PolyError("need one degree per polynomial")
    if n < 1 or m < 1 or any(d < 0 for d in degrees):
        raise PolyError("need n, m >= 1 and nonnegative degrees")
    if independent_top:
        if len(set(degrees)) != 1:
            raise PolyError("independent tops are only defined for equal degrees")
        if m > len(monomials_of_degree(n, degrees[0])):
            raise PolyError("more polynomials than degree-D monomials")
    while True:
        polys = [_random_poly(F, n, d, rng) for d in degrees]
        if not independent_top or _tops_independent(polys):
            break
    return PolySystem(polys, {"scheme": "random", "params": f"q={q} n={n} m={m} degrees={_fmt(degrees)}"})


def _random_poly(F: FieldParams, n: int, d: int, rng: np.random.Generator) -> Polynomial:
    top_mons = monomials_of_degree(n, d)
    low_mons = monomials_upto(n, d - 1) if d > 0 else []
    while True:
        top = rng.integers(F.q, size=len(top_mons))
        if top.any():
            break
    low = rng.integers(F.q, size=len(low_mons))
    terms = {m: int(c) for m, c in zip(top_mons, top) if c}
    terms.update({m: int(c) for m, c in zip(low_mons, low) if c})
    return Polynomial._raw(F, n, terms)


def _tops_independent(polys: list[Polynomial]) -> bool:
    tops = [top_part(f) for f in polys]
    M = build_homogeneous([t for t in tops], tops[0].degree())
    # rows of degree-D generators are the generators themselves
    return matrix_rank(M.entries, polys[0].field, dedup=False) == len(polys)


def gen_lpp_sharp_system(q: int, n: int, m: int, D: int) -> PolySystem:
    """x_i^D plus the first m - n non-pure-power degree-D monomials in lex order."""
    F = field_of_size(q)
    mons = [u for u in monomials_of_degree(n, D, LEX) if sum(1 for e in u if e) > 1]
    if not n <= m <= n + len(mons):
        raise PolyError(f"m={m} outside [{n}, {n + len(mons)}]")
    polys = [Polynomial._raw(F, n, {unit(n, i, D): 1}) for i in range(n)]
    polys += [Polynomial._raw(F, n, {u: 1}) for u in mons[: m - n]]
    return PolySystem(polys, {"scheme": "lpp-sharp", "params": f"q={q} n={n} m={m} D={D}"})


# ---------------------------------------------------------------- linear maps

def _apply_maps(F: PolySystem | Sequence[Polynomial], S: np.ndarray, T: np.ndarray, shift: np.ndarray | None = None) -> list[Polynomial]:
    """T . F(S x + shift)."""
    polys = list(F)
    field, n = polys[0].field, polys[0].nvars
    images = []
    for i in range(n):
        terms = {unit(n, j): int(S[i, j]) for j in range(n) if S[i, j]}
        if shift is not None and shift[i]:
            terms[(0,) * n] = int(shift[i])
        images.append(Polynomial._raw(field, n, terms))
    inner = [substitute(f, images) for f in polys]
    out = []
    for i in range(T.shape[0]):
        acc = Polynomial.zero(field, n)
        for j in range(T.shape[1]):
            if T[i, j]:
                acc = acc + inner[j].scale(int(T[i, j]))
        out.append(acc)
    return out


def disguise(F: PolySystem, rng=None, affine: bool = False) -> tuple[PolySystem, np.ndarray, np.ndarray]:
    """T . F(S x) for uniform invertible S (n x n) and T (m x m)."""
    rng = _rng(rng)
    field, n, m = F.field, F.nvars, len(F)
    S = random_invertible(n, field, rng)
    T = random_invertible(m, field, rng)
    shift = rng.integers(field.q, size=n).astype(np.uint8) if affine else None
    polys = _apply_maps(F, S, T, shift)
    return PolySystem(polys, dict(F.metadata)), S, T


# ---------------------------------------------------------------- HFEv-

GF2N_MODULI: dict[int, tuple[int, ...]] = {
    2: (2, 1, 0),
    3: (3, 1, 0),
    4: (4, 1, 0),
    5: (5, 2, 0),
    6: (6, 1, 0),
    7: (7, 1, 0),
    8: (8, 4, 3, 1, 0),
    9: (9, 1, 0),
    10: (10, 3, 0),
    11: (11, 2, 0),
    12: (12, 3, 0),
    13: (13, 4, 3, 1, 0),
    14: (14, 5, 0),
    15: (15, 1, 0),
    16: (16, 5, 3, 1, 0),
    17: (17, 3, 0),
    18: (18, 3, 0),
    19: (19, 5, 2, 1, 0),
    20: (20, 3, 0),
    21: (21, 2, 0),
    22: (22, 1, 0),
    23: (23, 5, 0),
    24: (24, 4, 3, 1, 0),
}


class GF2n:
    """GF(2^n) with elements as int bitmasks of polynomial-basis coordinates."""

    def __init__(self, n: int):
        if n not in GF2N_MODULI:
            raise PolyError(f"no modulus for GF(2^{n})")
        self.n = n
        self.modulus = sum(1 << e for e in GF2N_MODULI[n])

    def mul(self, a: int, b: int) -> int:
        r = 0
        top = 1 << self.n
        mod = self.modulus
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= mod
        return r

    def pow(self, a: int, k: int) -> int:
        r = 1
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            k >>= 1
        return r

    def frob(self, a: int, i: int) -> int:
        for _ in range(i):
            a = self.mul(a, a)
        return a


def gf2_poly_is_irreducible(exponents: Sequence[int]) -> bool:
    """Ben-Or test for a GF(2) polynomial given by its exponent list."""
    f = sum(1 << e for e in exponents)
    n = f.bit_length() - 1
    if n < 1:
        return False

    def pmod(a):
        while a and a.bit_length() - 1 >= n:
            a ^= f << (a.bit_length() - 1 - n)
        return a

    def mulmod(a, b):
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a = pmod(a << 1)
        return r

    def gcd(a, b):
        while b:
            a, b = b, _pmod_general(a, b)
        return a

    xp = 2
    for _ in range(n // 2):
        xp = mulmod(xp, xp)
        if gcd(f, xp ^ 2) != 1:
            return False
    return True


def _pmod_general(a: int, b: int) -> int:
    db = b.bit_length() - 1
    while a and a.bit_length() - 1 >= db:
        a ^= b << (a.bit_length() - 1 - db)
    return a


@dataclass(frozen=True)
class HfevParams:
    n: int
    d_hfe: int
    a: int
    v: int

    def __post_init__(self):
        if self.n not in GF2N_MODULI:
            raise PolyError(f"extension degree n={self.n} outside [2, 24]")
        if not 0 <= self.a < self.n:
            raise PolyError("need 0 <= a < n")
        if self.v < 0:
            raise PolyError("need v >= 0")
        if self.d_hfe < 3:
            raise PolyError("d_hfe must allow at least one quadratic exponent 2^i + 2^j (i < j)")

    @property
    def nvars(self) -> int:
        return self.n + self.v

    @property
    def m(self) -> int:
        return self.n - self.a


@dataclass
class HfevSecret:
    params: HfevParams
    field: GF2n
    alpha: dict[tuple[int, int], int]
    beta: dict[int, tuple[int, list[int]]]
    gamma: tuple[int, list[int], dict[tuple[int, int], int]]
    S: np.ndarray
    T: np.ndarray

    def central(self, X: int, V: Sequence[int]) -> int:
        K = self.field
        out = 0
        for (i, j), c in self.alpha.items():
            out ^= K.mul(c, K.pow(X, 2**i + 2**j))
        for i, (b0, bl) in self.beta.items():
            coef = b0
            for r, b in enumerate(bl):
                if V[r]:
                    coef ^= b
            out ^= K.mul(coef, K.frob(X, i))
        g0, gl, gq = self.gamma
        out ^= g0
        for r, g in enumerate(gl):
            if V[r]:
                out ^= g
        for (r, s), g in gq.items():
            if V[r] and V[s]:
                out ^= g
        return out

    def evaluate(self, point: Sequence[int]) -> list[int]:
        """Public map computed through the secret key: minus . T . F . S."""
        p = self.params
        F2 = make_field(2)
        z = gf_matmul(self.S, np.array(point, dtype=np.uint8).reshape(-1, 1), F2).ravel()
        X = sum(int(z[l]) << l for l in range(p.n))
        Y = self.central(X, [int(b) for b in z[p.n :]])
        y = np.array([(Y >> b) & 1 for b in range(p.n)], dtype=np.uint8).reshape(-1, 1)
        return [int(b) for b in gf_matmul(self.T, y, F2).ravel()[: p.m]]


def hfev_keypair(params: HfevParams, rng=None) -> tuple[PolySystem, HfevSecret]:
    rng = _rng(rng)
    n, d, v = params.n, params.d_hfe, params.v
    N = n + v
    K = GF2n(n)

    def rand_elt():
        return int(rng.integers(1 << n))

    alpha = {(i, j): rand_elt() for j in range(n) for i in range(j) if 2**i + 2**j <= d}
    beta = {i: (rand_elt(), [rand_elt() for _ in range(v)]) for i in range(n) if 2**i <= d}
    gamma = (
        rand_elt(),
        [rand_elt() for _ in range(v)],
        {(r, s): rand_elt() for s in range(v) for r in range(s)},
    )

    # central map as a multilinear polynomial over GF(2^n) in x_0..x_{n-1}, v_0..v_{v-1}
    big: dict[tuple[int, ...], int] = {}

    def add(key, c):
        if c:
            big[key] = big.get(key, 0) ^ c

    lin = {i: [K.frob(1 << l, i) for l in range(n)] for i in range(n)}
    for (i, j), c in alpha.items():
        for l in range(n):
            for l2 in range(n):
                coef = K.mul(c, K.mul(lin[i][l], lin[j][l2]))
                add((l,) if l == l2 else (min(l, l2), max(l, l2)), coef)
    for i, (b0, bl) in beta.items():
        for l in range(n):
            add((l,), K.mul(b0, lin[i][l]))
            for r, b in enumerate(bl):
                add((l, n + r), K.mul(b, lin[i][l]))
    g0, gl, gq = gamma
    add((), g0)
    for r, g in enumerate(gl):
        add((n + r,), g)
    for (r, s), g in gq.items():
        add((n + r, n + s), g)

    F2 = make_field(2)
    central: list[Polynomial] = []
    for b in range(n):
        terms = {}
        for key, c in big.items():
            if (c >> b) & 1:
                e = [0] * N
                for idx in key:
                    e[idx] += 1
                terms[tuple(e)] = 1
        central.append(Polynomial._raw(F2, N, terms))

    S = random_invertible(N, F2, rng)
    T = random_invertible(n, F2, rng)
    public = [reduce_mod_field_eqs(f, 2) for f in _apply_maps(central, S, T)[: params.m]]
    meta = {
        "scheme": "hfev",
        "params": f"n={n} d_hfe={d} a={params.a} v={v}",
        "conventions": "linear S,T; minus drops the last a outputs of T; reduced mod x^2=x",
    }
    secret = HfevSecret(params, K, alpha, beta, gamma, S, T)
    return PolySystem(public, meta), secret


def gen_hfev_minus(params: HfevParams, rng=None) -> PolySystem:
    """HFEv- public key: m = n - a quadratics over GF(2) in n + v variables."""
    return hfev_keypair(params, rng)[0]


# ---------------------------------------------------------------- Rainbow

@dataclass(frozen=True)
class RainbowParams:
    q: int
    layers: tuple[int, int, int]

    def __post_init__(self):
        if len(self.layers) != 3 or min(self.layers) < 1:
            raise PolyError("layers must be (v1, o1, o2) with all entries >= 1")
        field_of_size(self.q)

    @property
    def nvars(self) -> int:
        return sum(self.layers)

    @property
    def m(self) -> int:
        return self.layers[1] + self.layers[2]


@dataclass
class RainbowSecret:
    params: RainbowParams
    central: list[Polynomial]
    S: np.ndarray
    T: np.ndarray

    def sign(self, target: Sequence[int], rng=None, max_tries: int = 1000) -> tuple[int, ...]:
        """A preimage of ``target`` under the public map."""
        rng = _rng(rng)
        F = self.central[0].field
        v1, o1, o2 = self.params.layers
        N = v1 + o1 + o2
        y = gf_matmul(gf_inverse(self.T, F), np.array(target, dtype=np.uint8).reshape(-1, 1), F).ravel()
        for _ in range(max_tries):
            z = [0] * N
            z[:v1] = [int(a) for a in rng.integers(F.q, size=v1)]
            ok = True
            for polys, lo, hi in ((self.central[:o1], v1, v1 + o1), (self.central[o1:], v1 + o1, N)):
                rows = y[:o1] if lo == v1 else y[o1:]
                sol = self._solve_layer(polys, z, lo, hi, rows, F)
                if sol is None:
                    ok = False
                    break
                z[lo:hi] = sol
            if ok:
                x = gf_matmul(gf_inverse(self.S, F), np.array(z, dtype=np.uint8).reshape(-1, 1), F).ravel()
                return tuple(int(a) for a in x)
        raise RuntimeError("no signature found")

    @staticmethod
    def _solve_layer(polys, z, lo, hi, target, F):
        base = [evaluate(f, z) for f in polys]
        A = np.zeros((len(polys), hi - lo), dtype=np.uint8)
        for k in range(hi - lo):
            pt = list(z)
            pt[lo + k] = 1
            for r, f in enumerate(polys):
                A[r, k] = F.sub(evaluate(f, pt), base[r])
        if matrix_rank(A, F, dedup=False) < hi - lo:
            return None
        b = np.array([F.sub(int(t), c) for t, c in zip(target, base)], dtype=np.uint8)
        x = gf_solve(A, b, F)
        return None if x is None else [int(a) for a in x]


def _layer_poly(F: FieldParams, N: int, vin: range, oil: range, rng) -> Polynomial:
    used = list(vin) + list(oil)
    oil_set = set(oil)
    terms: dict[Monomial, int] = {}
    for a_i, i in enumerate(used):
        for j in used[a_i:]:
            if i in oil_set and j in oil_set:
                continue
            e = [0] * N
            e[i] += 1
            e[j] += 1
            terms[tuple(e)] = int(rng.integers(F.q))
    for i in used:
        terms[unit(N, i)] = int(rng.integers(F.q))
    terms[(0,) * N] = int(rng.integers(F.q))
    return Polynomial(F, N, terms)


def rainbow_keypair(params: RainbowParams, rng=None) -> tuple[PolySystem, RainbowSecret]:
    rng = _rng(rng)
    F = field_of_size(params.q)
    v1, o1, o2 = params.layers
    N = params.nvars
    central = [_layer_poly(F, N, range(0, v1), range(v1, v1 + o1), rng) for _ in range(o1)]
    central += [_layer_poly(F, N, range(0, v1 + o1), range(v1 + o1, N), rng) for _ in range(o2)]
    # every public polynomial must be quadratic
    S = random_invertible(N, F, rng)
    T = random_invertible(params.m, F, rng)
    public = _apply_maps(central, S, T)
    meta = {
        "scheme": "rainbow",
        "params": f"q={params.q} layers={_fmt(params.layers)}",
        "conventions": "linear S,T; central layers with linear and constant terms",
    }
    return PolySystem(public, meta), RainbowSecret(params, central, S, T)


def gen_rainbow(params: RainbowParams, rng=None) -> PolySystem:
    return rainbow_keypair(params, rng)[0]


# ---------------------------------------------------------------- squaring and field equations

def fix_variables(P: PolySystem | Sequence[Polynomial], s: Sequence[int], fixed: Sequence[int]) -> list[Polynomial]:
    """p_i - s_i with the last len(fixed) variables set to ``fixed``."""
    polys = list(P)
    field, nv = polys[0].field, polys[0].nvars
    keep = nv - len(fixed)
    images = [Polynomial.variable(field, keep, i) for i in range(keep)]
    images += [Polynomial.constant(field, keep, int(c)) for c in fixed]
    out = []
    for f, si in zip(polys, s):
        g = substitute(f, images) if fixed else f
        out.append(g - Polynomial.constant(field, keep, int(si)))
    return out


def make_square(P: PolySystem, s: Sequence[int] | None = None, rng=None, require_solvable: bool = True, max_attempts: int = 64) -> PolySystem:
    """Square system in m variables: subtract the target s and fix the last
    n_vars - m variables to uniform values.

    With ``require_solvable`` the target and fixings are resampled until the
    result has a solution over GF(q) (at most ``max_attempts`` tries); the
    metadata key ``solvable`` records yes / no / unchecked.
    """
    rng = _rng(rng)
    field, nv, m = P.field, P.nvars, len(P)
    if nv < m:
        raise PolyError(f"{nv} variables is fewer than {m} equations")
    checkable = field.q**m <= EXHAUSTIVE_LIMIT
    status = "unchecked"
    attempts = 0
    for attempts in range(1, max_attempts + 1):
        if s is None or attempts > 1:
            target = [int(a) for a in rng.integers(field.q, size=m)]
        else:
            target = [int(a) for a in s]
        fixed = [int(a) for a in rng.integers(field.q, size=nv - m)]
        polys = fix_variables(P, target, fixed)
        if not require_solvable or not checkable:
            status = "unchecked"
            break
        if solve_system(polys, method="exhaustive"):
            status = "yes"
            break
        status = "no"
    meta = dict(P.metadata)
    meta.update({"target": _fmt(target), "fixed": _fmt(fixed), "solvable": status, "attempts": str(attempts)})
    return PolySystem(polys, meta)


def add_field_equations(F: PolySystem, q: int | None = None) -> PolySystem:
    """Append x_i^q - x_i for every variable."""
    q = F.q if q is None else q
    if q != F.q:
        raise PolyError("field equations use the coefficient field size")
    meta = dict(F.metadata)
    meta["field_equations"] = "yes"
    return PolySystem(list(F.polys) + field_equations(F.field, F.nvars), meta)
