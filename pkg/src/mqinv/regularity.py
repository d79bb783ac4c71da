"""Degree of regularity, LexPlusPowers ideals, randomness and semiregularity tests."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .macaulay import build_homogeneous, ideal_dim_in_degree, matrix_rank
from .polyring import (
    LEX,
    Monomial,
    Polynomial,
    PolyError,
    PolySystem,
    count_monomials,
    monomial_type,
    monomials_of_degree,
    top_part,
)


class SeriesError(ValueError):
    """A power-series prefix too short to locate its first non-positive term."""


# ---------------------------------------------------------------- d_reg

def _tops(F) -> list[Polynomial]:
    return [top_part(f) for f in F if not f.is_zero()]


def default_dreg_cap(F: PolySystem | Sequence[Polynomial]) -> int:
    polys = [f for f in F if not f.is_zero()]
    cap = 1 + sum(f.degree() - 1 for f in polys)
    system = F if isinstance(F, PolySystem) else PolySystem(polys)
    if system.has_field_equations():
        cap = min(cap, 2 + system.nvars * (system.q - 1))
    return max(cap, 0)


def degree_of_regularity(F: PolySystem | Sequence[Polynomial], d_cap: int | None = None) -> int | None:
    """min{d : (F^top)_d = R_d}, or None when no such d <= d_cap exists."""
    polys = [f for f in F if not f.is_zero()]
    if not polys:
        return None
    n = polys[0].nvars
    if d_cap is None:
        d_cap = default_dreg_cap(polys if not isinstance(F, PolySystem) else F)
    tops = _tops(polys)
    mindeg = min(f.degree() for f in tops)
    for d in range(mindeg, d_cap + 1):
        full = count_monomials(n, d)
        rows = sum(count_monomials(n, d - f.degree()) for f in tops)
        if rows < full:
            continue
        if ideal_dim_in_degree(tops, d) == full:
            return d
    return None


def independent_top_count(F: PolySystem | Sequence[Polynomial], q: int | None = None) -> int:
    """dim of the span of the degree-D top parts of an equal-degree system.

    With ``q`` the span is taken modulo (x_1^q, ..., x_n^q)_D.  The bound
    formulas count polynomials this way, after Gaussian elimination on the tops.
    """
    tops = _tops(F)
    if not tops:
        return 0
    D = tops[0].degree()
    if any(f.degree() != D for f in tops):
        raise PolyError("independent_top_count needs equal degrees")
    if q is not None:
        tops = [
            Polynomial._raw(f.field, f.nvars, {u: c for u, c in f.terms.items() if max(u) < q})
            for f in tops
        ]
        tops = [f for f in tops if not f.is_zero()]
        if not tops:
            return 0
    return build_homogeneous(tops, D).rank()


# ---------------------------------------------------------------- monomial ideals

def artinian_regularity(generators: Sequence[Monomial]) -> int:
    """min{d : every degree-d monomial is divisible by a generator}.

    Needs a pure power of every variable among the generators.
    """
    gens = [tuple(g) for g in generators]
    if not gens:
        raise PolyError("empty generator list")
    n = len(gens[0])
    if any(not any(g) for g in gens):
        return 0
    powers = [None] * n
    for g in gens:
        nz = [i for i, e in enumerate(g) if e]
        if len(nz) == 1:
            i = nz[0]
            powers[i] = g[i] if powers[i] is None else min(powers[i], g[i])
    if any(p is None for p in powers):
        raise PolyError("monomial ideal is not artinian")
    # standard monomials live in the box e_i < c_i
    grids = np.indices(powers).reshape(n, -1).T
    standard = np.ones(len(grids), dtype=bool)
    for g in gens:
        standard &= ~(grids >= np.array(g)).all(axis=1)
    if not standard.any():
        return 0
    return int(grids[standard].sum(axis=1).max()) + 1


@dataclass(frozen=True)
class LppIdeal:
    powers: tuple[int, ...]
    seg_degree: int
    seg_monomials: tuple[Monomial, ...]

    @property
    def nvars(self) -> int:
        return len(self.powers)

    def generators(self) -> list[Monomial]:
        n = self.nvars
        pw = [tuple(c if j == i else 0 for j in range(n)) for i, c in enumerate(self.powers)]
        return pw + list(self.seg_monomials)

    def contains(self, m: Monomial) -> bool:
        return any(all(a <= b for a, b in zip(g, m)) for g in self.generators())


def _in_power_ideal(m: Monomial, c: Sequence[int]) -> bool:
    return any(e >= ci for e, ci in zip(m, c))


def lpp_of(c_list: Sequence[int], C: int, target_dim: int) -> LppIdeal:
    """(c; C)-LPP ideal with dim L_C = target_dim, L the largest lex segment."""
    c = tuple(int(x) for x in c_list)
    if not c or any(x < 1 for x in c) or list(c) != sorted(c):
        raise PolyError("powers must be positive and non-decreasing")
    if C < 0:
        raise PolyError("segment degree must be nonnegative")
    n = len(c)
    mons = monomials_of_degree(n, C, LEX)
    base = sum(_in_power_ideal(m, c) for m in mons)
    if not base <= target_dim <= len(mons):
        raise PolyError(f"target_dim {target_dim} outside [{base}, {len(mons)}]")
    need = target_dim - base
    seg: list[Monomial] = []
    for m in mons:
        if _in_power_ideal(m, c):
            seg.append(m)
        elif need > 0:
            seg.append(m)
            need -= 1
        else:
            break
    return LppIdeal(c, C, tuple(seg))


def lpp_regularity(ideal: LppIdeal) -> int:
    """t_k + sum_{i>k} (c_i - 1), with u = x_k^{t_k} v the smallest segment
    monomial outside the power ideal.

    Segment monomials already divisible by a power do not enlarge the ideal and
    are skipped when locating u.  If every segment monomial is such, the ideal
    is the pure-power complete intersection and sum(c_i - 1) + 1 is returned.
    """
    c, C = ideal.powers, ideal.seg_degree
    top = sum(x - 1 for x in c)
    if not 2 <= C <= top:
        raise PolyError(f"segment degree {C} outside [2, {top}]")
    new = [m for m in ideal.seg_monomials if not _in_power_ideal(m, c)]
    if not new:
        return top + 1
    _, k, t = monomial_type(new[-1])
    return t + sum(x - 1 for x in c[k:])


# ---------------------------------------------------------------- randomness

@dataclass(frozen=True)
class RandomnessVerdict:
    verdict: str
    method: str
    witness_degree: int | None = None
    trials: int | None = None

    @property
    def is_random(self) -> bool:
        return self.verdict == "random"

    def __str__(self):
        if self.method == "monte-carlo":
            return f"{self.verdict} method={self.method} trials={self.trials}"
        w = "none" if self.witness_degree is None else self.witness_degree
        return f"{self.verdict} method={self.method} witness={w}"


def regular_sequence_hilbert(degrees: Sequence[int], n: int, d_max: int) -> list[int]:
    """Coefficients of prod(1 - z^d_i) / (1 - z)^n up to z^d_max."""
    num = np.zeros(d_max + 1, dtype=object)
    num[0] = 1
    for d in degrees:
        shifted = np.zeros_like(num)
        if d <= d_max:
            shifted[d:] = num[: d_max + 1 - d]
        num = num - shifted
    out = []
    for k in range(d_max + 1):
        out.append(int(sum(num[j] * count_monomials(n, k - j) for j in range(k + 1))))
    return out


def _random_combination(tops: list[Polynomial], d: int, rng: np.random.Generator) -> Polynomial:
    """Uniform element of sum_j R_{d - d_j} f_j (as a random combination of the rows of M_d)."""
    usable = [f for f in tops if f.degree() <= d]
    M = build_homogeneous(usable, d)
    F = M.field
    coeffs = rng.integers(F.q, size=M.shape[0]).astype(np.uint8)
    acc = np.zeros(M.shape[1], dtype=np.uint8)
    for c, row in zip(coeffs, M.entries):
        if c:
            acc = F.ADD[acc, F.MUL[c][row]]
    return Polynomial._raw(F, tops[0].nvars, {M.columns[j]: int(acc[j]) for j in np.flatnonzero(acc)})


def is_algebraically_random(
    F: PolySystem | Sequence[Polynomial],
    trials: int = 20,
    rng: np.random.Generator | int | None = None,
) -> RandomnessVerdict:
    polys = [f for f in F if not f.is_zero()]
    if not polys:
        raise PolyError("empty system")
    n = polys[0].nvars
    if len(polys) < n:
        raise PolyError(f"need at least n={n} polynomials, got {len(polys)}")
    tops = _tops(polys)
    degs = sorted(f.degree() for f in tops)
    if degs[0] == degs[-1]:
        D = degs[0]
        for d in range(0, n * (D - 1) + 2):
            if count_monomials(n, d) - ideal_dim_in_degree(tops, d) == 0:
                return RandomnessVerdict("random", "deterministic-artinian", witness_degree=d)
        return RandomnessVerdict("not_random", "deterministic-artinian")
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    delta = degs[:n]
    top = sum(d - 1 for d in delta) + 1
    expected = regular_sequence_hilbert(delta, n, top)
    for t in range(1, trials + 1):
        seq = [_random_combination(tops, d, rng) for d in delta]
        seq_nz = [g for g in seq if not g.is_zero()]
        if len(seq_nz) < n:
            continue
        h = [count_monomials(n, d) - ideal_dim_in_degree(seq_nz, d) for d in range(top + 1)]
        if h == expected:
            return RandomnessVerdict("random", "monte-carlo", trials=t)
    return RandomnessVerdict("undetermined", "monte-carlo", trials=trials)


# ---------------------------------------------------------------- semiregularity

def is_semiregular(F_top: PolySystem | Sequence[Polynomial], d_cap: int | None = None) -> bool:
    """Pardue's condition: every multiplication map has maximal rank up to d_cap."""
    polys = list(F_top)
    if not polys:
        raise PolyError("empty system")
    if not all(f.is_homogeneous() for f in polys):
        raise PolyError("semiregularity is defined for homogeneous input")
    n = polys[0].nvars
    if d_cap is None:
        d_cap = 1 + sum(max(f.degree(), 1) - 1 for f in polys)

    def dim_I(gens, e):
        gens = [g for g in gens if not g.is_zero() and g.degree() <= e]
        return ideal_dim_in_degree(gens, e) if gens else 0

    for i, f in enumerate(polys):
        prev = polys[:i]
        di = max(f.degree(), 0)
        for e in range(di, d_cap + 1):
            src = count_monomials(n, e - di) - dim_I(prev, e - di)
            dst = count_monomials(n, e) - dim_I(prev, e)
            rank = dim_I(polys[: i + 1], e) - dim_I(prev, e)
            if rank != min(src, dst):
                return False
    return True


# ---------------------------------------------------------------- series

def truncated_series(coeffs: Sequence[int]) -> tuple[list[int], int]:
    """([p], delta) with delta = min{i : p_i <= 0} - 1."""
    for i, p in enumerate(coeffs):
        if p <= 0:
            return [int(x) for x in coeffs[:i]], i - 1
    raise SeriesError(f"no non-positive coefficient among the first {len(coeffs)} terms")


@dataclass(frozen=True)
class SeriesPrediction:
    coeffs: tuple[int, ...]
    truncation: tuple[int, ...]
    delta: int
    in_scope: bool


def semiregular_hilbert_prediction(n: int, q: int, d: int, d_max: int | None = None) -> SeriesPrediction:
    """[(1 - z^d)(1 + z + ... + z^{q-1})^n]; ``in_scope`` is False for q = 2."""
    if n < 1 or q < 2 or d < 0:
        raise ValueError("need n >= 1, q >= 2, d >= 0")
    if d_max is None:
        d_max = d + n * (q - 1)
    base = [1]
    for _ in range(n):
        nxt = [0] * (len(base) + q - 1)
        for i, b in enumerate(base):
            for j in range(q):
                nxt[i + j] += b
        base = nxt
    full = [0] * (max(len(base) + d, d_max + 1))
    for i, b in enumerate(base):
        full[i] += b
        full[i + d] -= b
    coeffs = full[: d_max + 1]
    trunc, delta = truncated_series(coeffs + [0])
    return SeriesPrediction(tuple(coeffs), tuple(trunc), delta, q > 2)
