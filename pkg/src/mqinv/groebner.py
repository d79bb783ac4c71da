"""Groebner-basis checks, standard and mutant solving degrees, and a solver.

The solving degree is decided at the definition level: the rows of the
reduced Macaulay matrix at degree d (closed under the mutant strategy for the
mutant variant) are tested with Buchberger's criterion.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .field import FieldParams
from .macaulay import build, fill_matrix, rref_matrix, stack_rows, _column_index
from .polyring import (
    GREVLEX,
    LEX,
    Monomial,
    Polynomial,
    PolyError,
    PolySystem,
    TermOrder,
    as_order,
    field_equations,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    monomials_upto,
)


class CapExceeded(RuntimeError):
    """Raised when a degree loop reaches its cap; carries the per-degree log."""

    def __init__(self, message: str, log: list | None = None, cap: int | None = None):
        super().__init__(message)
        self.log = log or []
        self.cap = cap


def _neg_key(order: TermOrder):
    """Heap key: smallest value for the largest monomial."""
    if order.kind == "lex":
        return lambda m: tuple(-e for e in m)
    return lambda m: (-sum(m), m[::-1])


class _Reducer:
    """Multivariate division by a fixed list of polynomials (made monic)."""

    def __init__(self, G: Sequence[Polynomial], order: TermOrder):
        if not G:
            raise PolyError("empty divisor list")
        self.order = order
        self.field = G[0].field
        self.lms: list[Monomial] = []
        self.tails: list[list[tuple[Monomial, int]]] = []
        for g in G:
            if g.is_zero():
                raise PolyError("zero polynomial in divisor list")
            g = g.monic(order)
            lm = g.leading_monomial(order)
            self.lms.append(lm)
            self.tails.append([(m, c) for m, c in g.terms.items() if m != lm])
        self._div_cache: dict[Monomial, int] = {}
        self._shift_cache: dict[Monomial, list[tuple[Monomial, int]]] = {}
        self._nk = _neg_key(order)

    def divisor(self, m: Monomial) -> int:
        idx = self._div_cache.get(m)
        if idx is None:
            idx = -1
            for i, lm in enumerate(self.lms):
                if all(a <= b for a, b in zip(lm, m)):
                    idx = i
                    break
            self._div_cache[m] = idx
        return idx

    def shifted_tail(self, m: Monomial, i: int) -> list[tuple[Monomial, int]]:
        """Tail of G[i] times m / LM(G[i])."""
        t = self._shift_cache.get(m)
        if t is None:
            u = mono_div(m, self.lms[i])
            if any(u):
                t = [(tuple(a + b for a, b in zip(mm, u)), c) for mm, c in self.tails[i]]
            else:
                t = self.tails[i]
            self._shift_cache[m] = t
        return t

    def reduce_terms(self, terms: dict[Monomial, int]) -> dict[Monomial, int]:
        sub, mul = self.field.sub_table, self.field.mul_table
        nk = self._nk
        cur = dict(terms)
        heap = [(nk(m), m) for m in cur]
        heapq.heapify(heap)
        rem: dict[Monomial, int] = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = cur.pop(m, 0)
            if not c:
                continue
            i = self.divisor(m)
            if i < 0:
                rem[m] = c
                continue
            row = mul[c]
            for m2, c2 in self.shifted_tail(m, i):
                old = cur.get(m2)
                if old is None:
                    cur[m2] = sub[0][row[c2]]
                    heapq.heappush(heap, (nk(m2), m2))
                else:
                    v = sub[old][row[c2]]
                    if v:
                        cur[m2] = v
                    else:
                        del cur[m2]
        return rem

    def normal_form(self, f: Polynomial) -> Polynomial:
        return Polynomial._raw(f.field, f.nvars, self.reduce_terms(f.terms))


def normal_form(f: Polynomial, G: Sequence[Polynomial], order: TermOrder | str = GREVLEX) -> Polynomial:
    """Fully reduced remainder of f on division by G."""
    return _Reducer(list(G), as_order(order)).normal_form(f)


@dataclass
class GroebnerBasis:
    polys: list[Polynomial]
    order: TermOrder
    reduced: bool = False

    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_monomial(self.order) for g in self.polys]

    def is_unit(self) -> bool:
        return any(not any(m) for m in self.leading_monomials())


def minimalize(G: Sequence[Polynomial], order: TermOrder | str = GREVLEX) -> list[Polynomial]:
    """Monic copies of the elements whose leading monomial is not divisible by
    another element's (first occurrence kept on ties)."""
    order = as_order(order)
    items = [(g.leading_monomial(order), g) for g in G]
    # smaller degree first, so that divisors are met before multiples
    idx = sorted(range(len(items)), key=lambda i: (sum(items[i][0]), i))
    kept: list[int] = []
    kept_lms: list[Monomial] = []
    for i in idx:
        lm = items[i][0]
        if any(mono_divides(k, lm) for k in kept_lms):
            continue
        kept.append(i)
        kept_lms.append(lm)
    kept.sort()
    return [items[i][1].monic(order) for i in kept]


def _pairs_to_check(lms: list[Monomial]) -> list[tuple[int, int]]:
    """Pairs surviving the coprime and (strict) chain criteria, sorted by lcm degree."""
    N = len(lms)
    if N < 2:
        return []
    L = np.array(lms, dtype=np.int32)
    out: list[tuple[int, int, int]] = []
    for i in range(N - 1):
        J = np.arange(i + 1, N)
        lc = np.maximum(L[i], L[J])
        coprime = ~((L[i] > 0) & (L[J] > 0)).any(axis=1)
        J, lc = J[~coprime], lc[~coprime]
        if J.size == 0:
            continue
        # k with LM_k | lcm_ij, lcm_ik != lcm_ij, lcm_jk != lcm_ij
        div = (L[None, :, :] <= lc[:, None, :]).all(axis=2)
        lik = np.maximum(L[i][None, :], L)
        ne_ik = (lik[None, :, :] != lc[:, None, :]).any(axis=2)
        ljk = np.maximum(L[J][:, None, :], L[None, :, :])
        ne_jk = (ljk != lc[:, None, :]).any(axis=2)
        chain = (div & ne_ik & ne_jk).any(axis=1)
        for j, l, ch in zip(J.tolist(), lc.sum(axis=1).tolist(), chain.tolist()):
            if not ch:
                out.append((l, i, j))
    out.sort()
    return [(i, j) for _, i, j in out]


def _spoly_terms(red: _Reducer, i: int, j: int) -> dict[Monomial, int]:
    sub = red.field.sub_table
    lcm = mono_lcm(red.lms[i], red.lms[j])
    terms: dict[Monomial, int] = dict(_shift(red, i, lcm))
    for m, c in _shift(red, j, lcm):
        v = sub[terms.get(m, 0)][c]
        if v:
            terms[m] = v
        else:
            terms.pop(m, None)
    return terms


def _shift(red: _Reducer, i: int, target: Monomial) -> list[tuple[Monomial, int]]:
    u = mono_div(target, red.lms[i])
    return [(tuple(a + b for a, b in zip(m, u)), c) for m, c in red.tails[i]]


def _buchberger_ok(Gmin: list[Polynomial], order: TermOrder) -> bool:
    if len(Gmin) < 2:
        return True
    red = _Reducer(Gmin, order)
    for i, j in _pairs_to_check(red.lms):
        if red.reduce_terms(_spoly_terms(red, i, j)):
            return False
    return True


def is_groebner_basis(G: Sequence[Polynomial], order: TermOrder | str = GREVLEX) -> bool:
    """Buchberger's criterion (with coprime and chain skips)."""
    order = as_order(order)
    G = list(G)
    if not G:
        raise PolyError("empty list")
    if any(g.is_zero() for g in G):
        raise PolyError("zero polynomial in G")
    Gmin = minimalize(G, order)
    if not _buchberger_ok(Gmin, order):
        return False
    red = _Reducer(Gmin, order)
    return all(not red.reduce_terms(g.terms) for g in G)


def is_groebner_basis_of(G: Sequence[Polynomial], F: Sequence[Polynomial], order: TermOrder | str = GREVLEX) -> bool:
    """True iff G (a subset of the ideal of F) contains a Groebner basis of (F)."""
    order = as_order(order)
    G = [g for g in G if not g.is_zero()]
    if not G:
        return all(f.is_zero() for f in F)
    Gmin = minimalize(G, order)
    if not _buchberger_ok(Gmin, order):
        return False
    red = _Reducer(Gmin, order)
    return all(not red.reduce_terms(f.terms) for f in F)


def reduce_basis(G: Sequence[Polynomial], order: TermOrder | str = GREVLEX) -> list[Polynomial]:
    """Reduced Groebner basis from any Groebner basis G, sorted by leading monomial."""
    order = as_order(order)
    Gmin = minimalize(G, order)
    out = []
    for i, g in enumerate(Gmin):
        lm = g.leading_monomial(order)
        others = Gmin[:i] + Gmin[i + 1 :]
        tail = {m: c for m, c in g.terms.items() if m != lm}
        if others and tail:
            tail = _Reducer(others, order).reduce_terms(tail)
        tail[lm] = 1
        out.append(Polynomial._raw(g.field, g.nvars, tail))
    out.sort(key=lambda g: order.key(g.leading_monomial(order)), reverse=True)
    return out


def buchberger(F: Sequence[Polynomial], order: TermOrder | str = GREVLEX) -> list[Polynomial]:
    """Plain Buchberger algorithm; reference implementation for small inputs."""
    order = as_order(order)
    G = [f.monic(order) for f in F if not f.is_zero()]
    if not G:
        return []
    pairs = [(i, j) for i in range(len(G)) for j in range(i)]
    while pairs:
        i, j = pairs.pop()
        gi, gj = G[i], G[j]
        li, lj = gi.leading_monomial(order), gj.leading_monomial(order)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        lcm = mono_lcm(li, lj)
        s = gi.shift(mono_div(lcm, li)) - gj.shift(mono_div(lcm, lj))
        r = normal_form(s, G, order) if not s.is_zero() else s
        if not r.is_zero():
            G.append(r.monic(order))
            k = len(G) - 1
            pairs.extend((k, t) for t in range(k))
    return reduce_basis(G, order)


# ---------------------------------------------------------------- solving degree

@dataclass
class DegreeStep:
    d: int
    rows: int
    cols: int
    rank: int
    mutants: int
    gb: bool

    def __str__(self):
        return f"d={self.d} rows={self.rows} cols={self.cols} rank={self.rank} mutants={self.mutants} gb={'yes' if self.gb else 'no'}"


@dataclass
class SolvingDegreeResult:
    degree: int
    variant: str
    basis: GroebnerBasis
    per_degree_log: list[DegreeStep] = dc_field(default_factory=list)

    def log_text(self) -> str:
        return "\n".join(map(str, self.per_degree_log))


def default_solvdeg_cap(F: PolySystem | Sequence[Polynomial]) -> int:
    degs = sorted(f.degree() for f in F if not f.is_zero())
    n = next(iter(F)).nvars
    return 2 * (1 + sum(d - 1 for d in degs[:n]))


def _prepare(F, d_cap):
    polys = [f for f in F if not f.is_zero()]
    if not polys:
        raise PolyError("system has no nonzero polynomial")
    maxdeg = max(f.degree() for f in polys)
    if d_cap is None:
        d_cap = max(default_solvdeg_cap(polys), maxdeg)
    if d_cap < maxdeg:
        raise PolyError(f"cap {d_cap} below the maximal degree {maxdeg}")
    return polys, maxdeg, d_cap


def _rows_to_polys(R: np.ndarray, columns: list[Monomial], F: FieldParams, n: int) -> list[Polynomial]:
    out = []
    for row in R:
        nz = np.flatnonzero(row)
        out.append(Polynomial._raw(F, n, {columns[j]: int(row[j]) for j in nz}))
    return out


def _reorder(R: np.ndarray, src_cols: list[Monomial], order: TermOrder, F: FieldParams):
    """RREF of the span of R with columns re-sorted for ``order``."""
    if order.kind == "grevlex":
        return R, src_cols
    n, d = len(src_cols[0]), max(sum(m) for m in src_cols)
    cols = monomials_upto(n, d, order)
    pos = {m: i for i, m in enumerate(src_cols)}
    perm = np.array([pos[m] for m in cols])
    R2, _ = rref_matrix(R[:, perm], F, dedup=False)
    return R2, cols


def _finish(d, polys, R, columns, order, field, n, log, variant):
    R_o, cols_o = _reorder(R, columns, order, field)
    rows = _rows_to_polys(R_o, cols_o, field, n)
    gb = is_groebner_basis_of(rows, polys, order)
    return rows, gb


def _low_count(R: np.ndarray, col_deg: np.ndarray, d: int) -> np.ndarray:
    """Boolean mask of rows with degree < d (columns sorted by degree desc)."""
    if R.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    top = col_deg == d
    return ~R[:, top].any(axis=1)


def solving_degree_standard(
    F: PolySystem | Sequence[Polynomial],
    order: TermOrder | str = GREVLEX,
    d_cap: int | None = None,
    verbose=None,
) -> SolvingDegreeResult:
    """Least d such that the reduced M_{<=d} contains a Groebner basis of (F)."""
    order = as_order(order)
    polys, maxdeg, d_cap = _prepare(F, d_cap)
    field, n = polys[0].field, polys[0].nvars
    log: list[DegreeStep] = []
    prev_rank = None
    for d in range(maxdeg, d_cap + 1):
        M = build(polys, d, GREVLEX)
        R, piv = rref_matrix(M.entries, field)
        col_deg = np.array([sum(m) for m in M.columns])
        low = int(_low_count(R, col_deg, d).sum())
        if prev_rank is None:
            prev_rank = _first_low_rank(polys, d, field)
        rows, gb = _finish(d, polys, R, M.columns, order, field, n, log, "standard")
        step = DegreeStep(d, M.shape[0], M.shape[1], len(piv), max(0, low - prev_rank), gb)
        log.append(step)
        if verbose:
            verbose(str(step))
        if gb:
            return SolvingDegreeResult(d, "standard", GroebnerBasis(reduce_basis(rows, order), order, True), log)
        prev_rank = len(piv)
    raise CapExceeded(f"no Groebner basis up to degree {d_cap}", log, d_cap)


def _first_low_rank(polys, d, field) -> int:
    low = [f for f in polys if f.degree() < d]
    if not low:
        return 0
    from .macaulay import matrix_rank

    return matrix_rank(build(low, d - 1, GREVLEX).entries, field)


def _shift_maps(columns: list[Monomial], d: int, n: int):
    """For each variable i: (src, dst) column indices with dst = src * x_i, src of degree < d."""
    vec, lookup = _column_index(columns, d)
    src = np.array([j for j, m in enumerate(columns) if sum(m) < d], dtype=np.int64)
    maps = []
    if vec is not None:
        weights, sorted_keys, perm = vec
        keys = np.array([columns[j] for j in src], dtype=np.int64).reshape(len(src), n) @ weights
        for i in range(n):
            pos = np.searchsorted(sorted_keys, keys + weights[i])
            maps.append((src, perm[pos]))
    else:
        for i in range(n):
            dst = np.array([lookup[mono_mul(columns[j], tuple(int(k == i) for k in range(n)))] for j in src], dtype=np.int64)
            maps.append((src, dst))
    return maps


def mutant_closure(R: np.ndarray, columns: list[Monomial], d: int, field: FieldParams, max_rounds: int = 10_000):
    """Close the row span under x_i * g for rows g of degree < d.

    Columns must be sorted by decreasing degree.  Returns (R, rounds, appended).
    """
    n = len(columns[0])
    col_deg = np.array([sum(m) for m in columns])
    maps = None
    prev_pivots = None
    rounds = appended = 0
    while rounds < max_rounds:
        low = _low_count(R, col_deg, d)
        lowR = R[low]
        pivots = tuple(np.argmax(lowR != 0, axis=1).tolist()) if lowR.shape[0] else ()
        if pivots == prev_pivots or lowR.shape[0] == 0:
            break
        prev_pivots = pivots
        if maps is None:
            maps = _shift_maps(columns, d, n)
        blocks = []
        for src, dst in maps:
            Z = np.zeros((lowR.shape[0], R.shape[1]), dtype=np.uint8)
            Z[:, dst] = lowR[:, src]
            blocks.append(Z)
        new = stack_rows(blocks, R.shape[1])
        appended += new.shape[0]
        R, _ = rref_matrix(np.vstack([R, new]), field)
        rounds += 1
    return R, rounds, appended


def solving_degree_mutant(
    F: PolySystem | Sequence[Polynomial],
    order: TermOrder | str = GREVLEX,
    d_cap: int | None = None,
    verbose=None,
) -> SolvingDegreeResult:
    """Least d such that the mutant closure of M_{<=d} contains a Groebner basis."""
    order = as_order(order)
    polys, maxdeg, d_cap = _prepare(F, d_cap)
    field, n = polys[0].field, polys[0].nvars
    log: list[DegreeStep] = []
    prev_rank = None
    for d in range(maxdeg, d_cap + 1):
        M = build(polys, d, GREVLEX)
        R, _ = rref_matrix(M.entries, field)
        if prev_rank is None:
            prev_rank = _first_low_rank(polys, d, field)
        R, rounds, appended = mutant_closure(R, M.columns, d, field)
        col_deg = np.array([sum(m) for m in M.columns])
        low = int(_low_count(R, col_deg, d).sum())
        rows, gb = _finish(d, polys, R, M.columns, order, field, n, log, "mutant")
        step = DegreeStep(d, M.shape[0] + appended, M.shape[1], R.shape[0], max(0, low - prev_rank), gb)
        log.append(step)
        if verbose:
            verbose(str(step))
        if gb:
            return SolvingDegreeResult(d, "mutant", GroebnerBasis(reduce_basis(rows, order), order, True), log)
        prev_rank = R.shape[0]
    raise CapExceeded(f"no Groebner basis up to degree {d_cap}", log, d_cap)


# ---------------------------------------------------------------- solving

EXHAUSTIVE_LIMIT = 2**24


def _power_table(field: FieldParams, max_e: int) -> np.ndarray:
    P = np.zeros((field.q, max_e + 1), dtype=np.uint8)
    for a in range(field.q):
        for e in range(max_e + 1):
            P[a, e] = field.pow(a, e) if (a or e) else 1
    return P


def evaluate_many(f: Polynomial, points: np.ndarray) -> np.ndarray:
    """Values of f at each row of ``points`` (uint8 reps)."""
    F = f.field
    N = points.shape[0]
    out = np.zeros(N, dtype=np.uint8)
    if f.is_zero():
        return out
    P = _power_table(F, max(max(m) for m in f.terms))
    for m, c in f.terms.items():
        v = np.full(N, c, dtype=np.uint8)
        for i, e in enumerate(m):
            if e:
                v = F.MUL[v, P[points[:, i], e]]
        out = F.ADD[out, v]
    return out


def _all_points(q: int, n: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    pts = np.empty((stop - start, n), dtype=np.uint8)
    for i in range(n - 1, -1, -1):
        pts[:, i] = idx % q
        idx //= q
    return pts


def _solve_exhaustive(polys: list[Polynomial], q: int, n: int, chunk: int = 1 << 18) -> list[tuple[int, ...]]:
    sols: list[tuple[int, ...]] = []
    total = q**n
    ordered = sorted(polys, key=lambda f: len(f.terms))
    for start in range(0, total, chunk):
        pts = _all_points(q, n, start, min(total, start + chunk))
        for f in ordered:
            if pts.shape[0] == 0:
                break
            pts = pts[evaluate_many(f, pts) == 0]
        sols.extend(tuple(int(a) for a in row) for row in pts)
    return sols


def _solve_groebner(polys: list[Polynomial], q: int, n: int) -> list[tuple[int, ...]]:
    field = polys[0].field
    system = polys + field_equations(field, n)
    res = solving_degree_mutant(system, LEX, d_cap=max(f.degree() for f in system) + n * (q - 1) + 2)
    G = res.basis.polys
    if res.basis.is_unit():
        return []
    # polys touching only x_k..x_n, for each k
    def first_var(g):
        return min(i for m in g.terms for i, e in enumerate(m) if e) if any(any(m) for m in g.terms) else n

    by_level: dict[int, list[Polynomial]] = {}
    for g in G:
        by_level.setdefault(first_var(g), []).append(g)
    partial: list[list[int]] = [[0] * n]
    for k in range(n - 1, -1, -1):
        nxt = []
        for pt in partial:
            for a in range(q):
                cand = pt[:]
                cand[k] = a
                if all(g.evaluate(cand) == 0 for g in by_level.get(k, [])):
                    nxt.append(cand)
        partial = nxt
    return sorted(tuple(p) for p in partial)


def solve_system(F: PolySystem | Sequence[Polynomial], q: int | None = None, method: str = "auto") -> list[tuple[int, ...]]:
    """All common zeros in GF(q)^n, sorted lexicographically by reps."""
    polys = list(F)
    if not polys:
        raise PolyError("empty system")
    field, n = polys[0].field, polys[0].nvars
    q = field.q if q is None else q
    if q != field.q:
        raise PolyError("solutions are taken over the coefficient field")
    polys = [f for f in polys if not f.is_zero()]
    if not polys:
        return [tuple(p) for p in _all_points(q, n, 0, q**n)] if q**n <= EXHAUSTIVE_LIMIT else _infeasible(q, n)
    if method == "auto":
        method = "exhaustive" if q**n <= EXHAUSTIVE_LIMIT else "groebner"
    if method == "exhaustive":
        if q**n > EXHAUSTIVE_LIMIT:
            _infeasible(q, n)
        return sorted(_solve_exhaustive(polys, q, n))
    if method == "groebner":
        return _solve_groebner(polys, q, n)
    raise ValueError(f"unknown method {method!r}")


def _infeasible(q, n):
    raise ValueError(f"exhaustive search over GF({q})^{n} is infeasible")
