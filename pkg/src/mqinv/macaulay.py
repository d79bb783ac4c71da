"""Macaulay matrices and exact row reduction over GF(q)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .field import FieldParams
from .polyring import (
    GREVLEX,
    Monomial,
    Polynomial,
    PolyError,
    PolySystem,
    TermOrder,
    as_order,
    count_monomials,
    monomials_of_degree,
    monomials_upto,
)


# ---------------------------------------------------------------- elimination

def _dedup(A: np.ndarray) -> np.ndarray:
    """Drop zero and repeated rows, keeping first occurrences in order."""
    if A.shape[0] == 0:
        return A
    keep = A.any(axis=1)
    A = A[keep]
    if A.shape[0] < 2:
        return A
    packed = np.ascontiguousarray(A).view(np.dtype((np.void, A.shape[1] * A.itemsize))).ravel()
    _, first = np.unique(packed, return_index=True)
    first.sort()
    return A[first]


def _rref_gf2(A: np.ndarray, full: bool) -> tuple[np.ndarray, list[int]]:
    rows, cols = A.shape
    nbytes = (cols + 7) // 8
    nwords = (nbytes + 7) // 8
    buf = np.zeros((rows, nwords * 8), dtype=np.uint8)
    buf[:, :nbytes] = np.packbits(A, axis=1)
    W = buf.view(np.uint64)
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        byte, shift = c >> 3, 7 - (c & 7)
        nz = np.flatnonzero((buf[r:, byte] >> shift) & 1)
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            W[[r, p]] = W[[p, r]]
        w0 = byte >> 3
        if full:
            col = (buf[:, byte] >> shift) & 1
            col[r] = 0
            idx = np.flatnonzero(col)
        else:
            idx = r + 1 + np.flatnonzero((buf[r + 1 :, byte] >> shift) & 1)
        if idx.size:
            W[idx, w0:] ^= W[r, w0:]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    R = np.unpackbits(buf[:r, :nbytes], axis=1, count=cols) if full else np.zeros((0, cols), np.uint8)
    return R, pivots


def _rref_gfq(A: np.ndarray, F: FieldParams, full: bool) -> tuple[np.ndarray, list[int]]:
    A = A.copy()
    rows, cols = A.shape
    MUL, INV, NEG, SUB = F.MUL, F.INV, F.NEG, F.SUB
    p = F.p
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        a = A[r, c]
        if a != 1:
            A[r, c:] = MUL[INV[a]][A[r, c:]]
        if full:
            colv = A[:, c].copy()
            colv[r] = 0
            idx = np.flatnonzero(colv)
        else:
            idx = r + 1 + np.flatnonzero(A[r + 1 :, c])
        if idx.size:
            prow = A[r, c:]
            factors = A[idx, c]
            for f in np.unique(factors):
                sel = idx[factors == f] if len(idx) > 1 else idx
                if F.char2:
                    A[sel, c:] ^= MUL[f][prow]
                elif F.is_prime_field:
                    s = A[sel, c:] + MUL[NEG[f]][prow]
                    np.subtract(s, p, out=s, where=s >= p)
                    A[sel, c:] = s
                else:
                    A[sel, c:] = SUB[A[sel, c:], MUL[f][prow]]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return (A[:r] if full else np.zeros((0, cols), np.uint8)), pivots


def rref_matrix(A: np.ndarray, F: FieldParams, dedup: bool = True) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a dense matrix of reps.

    Returns the nonzero rows and their pivot columns (increasing column index,
    i.e. decreasing monomial when columns are sorted decreasingly).  Pivoting is
    deterministic: leftmost column, then smallest row index.
    """
    A = np.asarray(A, dtype=np.uint8)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    if dedup:
        A = _dedup(A)
    if A.shape[0] == 0 or A.shape[1] == 0:
        return np.zeros((0, A.shape[1]), np.uint8), []
    if F.q == 2:
        return _rref_gf2(A, True)
    return _rref_gfq(A, F, True)


def matrix_rank(A: np.ndarray, F: FieldParams, dedup: bool = True) -> int:
    A = np.asarray(A, dtype=np.uint8)
    if dedup:
        A = _dedup(A)
    if A.shape[0] == 0 or A.shape[1] == 0:
        return 0
    if F.q == 2:
        return len(_rref_gf2(A, False)[1])
    return len(_rref_gfq(A, F, False)[1])


# ---------------------------------------------------------------- matrices

@dataclass
class MacaulayMatrix:
    """Row-labelled coefficient matrix.

    ``rows[i]`` is ``(multiplier, source)``: the row holds multiplier * F[source].
    Sources that are not input polynomials (mutants) use string labels; rows of a
    reduced matrix have no label (``None``).
    """

    columns: list[Monomial]
    rows: list
    entries: np.ndarray
    order: TermOrder
    field: FieldParams
    degree: int
    homogeneous: bool

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def row_polynomial(self, i: int) -> Polynomial:
        nv = len(self.columns[0]) if self.columns else 0
        row = self.entries[i]
        cols = self.columns
        return Polynomial._raw(self.field, nv, {cols[j]: int(row[j]) for j in np.flatnonzero(row)})

    def polynomials(self) -> list[Polynomial]:
        return [self.row_polynomial(i) for i in range(self.entries.shape[0])]

    def rank(self) -> int:
        return matrix_rank(self.entries, self.field)

    def rref(self) -> tuple["MacaulayMatrix", int, list[Polynomial]]:
        R, pivots = rref_matrix(self.entries, self.field)
        red = MacaulayMatrix(list(self.columns), [None] * len(pivots), R, self.order, self.field, self.degree, self.homogeneous)
        return red, len(pivots), red.polynomials()

    def dump(self) -> str:
        """Debug text: header, column monomials, then one row of reps per line."""
        r, c = self.entries.shape
        lines = [f"{self.degree} {r} {c} {self.field.q}"]
        lines.append(" ".join("x" + ",".join(map(str, m)) for m in self.columns))
        lines.extend(" ".join(map(str, row)) for row in self.entries.tolist())
        return "\n".join(lines) + "\n"


def _column_index(columns: Sequence[Monomial], d: int):
    """Vectorised monomial -> column lookup via a mixed-radix key."""
    n = len(columns[0])
    base = d + 1
    if base**n >= 2**62:
        lookup = {m: i for i, m in enumerate(columns)}
        return None, lookup
    weights = np.array([base**i for i in range(n)], dtype=np.int64)
    keys = np.array(columns, dtype=np.int64).reshape(len(columns), n) @ weights
    order = np.argsort(keys)
    return (weights, keys[order], order), None


def fill_matrix(
    row_specs: Sequence[tuple[Monomial, Polynomial]],
    columns: Sequence[Monomial],
    d: int,
    F: FieldParams,
) -> np.ndarray:
    """Dense matrix whose i-th row is multiplier_i * poly_i in the given columns."""
    A = np.zeros((len(row_specs), len(columns)), dtype=np.uint8)
    if not row_specs or not columns:
        return A
    vec, lookup = _column_index(columns, d)
    # group consecutive rows sharing a polynomial
    start = 0
    while start < len(row_specs):
        f = row_specs[start][1]
        stop = start
        while stop < len(row_specs) and row_specs[stop][1] is f:
            stop += 1
        mons = [m for m, _ in row_specs[start:stop]]
        exps = list(f.terms)
        coefs = np.array([f.terms[e] for e in exps], dtype=np.uint8)
        if vec is not None:
            weights, sorted_keys, perm = vec
            mk = np.array(mons, dtype=np.int64).reshape(len(mons), -1) @ weights
            ek = np.array(exps, dtype=np.int64).reshape(len(exps), -1) @ weights
            allk = mk[:, None] + ek[None, :]
            pos = np.searchsorted(sorted_keys, allk)
            pos = np.minimum(pos, len(sorted_keys) - 1)
            if not np.array_equal(sorted_keys[pos], allk):
                raise PolyError("row monomial outside the column set")
            A[start:stop][np.arange(stop - start)[:, None], perm[pos]] = coefs[None, :]
        else:
            for i, m in enumerate(mons):
                for e, c in zip(exps, coefs):
                    A[start + i, lookup[tuple(a + b for a, b in zip(m, e))]] = c
        start = stop
    return A


def _nonzero(F: PolySystem | Sequence[Polynomial]) -> list[tuple[int, Polynomial]]:
    return [(j, f) for j, f in enumerate(F) if not f.is_zero()]


def build_homogeneous(F: PolySystem | Sequence[Polynomial], d: int, order: TermOrder | str = GREVLEX) -> MacaulayMatrix:
    """Homogeneous Macaulay matrix M_d."""
    order = as_order(order)
    polys = list(F)
    if not polys:
        raise PolyError("empty system")
    field, n = polys[0].field, polys[0].nvars
    if not all(f.is_homogeneous() for f in polys):
        raise PolyError("build_homogeneous needs homogeneous polynomials")
    columns = monomials_of_degree(n, d, order) if d >= 0 else []
    specs, labels = [], []
    for j, f in _nonzero(polys):
        k = d - f.degree()
        if k < 0:
            continue
        for m in monomials_of_degree(n, k, order):
            specs.append((m, f))
            labels.append((m, j))
    A = fill_matrix(specs, columns, d, field)
    return MacaulayMatrix(columns, labels, A, order, field, d, True)


def build(F: PolySystem | Sequence[Polynomial], d: int, order: TermOrder | str = GREVLEX) -> MacaulayMatrix:
    """Inhomogeneous Macaulay matrix M_{<=d}."""
    order = as_order(order)
    polys = list(F)
    if not polys:
        raise PolyError("empty system")
    field, n = polys[0].field, polys[0].nvars
    maxdeg = max(f.degree() for f in polys)
    if d < maxdeg:
        raise PolyError(f"degree {d} below the maximal input degree {maxdeg}")
    columns = monomials_upto(n, d, order)
    specs, labels = [], []
    for j, f in _nonzero(polys):
        for m in monomials_upto(n, d - f.degree(), GREVLEX):
            specs.append((m, f))
            labels.append((m, j))
    A = fill_matrix(specs, columns, d, field)
    return MacaulayMatrix(columns, labels, A, order, field, d, False)


def ideal_dim_in_degree(F_top: PolySystem | Sequence[Polynomial], d: int) -> int:
    """dim of the degree-d part of the ideal generated by homogeneous F_top."""
    polys = [f for f in F_top if not f.is_zero()]
    if not polys:
        return 0
    if not all(f.is_homogeneous() for f in polys):
        raise PolyError("ideal_dim_in_degree needs homogeneous polynomials")
    if all(f.degree() > d for f in polys):
        return 0
    return build_homogeneous(polys, d).rank()


def hilbert_function(F_top: PolySystem | Sequence[Polynomial], d_max: int) -> list[int]:
    """h(d) = dim (R/(F_top))_d for d = 0..d_max."""
    polys = list(F_top)
    n = polys[0].nvars
    return [count_monomials(n, d) - ideal_dim_in_degree(polys, d) for d in range(d_max + 1)]


def stack_rows(blocks: Iterable[np.ndarray], ncols: int) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[0]]
    if not blocks:
        return np.zeros((0, ncols), np.uint8)
    return np.vstack(blocks)


# ---------------------------------------------------------------- small dense linear algebra

def gf_matmul(A: np.ndarray, B: np.ndarray, F: FieldParams) -> np.ndarray:
    A = np.asarray(A, dtype=np.uint8)
    B = np.asarray(B, dtype=np.uint8)
    if A.shape[1] != B.shape[0]:
        raise ValueError("shape mismatch")
    if F.is_prime_field:
        return ((A.astype(np.int64) @ B.astype(np.int64)) % F.p).astype(np.uint8)
    C = np.zeros((A.shape[0], B.shape[1]), dtype=np.uint8)
    for k in range(A.shape[1]):
        C = F.ADD[C, F.MUL[A[:, k][:, None], B[k, :][None, :]]]
    return C


def gf_inverse(A: np.ndarray, F: FieldParams) -> np.ndarray:
    """Inverse of a square matrix; raises ValueError when singular."""
    A = np.asarray(A, dtype=np.uint8)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix is not square")
    aug = np.hstack([A, np.eye(n, dtype=np.uint8)])
    R, piv = rref_matrix(aug, F, dedup=False)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ValueError("matrix is singular")
    return R[:n, n:].copy()


def gf_solve(A: np.ndarray, b: np.ndarray, F: FieldParams) -> np.ndarray | None:
    """One solution of A x = b (free variables set to 0), or None if inconsistent."""
    A = np.asarray(A, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8).reshape(-1, 1)
    ncols = A.shape[1]
    R, piv = rref_matrix(np.hstack([A, b]), F, dedup=False)
    if piv and piv[-1] == ncols:
        return None
    x = np.zeros(ncols, dtype=np.uint8)
    for r, c in enumerate(piv):
        x[c] = R[r, ncols]
    return x


def random_invertible(n: int, F: FieldParams, rng: np.random.Generator) -> np.ndarray:
    """Uniform element of GL_n(GF(q)) by rejection sampling."""
    while True:
        A = rng.integers(F.q, size=(n, n)).astype(np.uint8)
        if matrix_rank(A, F, dedup=False) == n:
            return A
