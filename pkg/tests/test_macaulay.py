import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import poly, system
from mqinv.field import field_of_size
from mqinv.macaulay import (
    build,
    build_homogeneous,
    gf_inverse,
    gf_matmul,
    gf_solve,
    hilbert_function,
    ideal_dim_in_degree,
    matrix_rank,
    random_invertible,
    rref_matrix,
)
from mqinv.polyring import GREVLEX, LEX, Polynomial, PolyError, monomials_of_degree, monomials_upto, top_part
from mqinv.regularity import regular_sequence_hilbert
from oracles import divisible_count, scalar_rank
from strategies import systems


def test_build_homogeneous_examples():
    M = build_homogeneous(system(["x1^2 + x1*x2"], 2, 2), 2)
    assert M.columns == [(2, 0), (1, 1), (0, 2)]
    assert M.entries.tolist() == [[1, 1, 0]]
    M = build_homogeneous(system(["x1", "x2"], 2, 2), 2)
    assert M.shape == (4, 3)
    assert M.rank() == 3
    M = build_homogeneous(system(["x1^3"], 2, 2), 2)
    assert M.shape[0] == 0


def test_build_homogeneous_rejects_inhomogeneous():
    with pytest.raises(PolyError):
        build_homogeneous(system(["x1^2 + 1"], 2, 2), 2)


def test_build_examples():
    M = build(system(["x1 + 1"], 2, 1), 1)
    assert M.columns == [(1,), (0,)]
    assert M.entries.tolist() == [[1, 1]]
    with pytest.raises(PolyError):
        build(system(["x1^3"], 2, 1), 2)


@pytest.mark.parametrize("n,D,d", [(2, 2, 4), (3, 2, 5), (3, 3, 4)])
def test_build_row_count(n, D, d):
    f = Polynomial(field_of_size(3), n, {m: 1 for m in monomials_upto(n, D)})
    M = build([f], d)
    assert M.shape[0] == len(monomials_upto(n, d - D))
    assert M.shape[1] == len(monomials_upto(n, d))


def test_build_block_structure():
    F = system(["x1^2 + x1*x2", "x2^2 + 2*x1*x2"], 3, 2)
    for d in (2, 3, 4):
        full = build(F, d)
        homog = build_homogeneous(F, d)
        top_rows = [i for i, (mult, _) in enumerate(full.rows) if sum(mult) == d - 2]
        top_cols = [j for j, m in enumerate(full.columns) if sum(m) == d]
        assert [full.columns[j] for j in top_cols] == homog.columns
        block = full.entries[np.ix_(top_rows, top_cols)]
        assert sorted(map(tuple, block.tolist())) == sorted(map(tuple, homog.entries.tolist()))
        others = [j for j in range(full.shape[1]) if j not in top_cols]
        assert not full.entries[np.ix_(top_rows, others)].any()


@given(systems(max_deg=3), st.integers(0, 2))
@settings(max_examples=40)
def test_entry_invariant(F, extra):
    d = F.max_degree() + extra
    M = build(F, d)
    for i, (mult, j) in enumerate(M.rows):
        expected = F[j].shift(mult)
        assert M.row_polynomial(i) == expected


def test_rref_examples():
    F2 = field_of_size(2)
    R, piv = rref_matrix(np.eye(2, dtype=np.uint8), F2)
    assert len(piv) == 2 and (R == np.eye(2)).all()
    assert matrix_rank(np.array([[1, 1, 0], [1, 1, 0]], dtype=np.uint8), F2) == 1


@pytest.mark.parametrize("q", [2, 3, 4, 7, 8, 9, 16])
def test_rank_matches_scalar_oracle(q):
    F = field_of_size(q)
    rng = np.random.default_rng(q)
    for shape, low in [((50, 60), 0), ((30, 20), 0), ((40, 40), 25)]:
        A = rng.integers(q, size=shape).astype(np.uint8)
        if low:
            # force rank deficiency
            A = gf_matmul(A[:, :low], rng.integers(q, size=(low, shape[1])).astype(np.uint8), F)
        assert matrix_rank(A, F) == scalar_rank(A, F)


@pytest.mark.parametrize("q", [2, 3, 4, 9])
def test_rref_is_reduced_and_spans(q):
    F = field_of_size(q)
    rng = np.random.default_rng(7 + q)
    A = rng.integers(q, size=(25, 30)).astype(np.uint8)
    A[5:10] = 0
    R, piv = rref_matrix(A, F)
    assert piv == sorted(piv)
    for r, c in enumerate(piv):
        assert R[r, c] == 1
        assert not R[r, :c].any()
        assert (R[:, c] != 0).sum() == 1
    assert scalar_rank(np.vstack([R, A]), F) == len(piv)


def test_macaulay_rref_polynomials():
    F = system(["x1^2 + x2", "x1^2 + x1*x2"], 3, 2)
    red, rank, polys = build(F, 2).rref()
    assert rank == len(polys) == 2
    lms = [p.leading_monomial(GREVLEX) for p in polys]
    assert lms == sorted(lms, key=GREVLEX.key, reverse=True)


def test_ideal_dim_examples():
    assert ideal_dim_in_degree(system(["x1^2", "x2^2"], 2, 2), 2) == 2
    assert ideal_dim_in_degree(system(["x1^2", "x2^2"], 2, 2), 3) == 4
    assert ideal_dim_in_degree(system(["x1*x2"], 2, 2), 2) == 1


def test_hilbert_function_examples():
    assert hilbert_function(system(["x1^2", "x2^2"], 2, 2), 3) == [1, 2, 1, 0]
    assert hilbert_function(system(["x1^2", "x1*x2", "x2^2"], 2, 2), 4) == [1, 2, 0, 0, 0]
    assert hilbert_function(system(["x1^3"], 5, 3), 2) == [1, 3, 6]


def test_monomial_ideal_dims_vs_divisibility():
    rng = np.random.default_rng(2024)
    F2 = field_of_size(2)
    for _ in range(25):
        n = int(rng.integers(1, 5))
        gens = {tuple(int(e) for e in rng.integers(0, 4, size=n)) for _ in range(int(rng.integers(1, 5)))}
        gens = [g for g in gens if any(g)]
        if not gens:
            continue
        F = [Polynomial(F2, n, {g: 1}) for g in gens]
        for d in range(0, 8):
            assert ideal_dim_in_degree(F, d) == divisible_count(gens, n, d)


@pytest.mark.parametrize("degs", [(2, 2), (2, 3, 4), (1, 2, 2, 3)])
def test_regular_sequence_hilbert(degs):
    n = len(degs)
    F = field_of_size(3)
    gens = [Polynomial(F, n, {tuple(d if j == i else 0 for j in range(n)): 1}) for i, d in enumerate(degs)]
    top = sum(d - 1 for d in degs) + 2
    assert hilbert_function(gens, top) == regular_sequence_hilbert(degs, n, top)


@given(systems(max_deg=2))
@settings(max_examples=30)
def test_rank_monotone_in_degree(F):
    ranks = [build(F, d).rank() for d in range(F.max_degree(), F.max_degree() + 3)]
    assert ranks == sorted(ranks)
    tops = [top_part(f) for f in F if not f.is_zero()]
    for d in range(4):
        assert ideal_dim_in_degree(tops, d) <= len(monomials_of_degree(F.nvars, d))


def test_lex_columns():
    M = build(system(["x1*x2 + x2^2 + 1"], 2, 2), 2, LEX)
    assert M.columns == sorted(M.columns, reverse=True)


def test_dump_header():
    M = build_homogeneous(system(["x1^2 + x1*x2"], 2, 2), 2)
    lines = M.dump().splitlines()
    assert lines[0] == "2 1 3 2"
    assert lines[2] == "1 1 0"


@pytest.mark.parametrize("q", [2, 4, 5, 9])
def test_linear_algebra_helpers(q):
    F = field_of_size(q)
    rng = np.random.default_rng(q)
    A = random_invertible(6, F, rng)
    assert (gf_matmul(A, gf_inverse(A, F), F) == np.eye(6, dtype=np.uint8)).all()
    x = rng.integers(q, size=6).astype(np.uint8)
    b = gf_matmul(A, x.reshape(-1, 1), F).ravel()
    assert (gf_solve(A, b, F) == x).all()
    S = np.zeros((2, 2), dtype=np.uint8)
    S[0, 0] = 1
    with pytest.raises(ValueError):
        gf_inverse(S, F)
    assert gf_solve(S, np.array([0, 1], dtype=np.uint8), F) is None
