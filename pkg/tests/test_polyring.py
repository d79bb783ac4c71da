from itertools import combinations_with_replacement, product
from math import comb

import pytest
from hypothesis import given, strategies as st

from conftest import poly
from mqinv.field import field_of_size
from mqinv.polyring import (
    GREVLEX,
    LEX,
    Polynomial,
    PolyError,
    PolySystem,
    count_monomials,
    evaluate,
    field_equations,
    monomial_cmp,
    monomial_type,
    monomials_of_degree,
    monomials_upto,
    parse_polynomial,
    reduce_mod_field_eqs,
    substitute,
    to_text,
    top_part,
)
from strategies import polynomials


def brute_monomials(n, d):
    out = set()
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.add(tuple(e))
    return out


def test_monomial_cmp_examples():
    x1x3, x2sq = (1, 0, 1), (0, 2, 0)
    assert monomial_cmp(x1x3, x2sq, LEX) == 1
    assert monomial_cmp(x1x3, x2sq, GREVLEX) == -1
    assert monomial_cmp(x1x3, x1x3, LEX) == 0
    assert monomial_cmp(x1x3, x1x3, GREVLEX) == 0
    with pytest.raises(PolyError):
        monomial_cmp((1, 0), (1, 0, 0))


def _grevlex_greater(u, v):
    """Textbook rule: higher degree, else the last differing exponent is smaller in u."""
    if sum(u) != sum(v):
        return sum(u) > sum(v)
    for a, b in zip(reversed(u), reversed(v)):
        if a != b:
            return a < b
    return False


@pytest.mark.parametrize("n,d", [(3, 2), (3, 3), (4, 3), (2, 5)])
def test_grevlex_matches_textbook_rule(n, d):
    mons = monomials_upto(n, d)
    for u in mons:
        for v in mons:
            assert (monomial_cmp(u, v, GREVLEX) == 1) == _grevlex_greater(u, v)


@pytest.mark.parametrize("n,d", [(1, 4), (2, 2), (3, 3), (4, 4), (5, 2)])
@pytest.mark.parametrize("order", [GREVLEX, LEX])
def test_monomials_of_degree_complete_and_decreasing(n, d, order):
    mons = monomials_of_degree(n, d, order)
    assert len(mons) == comb(n + d - 1, d) == count_monomials(n, d)
    assert set(mons) == brute_monomials(n, d)
    assert all(monomial_cmp(a, b, order) == 1 for a, b in zip(mons, mons[1:]))


def test_monomials_of_degree_examples():
    assert monomials_of_degree(2, 2, LEX) == [(2, 0), (1, 1), (0, 2)]
    assert len(monomials_of_degree(3, 3)) == 10
    assert monomials_of_degree(1, 7) == [(7,)]


def test_monomial_type_examples():
    assert monomial_type((2, 0, 1)) == (3, 1, 2)
    assert monomial_type((0, 1, 2)) == (3, 2, 1)
    assert monomial_type((0, 0, 0, 5)) == (5, 4, 5)
    assert monomial_type((0, 0)) is None


def test_top_part_examples():
    f = poly("x1^3 + 2*x1*x2^2 + 4*x2 + 1", 5, 2)
    assert top_part(f) == poly("x1^3 + 2*x1*x2^2", 5, 2)
    h = poly("x1^2 + x1*x2", 3, 2)
    assert top_part(h) == h
    assert top_part(poly("x1 + 1", 2, 1)) == poly("x1", 2, 1)
    with pytest.raises(PolyError):
        top_part(Polynomial.zero(field_of_size(2), 1))


def test_evaluate_examples():
    assert evaluate(poly("x1 + x2", 2, 2), (1, 1)) == 0
    F4 = field_of_size(4)
    assert evaluate(poly("x1^2", 4, 1), (2,)) == 3
    assert evaluate(poly("x1^2", 4, 1), (F4.element(2),)) == 3
    assert evaluate(Polynomial.zero(F4, 2), (1, 3)) == 0
    with pytest.raises(PolyError):
        evaluate(poly("x1", 2, 2), (1,))


def test_reduce_mod_field_eqs_examples():
    assert reduce_mod_field_eqs(poly("x1^3", 2, 1), 2) == poly("x1", 2, 1)
    assert reduce_mod_field_eqs(poly("x1^2*x2", 2, 2), 2) == poly("x1*x2", 2, 2)
    f = poly("x1*x2 + x2^2", 3, 2)
    assert reduce_mod_field_eqs(f, 3) == f


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_reduce_mod_field_eqs_preserves_evaluation(q, n):
    import numpy as np

    F = field_of_size(q)
    rng = np.random.default_rng(q * 10 + n)
    mons = monomials_upto(n, 2 * q + 1)
    for _ in range(5):
        picks = rng.choice(len(mons), size=min(8, len(mons)), replace=False)
        f = Polynomial(F, n, {mons[i]: int(rng.integers(1, q)) for i in picks})
        g = reduce_mod_field_eqs(f, q)
        assert all(max(m) <= q - 1 for m in g.terms) and (g.is_zero() or g.degree() <= n * (q - 1))
        for pt in product(range(q), repeat=n):
            assert evaluate(f, pt) == evaluate(g, pt)


@given(polynomials(), st.data())
def test_top_part_multiplicative(f, data):
    g = data.draw(polynomials(q=f.field.q, n=f.nvars))
    if f.is_zero() or g.is_zero():
        return
    tt = top_part(f) * top_part(g)
    if not tt.is_zero():
        assert top_part(f * g) == tt


@given(polynomials())
def test_text_round_trip(f):
    assert parse_polynomial(to_text(f), f.field, f.nvars) == f


def test_text_format():
    f = poly("3*x1^2*x2 + x2 + 2", 5, 2)
    assert to_text(f) == "3*x1^2*x2^1 + 1*x2^1 + 2"
    assert poly(" 3 * x1 ^2*x2+x2+ 2 ", 5, 2) == f
    assert to_text(Polynomial.zero(field_of_size(5), 2)) == "0"


@pytest.mark.parametrize("bad", ["x3", "x1^", "2*", "x1 + + x2", "", "7*x1"])
def test_parse_errors(bad):
    with pytest.raises(PolyError):
        parse_polynomial(bad, field_of_size(5), 2)


@given(polynomials(), st.data())
def test_substitution_commutes_with_evaluation(f, data):
    q, n = f.field.q, f.nvars
    images = [data.draw(polynomials(q=q, n=2, max_deg=2)) for _ in range(n)]
    g = substitute(f, images)
    pt = data.draw(st.tuples(st.integers(0, q - 1), st.integers(0, q - 1)))
    inner = tuple(evaluate(h, pt) for h in images)
    assert evaluate(g, pt) == evaluate(f, inner)


def test_polysystem_invariants():
    with pytest.raises(PolyError):
        PolySystem([])
    with pytest.raises(PolyError):
        PolySystem([poly("x1", 2, 1), poly("x1", 3, 1)])
    with pytest.raises(PolyError):
        PolySystem([poly("x1", 2, 1), poly("x1", 2, 2)])


def test_field_equations_detected():
    F = field_of_size(4)
    S = PolySystem([poly("x1*x2", 4, 2)] + field_equations(F, 2))
    assert S.has_field_equations()
    assert not PolySystem([poly("x1*x2", 4, 2)]).has_field_equations()
    assert to_text(field_equations(field_of_size(2), 1)[0]) == "1*x1^2 + 1*x1^1"
