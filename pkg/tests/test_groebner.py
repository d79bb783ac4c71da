from itertools import product

import numpy as np
import pytest

from conftest import poly, system
from mqinv.field import field_of_size
from mqinv.groebner import (
    CapExceeded,
    buchberger,
    default_solvdeg_cap,
    is_groebner_basis,
    is_groebner_basis_of,
    normal_form,
    reduce_basis,
    solve_system,
    solving_degree_mutant,
    solving_degree_standard,
)
from mqinv.polyring import GREVLEX, LEX, Polynomial, PolyError, evaluate
from mqinv.regularity import degree_of_regularity
from mqinv.schemes import HfevParams, add_field_equations, gen_hfev_minus, gen_random_system, make_square


def test_normal_form_examples():
    assert normal_form(poly("x1^2", 2, 2), [poly("x1", 2, 2)]).is_zero()
    assert normal_form(poly("x1*x2 + 1", 3, 2), [poly("x1", 3, 2)], LEX) == poly("1", 3, 2)
    G = [poly("x1^2 + x2", 2, 2), poly("x2^2 + x1", 2, 2)]
    r = normal_form(poly("x1^2*x2", 2, 2), G, GREVLEX)
    assert r == poly("x1", 2, 2)
    # f - r lies in (G): the difference reduces to zero modulo a Groebner basis of (G)
    ref = buchberger(G, GREVLEX)
    assert normal_form(poly("x1^2*x2", 2, 2) - r, ref, GREVLEX).is_zero()


def test_normal_form_irreducible_terms():
    rng = np.random.default_rng(0)
    G = [poly("x1^2 + x2 + 1", 5, 2), poly("x1*x2^2 + 3*x1", 5, 2)]
    lms = [g.leading_monomial() for g in G]
    for _ in range(20):
        f = gen_random_system(5, 2, 1, 4, rng)[0]
        r = normal_form(f, G)
        assert not any(all(a >= b for a, b in zip(m, lm)) for m in r.terms for lm in lms)


def test_is_groebner_basis_examples():
    assert is_groebner_basis([poly("x1", 2, 2), poly("x2", 2, 2)])
    assert not is_groebner_basis([poly("x1*x2 + 1", 3, 2), poly("x2^2 + 2", 3, 2)], LEX)
    assert is_groebner_basis([poly("x1^2", 2, 2)])
    with pytest.raises(PolyError):
        is_groebner_basis([poly("x1", 2, 2), Polynomial.zero(field_of_size(2), 2)])


def test_solving_degree_examples():
    assert solving_degree_standard(system(["x1 + x2", "x2"], 2, 2)).degree == 1
    assert solving_degree_standard(system(["x1^2 + x1"], 2, 1)).degree == 2
    assert solving_degree_standard(system(["x1^2 + x2", "x2^2 + x1"], 2, 2)).degree == 2
    r = solving_degree_mutant(system(["x1^2 + x2", "x2^2 + x1"], 2, 2))
    assert r.degree == 2 and r.variant == "mutant"


def test_log_format():
    r = solving_degree_standard(system(["x1*x2 + 1", "x2^2 + 2"], 3, 2))
    lines = r.log_text().splitlines()
    assert len(lines) == len(r.per_degree_log) >= 1
    assert lines[-1].startswith(f"d={r.degree} rows=") and lines[-1].endswith("gb=yes")
    assert all(" mutants=" in ln for ln in lines)


def test_cap_exceeded_carries_log():
    F = system(["x1*x2 + 1", "x2^2 + 2"], 3, 2)
    full = solving_degree_standard(F).degree
    with pytest.raises(CapExceeded) as exc:
        solving_degree_standard(F, GREVLEX, d_cap=full - 1)
    assert exc.value.cap == full - 1
    assert len(exc.value.log) == full - 1 - 2 + 1


def test_cap_below_max_degree():
    with pytest.raises(PolyError):
        solving_degree_standard(system(["x1^3"], 2, 1), GREVLEX, d_cap=2)


def test_default_cap():
    assert default_solvdeg_cap(system(["x1^2", "x2^3", "x1"], 3, 2)) == 2 * (1 + 0 + 1)


@pytest.mark.parametrize("seed", range(12))
def test_basis_generates_same_ideal(seed):
    rng = np.random.default_rng(seed)
    q = [2, 3, 4][seed % 3]
    n = 2 + seed % 2
    F = gen_random_system(q, n, n + 1, 2, rng)
    # membership is order independent, so one grevlex reference serves both orders
    ref = buchberger(list(F), GREVLEX)
    for fn in (solving_degree_standard, solving_degree_mutant):
        for order in (GREVLEX, LEX):
            G = fn(F, order).basis.polys
            assert is_groebner_basis(G, order)
            assert is_groebner_basis_of(G, list(F), order)
            assert all(normal_form(g, ref, GREVLEX).is_zero() for g in G)
            if order == GREVLEX:
                assert sorted(map(str, reduce_basis(ref, GREVLEX))) == sorted(map(str, G))


@pytest.mark.parametrize("seed", range(100))
def test_mutant_not_above_standard(seed):
    rng = np.random.default_rng(100 + seed)
    q = [2, 3, 4][seed % 3]
    n = 2 + seed % 2
    D = 2 + (seed // 3) % 2
    F = gen_random_system(q, n, n + seed % 2, D, rng)
    s = solving_degree_standard(F).degree
    m = solving_degree_mutant(F).degree
    assert m <= s
    dreg = degree_of_regularity(F)
    if dreg is not None:
        assert m <= max(dreg + 1, D)


def test_gemss_like_mutant_bound():
    F = make_square(gen_hfev_minus(HfevParams(8, 9, 1, 1), 5), rng=5)
    FE = add_field_equations(F)
    dreg = degree_of_regularity(FE)
    assert solving_degree_mutant(FE).degree <= dreg + 1 <= 4


def test_solve_examples():
    assert solve_system(system(["x1 + 1"], 2, 1)) == [(1,)]
    assert solve_system(system(["x1^2 + x2^2", "x1 + x2"], 3, 2)) == [(0, 0)]
    assert solve_system(system(["x1", "x1 + 1"], 2, 1)) == []


@pytest.mark.parametrize("seed", range(10))
def test_solve_paths_agree(seed):
    rng = np.random.default_rng(seed)
    q = [2, 3, 4, 5][seed % 4]
    n = 2 + seed % 2
    F = gen_random_system(q, n, n, 2, rng)
    brute = sorted(pt for pt in product(range(q), repeat=n) if all(evaluate(f, pt) == 0 for f in F))
    assert solve_system(F, method="exhaustive") == brute
    assert solve_system(F, method="groebner") == brute


def test_solve_rejects_wrong_field():
    with pytest.raises(PolyError):
        solve_system(system(["x1"], 2, 1), q=4)
