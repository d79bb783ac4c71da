import pytest
from hypothesis import given, strategies as st

from mqinv.bounds import (
    EGH,
    NEEDS_DREG_GE_Q,
    BoundError,
    bound_report,
    dim_quotient_power_ideal,
    dreg_bound_equal_degree,
    dreg_bound_with_fieldeq,
    eta,
    lemma_interval_check,
    locate_interval_equal_degree,
    max_overdetermination,
    sigma_equal_degree,
    sigma_fieldeq,
    solvdeg_mutant_bound,
    solvdeg_standard_bound_with_fieldeq,
)
from oracles import all_monomials, eta_bruteforce, sigma_bruteforce

# sigma_{k,t} for n=6, D=3; rows k=1..5, columns t=0,1,2
SIGMA_TABLE = {1: (0, 5, 20), 2: (20, 24, 34), 3: (34, 37, 43), 4: (43, 45, 48), 5: (48, 49, 50)}


def test_sigma_table():
    for k, row in SIGMA_TABLE.items():
        assert tuple(sigma_equal_degree(6, 3, k, t) for t in range(3)) == row


def test_sigma_examples():
    assert sigma_equal_degree(6, 3, 1, 1) == 5
    assert sigma_equal_degree(6, 3, 3, 2) == 43
    for n, D in [(2, 2), (4, 3), (5, 5)]:
        assert sigma_equal_degree(n, D, 1, 0) == 0


def test_sigma_boundary_identity():
    for n in range(2, 7):
        for D in range(2, 6):
            for k in range(2, n):
                assert sigma_equal_degree(n, D, k, 0) == sigma_equal_degree(n, D, k - 1, D - 1)


def test_sigma_range_errors():
    with pytest.raises(BoundError):
        sigma_equal_degree(6, 3, 0, 1)
    with pytest.raises(BoundError):
        sigma_equal_degree(6, 3, 6, 1)
    with pytest.raises(BoundError):
        sigma_equal_degree(6, 3, 1, 3)


def test_interval_examples():
    assert locate_interval_equal_degree(6, 12, 3) == (1, 2)
    assert locate_interval_equal_degree(6, 42, 3) == (3, 1)
    assert locate_interval_equal_degree(6, 6, 3) == (0, 2)
    with pytest.raises(BoundError):
        locate_interval_equal_degree(6, 5, 3)
    with pytest.raises(BoundError):
        locate_interval_equal_degree(6, 6 + 51, 3)


def test_dreg_bound_examples():
    assert [dreg_bound_equal_degree(6, m, 3) for m in (12, 42, 54)] == [11, 8, 5]
    assert dreg_bound_equal_degree(2, 2, 2) == 3
    assert solvdeg_mutant_bound(6, 12, 3) == 12
    assert solvdeg_mutant_bound(6, 54, 3) == 6
    for n, D in [(3, 2), (4, 3)]:
        assert solvdeg_mutant_bound(n, n, D) == n * (D - 1) + 2


def test_standard_bound_examples():
    assert solvdeg_standard_bound_with_fieldeq(4, 4, 2, 4) == 8
    assert solvdeg_standard_bound_with_fieldeq(6, 6, 2, 4) == 12
    assert solvdeg_standard_bound_with_fieldeq(10, 10, 2, 4) == 20
    assert solvdeg_standard_bound_with_fieldeq(4, 4, 2, 9) == 8
    with pytest.raises(BoundError):
        solvdeg_standard_bound_with_fieldeq(1, 1, 3, 2)


@pytest.mark.parametrize("n", range(2, 6))
@pytest.mark.parametrize("D", range(2, 5))
def test_monotone_and_extremes(n, D):
    top = max_overdetermination(n, D)
    vals = [dreg_bound_equal_degree(n, m, D) for m in range(n, n + top + 1)]
    assert vals[0] == n * (D - 1) + 1
    assert vals[-1] == D
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert all(a - b in (0, 1) for a, b in zip(vals, vals[1:]))
    assert all(v >= D for v in vals)


@pytest.mark.parametrize("n", range(2, 6))
@pytest.mark.parametrize("D", range(2, 6))
def test_sigma_vs_enumeration(n, D):
    for k in range(1, n):
        for t in range(D):
            assert sigma_equal_degree(n, D, k, t) == sigma_bruteforce(n, D, k, t)


def test_dim_quotient_examples():
    assert dim_quotient_power_ideal(2, 2, 2) == 1
    assert dim_quotient_power_ideal(3, 2, 2) == 3
    for n, q in [(2, 2), (3, 3), (4, 2)]:
        assert dim_quotient_power_ideal(n, q, n * (q - 1) + 1) == 0


@pytest.mark.parametrize("n", range(1, 5))
@pytest.mark.parametrize("q", range(2, 5))
def test_dim_quotient_vs_enumeration(n, q):
    for D in range(0, n * (q - 1) + 3):
        assert dim_quotient_power_ideal(n, q, D) == sum(1 for u in all_monomials(n, D) if max(u) <= q - 1)


def test_eta_examples():
    assert eta(3, 2, 2, 1, 1) == 2
    assert eta(3, 2, 4, 2, 1) == 0  # D - q + t = 3 > (n - k)(q - 1) = 1


@pytest.mark.parametrize("n", range(2, 6))
@pytest.mark.parametrize("q", range(2, 5))
def test_eta_vs_enumeration(n, q):
    for D in range(q, n * (q - 1) + 1):
        for k in range(1, n):
            for t in range(1, q):
                assert eta(n, q, D, k, t) == eta_bruteforce(n, q, D, k, t)


def _sigma_fe_bruteforce(n, q, D, k, t):
    """Count exponent-bounded degree-D monomials lex->= x_k^{q-t} x_n^{D-q+t}
    whose leading variable is not x_n."""
    ref = [0] * n
    ref[k - 1] += q - t
    ref[n - 1] += D - q + t
    count = 0
    for u in all_monomials(n, D):
        if max(u) > q - 1:
            continue
        # (D, i, q - j)-type with j >= 1, i.e. some x_i^{q-j} times a tail
        i = next(idx for idx, e in enumerate(u) if e)
        if tuple(u) >= tuple(ref) and i < n - 1:
            count += 1
    return count


@pytest.mark.parametrize("n,q,D", [(3, 2, 2), (3, 3, 3), (4, 2, 3), (4, 3, 4), (5, 2, 2), (4, 3, 3)])
def test_sigma_fieldeq_vs_enumeration(n, q, D):
    for k in range(1, n):
        for t in range(1, q):
            assert sigma_fieldeq(n, q, D, k, t) == _sigma_fe_bruteforce(n, q, D, k, t)


def test_fieldeq_examples():
    b = dreg_bound_with_fieldeq(3, 2, 2, 2)
    assert (b.k, b.t, b.B, b.dreg, b.case) == (1, 1, 3, 3, "theorem-D>q")
    b = dreg_bound_with_fieldeq(2, 2, 2, 2)
    assert (b.case, b.dreg, b.solvdeg_standard, b.solvdeg_mutant) == ("prop-D>q", 2, 2, 3)
    with pytest.raises(BoundError):
        dreg_bound_with_fieldeq(3, 2, 1, 2)
    with pytest.raises(BoundError):
        dreg_bound_with_fieldeq(3, 2, 4, 2)


@pytest.mark.parametrize(
    "n,B,std",
    [(11, 10, 18), (7, 6, 10), (6, 5, 8), (23, 22, 42), (22, 21, 40), (21, 20, 38)],
)
def test_gemss_bound_columns(n, B, std):
    b = dreg_bound_with_fieldeq(n, n, 2, 2)
    assert (b.dreg, b.solvdeg_standard) == (B, std)


def test_lemma_interval():
    assert lemma_interval_check(3, 3)
    assert lemma_interval_check(2, 2)
    assert lemma_interval_check(1, 4)
    for n in range(1, 6):
        for D in range(1, 6):
            assert lemma_interval_check(n, D)


def test_report_rows():
    r = bound_report(6, 12, 3)
    assert r.row() == "6 12 3 - | 1 2 | dreg≤11 [EGH] | solvdeg_s n/a | solvdeg_m≤12 [EGH]"
    r = bound_report(4, 4, 2, 4, field_equations=True)
    assert "solvdeg_s≤8 [EGH, needs dreg≥q]" in r.row()
    assert NEEDS_DREG_GE_Q in r.assumptions and EGH in r.assumptions
    r9 = bound_report(4, 4, 2, 9, field_equations=True)
    assert "solvdeg_s n/a" in r9.row(dreg=5)
    assert "solvdeg_s≤8" in r9.row(dreg=9)
    assert r.dreg_bound >= r.D


def test_report_fieldeq_path():
    r = bound_report(7, 7, 2, 2, field_equations=True)
    assert (r.dreg_bound, r.solvdeg_standard_bound, r.case) == (6, 10, "theorem-D>q")
    r = bound_report(2, 2, 2, 2, field_equations=True)
    assert r.case == "prop-D>q" and r.assumptions == []


@given(st.integers(2, 7), st.integers(2, 4), st.data())
def test_report_dreg_at_least_D(n, D, data):
    m = data.draw(st.integers(n, n + max_overdetermination(n, D)))
    assert bound_report(n, m, D).dreg_bound >= D
