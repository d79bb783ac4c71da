"""Closed-form bounds on the degree of regularity and solving degree of
algebraically random equal-degree systems, with and without field equations.

All bounds except the overdetermined field-equation case assume the
Eisenbud-Green-Harris conjecture; reports carry that as a flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb

from .polyring import LEX, monomial_type, monomials_of_degree

EGH = "EGH"
NEEDS_DREG_GE_Q = "needs dreg≥q"


class BoundError(ValueError):
    """Parameters outside the range where a formula is defined."""


def _binom(a: int, b: int) -> int:
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


# ---------------------------------------------------------------- equal degree, no field equations

def sigma_equal_degree(n: int, D: int, k: int, t: int) -> int:
    """Number of degree-D non-pure-power monomials lex->= x_k^{D-t} x_n^t."""
    if not 1 <= k <= n - 1:
        raise BoundError(f"k={k} outside [1, {n - 1}]")
    if not 0 <= t <= D - 1:
        raise BoundError(f"t={t} outside [0, {D - 1}]")
    full = sum(_binom(n - i - 1 + j, j) for i in range(1, k + 1) for j in range(1, D))
    return full - sum(_binom(n - k - 1 + j, j) for j in range(t + 1, D))


def max_overdetermination(n: int, D: int) -> int:
    """sigma_{n-1, D-1}: degree-D monomials other than the pure powers."""
    if n < 2 or D < 2:
        return 0
    return sigma_equal_degree(n, D, n - 1, D - 1)


def locate_interval_equal_degree(n: int, m: int, D: int) -> tuple[int, int]:
    """(k, t) with sigma_{k,t-1} < m - n <= sigma_{k,t}; (0, D-1) when m = n."""
    if n < 1 or D < 1:
        raise BoundError("need n >= 1 and D >= 1")
    top = max_overdetermination(n, D)
    if not n <= m <= n + top:
        raise BoundError(f"m={m} outside [{n}, {n + top}] (more polynomials than independent degree-{D} forms)")
    if m == n:
        return (0, D - 1)
    r = m - n
    for k in range(1, n):
        for t in range(1, D):
            if sigma_equal_degree(n, D, k, t - 1) < r <= sigma_equal_degree(n, D, k, t):
                return (k, t)
    raise AssertionError("interval scan exhausted")  # unreachable for valid m


def dreg_bound_equal_degree(n: int, m: int, D: int) -> int:
    k, t = locate_interval_equal_degree(n, m, D)
    return (D - t) + (n - k) * (D - 1)


def solvdeg_mutant_bound(n: int, m: int, D: int) -> int:
    return dreg_bound_equal_degree(n, m, D) + 1


def solvdeg_standard_bound_with_fieldeq(n: int, m: int, D: int, q: int) -> int:
    """2 min{n(q-1), (n-k+1)(D-1) - t}; valid only when d_reg(F) >= q."""
    if D > n * (q - 1):
        raise BoundError(f"D={D} exceeds n(q-1)={n * (q - 1)}")
    k, t = locate_interval_equal_degree(n, m, D)
    return 2 * min(n * (q - 1), (n - k + 1) * (D - 1) - t)


# ---------------------------------------------------------------- with field equations, D >= q

def dim_quotient_power_ideal(n: int, q: int, D: int) -> int:
    """dim (R / (x_1^q, ..., x_n^q))_D by inclusion-exclusion."""
    if D < 0:
        raise BoundError("D must be nonnegative")
    return sum((-1) ** i * _binom(n, i) * _binom(n + D - 1 - i * q, n - 1) for i in range(D // q + 1))


def eta(n: int, q: int, D: int, k: int, t: int) -> int:
    """dim [F[x_{k+1..n}] / (x^q)]_{D-q+t}."""
    if not 1 <= k <= n - 1:
        raise BoundError(f"k={k} outside [1, {n - 1}]")
    if not 1 <= t <= q - 1:
        raise BoundError(f"t={t} outside [1, {q - 1}]")
    if D < q:
        raise BoundError(f"D={D} below q={q}")
    r = n - k
    return sum(
        (-1) ** i * _binom(r, i) * _binom(r - 1 + D - (i + 1) * q + t, r - 1)
        for i in range((D + t) // q)
    )


def sigma_fieldeq(n: int, q: int, D: int, k: int, t: int) -> int:
    """Degree-D monomials outside (x^q) that are lex->= x_k^{q-t} x_n^{D-q+t}."""
    if t == 0:
        return 0 if k == 1 else sigma_fieldeq(n, q, D, k - 1, q - 1)
    return sum(eta(n, q, D, i, j) for i in range(1, k) for j in range(1, q)) + sum(
        eta(n, q, D, k, j) for j in range(1, t + 1)
    )


@dataclass(frozen=True)
class FieldEqBound:
    dreg: int
    case: str  # "theorem-D>q" or "prop-D>q"
    B: int | None
    k: int | None
    t: int | None
    solvdeg_standard: int
    solvdeg_mutant: int
    exceptional: bool = False


def dreg_bound_with_fieldeq(n: int, m: int, D: int, q: int) -> FieldEqBound:
    if not q <= D <= n * (q - 1):
        raise BoundError(f"D={D} outside [q, n(q-1)] = [{q}, {n * (q - 1)}]")
    if m < 1:
        raise BoundError("m must be positive")
    if m > dim_quotient_power_ideal(n, q, D):
        return FieldEqBound(D, "prop-D>q", None, None, None, 2 * D - 2, D + 1)
    for k in range(1, n):
        for t in range(1, q):
            lo, hi = sigma_fieldeq(n, q, D, k, t - 1), sigma_fieldeq(n, q, D, k, t)
            if lo < m <= hi:
                B = q - t + (n - k) * (q - 1)
                exc = m == hi and ((t != q - 1 and D >= 2 * q - t - 1) or (t == q - 1 and D >= 2 * q - 1))
                if exc:
                    return FieldEqBound(B - 1, "theorem-D>q", B, k, t, 2 * (B - 2), B + 1, True)
                return FieldEqBound(B, "theorem-D>q", B, k, t, 2 * (B - 1), B + 1)
    raise BoundError(f"m={m} not located in any interval")


# ---------------------------------------------------------------- reports

@dataclass
class BoundReport:
    n: int
    m: int
    D: int
    q: int | None
    k: int
    t: int
    dreg_bound: int
    solvdeg_standard_bound: int | None
    solvdeg_mutant_bound: int
    dreg_flags: tuple[str, ...] = (EGH,)
    standard_flags: tuple[str, ...] = (EGH, NEEDS_DREG_GE_Q)
    mutant_flags: tuple[str, ...] = (EGH,)
    case: str = "theorem-DD"
    field_equations: bool = False

    @property
    def assumptions(self) -> list[str]:
        out: list[str] = []
        for f in self.dreg_flags + self.standard_flags + self.mutant_flags:
            if f not in out:
                out.append(f)
        return out

    def standard_applies(self, dreg: int | None) -> bool:
        """False when the report needs d_reg >= q and the given d_reg is smaller."""
        if self.solvdeg_standard_bound is None:
            return False
        if NEEDS_DREG_GE_Q in self.standard_flags and dreg is not None and self.q is not None:
            return dreg >= self.q
        return True

    def row(self, dreg: int | None = None) -> str:
        def tag(flags):
            return f" [{', '.join(flags)}]" if flags else ""

        q = "-" if self.q is None else str(self.q)
        std = (
            f"solvdeg_s≤{self.solvdeg_standard_bound}{tag(self.standard_flags)}"
            if self.standard_applies(dreg)
            else "solvdeg_s n/a"
        )
        return (
            f"{self.n} {self.m} {self.D} {q} | {self.k} {self.t} | "
            f"dreg≤{self.dreg_bound}{tag(self.dreg_flags)} | {std} | "
            f"solvdeg_m≤{self.solvdeg_mutant_bound}{tag(self.mutant_flags)}"
        )


def bound_report(n: int, m: int, D: int, q: int | None = None, field_equations: bool = False) -> BoundReport:
    """Bounds for an algebraically random system of m degree-D polynomials in n variables.

    With field equations and q <= D the field-equation bound applies (or the
    overdetermined case, where d_reg = D); otherwise the equal-degree bound and
    the solving-degree bounds derived from it.
    """
    if field_equations and q is None:
        raise BoundError("field equations need q")
    if q is not None and q < 2:
        raise BoundError("q must be at least 2")
    if field_equations and q <= D:
        fe = dreg_bound_with_fieldeq(n, m, D, q)
        if fe.case == "prop-D>q":
            return BoundReport(n, m, D, q, 0, 0, fe.dreg, fe.solvdeg_standard, fe.solvdeg_mutant,
                               (), (), (), fe.case, True)
        return BoundReport(n, m, D, q, fe.k, fe.t, fe.dreg, fe.solvdeg_standard, fe.solvdeg_mutant,
                           (EGH,), (EGH,), (EGH,), fe.case, True)
    k, t = locate_interval_equal_degree(n, m, D)
    dreg = (D - t) + (n - k) * (D - 1)
    std = None
    if q is not None and field_equations:
        std = solvdeg_standard_bound_with_fieldeq(n, m, D, q)
    return BoundReport(n, m, D, q, k, t, dreg, std, dreg + 1, case="theorem-DD", field_equations=field_equations)


# ---------------------------------------------------------------- self-test

def lemma_interval_check(n: int, D: int) -> bool:
    """Along decreasing lex order, (k, -a) of the monomial type never decreases,
    and every type occupies a contiguous block."""
    if n < 1 or D < 1:
        raise BoundError("need n >= 1 and D >= 1")
    types = [monomial_type(u)[1:] for u in monomials_of_degree(n, D, LEX)]
    for i in range(len(types)):
        k, a = types[i]
        for h, b in types[i + 1 :]:
            if not (k < h or (k == h and a >= b)):
                return False
    seen: dict[tuple[int, int], list[int]] = {}
    for pos, ty in enumerate(types):
        seen.setdefault(ty, []).append(pos)
    return all(p[-1] - p[0] + 1 == len(p) for p in seen.values())
