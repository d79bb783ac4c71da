"""Command-line front end: bounds, analyze, gen, reproduce.

Exit codes: 0 success, 1 usage or range error, 2 computation cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from . import sysfile
from .bounds import BoundError, BoundReport, bound_report
from .groebner import CapExceeded, solving_degree_mutant, solving_degree_standard
from .polyring import GREVLEX, LEX, PolyError, PolySystem, count_monomials, field_equations
from .regularity import (
    default_dreg_cap,
    degree_of_regularity,
    independent_top_count,
    is_algebraically_random,
    is_semiregular,
)
from .schemes import (
    HfevParams,
    RainbowParams,
    add_field_equations,
    disguise,
    gen_hfev_minus,
    gen_lpp_sharp_system,
    gen_rainbow,
    gen_random_system,
    make_square,
)

EXIT_OK, EXIT_USAGE, EXIT_CAP = 0, 1, 2
U64_MAX = 2**64 - 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not 0 <= v <= U64_MAX:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma-separated integer list") from None


# ---------------------------------------------------------------- bounds

def cmd_bounds(args) -> int:
    rep = bound_report(args.n, args.m, args.D, args.q, args.field_eqs)
    print("n m D q | k t | dreg | solvdeg (standard) | solvdeg (mutant)")
    print(rep.row())
    print(f"case={rep.case} assumptions={','.join(rep.assumptions) or 'none'}")
    return EXIT_OK


# ---------------------------------------------------------------- analyze

def _split_field_equations(F: PolySystem) -> tuple[PolySystem, bool]:
    """(F without field equations, whether they were present)."""
    if not F.has_field_equations():
        return F, False
    fe = {frozenset(f.terms.items()) for f in field_equations(F.field, F.nvars)}
    rest = [f for f in F if frozenset(f.terms.items()) not in fe]
    return (PolySystem(rest, dict(F.metadata)) if rest else F), True


def _report_for(base: PolySystem, field_eqs: bool) -> BoundReport | None:
    """Bounds for an equal-degree system; m counts linearly independent top parts."""
    degs = set(base.degrees)
    if len(degs) != 1:
        return None
    D = degs.pop()
    m = independent_top_count(base, base.q if field_eqs and base.q <= D else None)
    try:
        return bound_report(base.nvars, m, D, base.q, field_eqs)
    except BoundError:
        return None


def cmd_analyze(args) -> int:
    try:
        F = sysfile.read(args.input)
    except (OSError, sysfile.SysFileError) as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    base, had_fe = _split_field_equations(F)
    with_fe = args.field_eqs or had_fe
    system = add_field_equations(base) if with_fe else base
    rep = _report_for(base, with_fe)
    order = LEX if args.order == "lex" else GREVLEX
    summary: list[str] = []
    status = EXIT_OK
    tag = " (with field equations)" if with_fe else ""
    print(f"system: q={F.q} vars={F.nvars} polys={len(base)} degrees={','.join(map(str, base.degrees))}{tag}")
    if rep is not None:
        print(f"bounds: {rep.row()}")

    dreg_base = None
    if args.dreg or args.standard:
        cap = args.cap if args.cap is not None else default_dreg_cap(system)
        d = degree_of_regularity(system, cap)
        if args.dreg:
            text = f"dreg={d}" if d is not None else ("dreg=inf" if args.cap is None else f"dreg>{cap} (cap)")
            if d is None and args.cap is not None:
                status = EXIT_CAP
            print(text + (f" max={rep.dreg_bound}" if rep else ""))
            summary.append(text)
        dreg_base = degree_of_regularity(base) if with_fe else d

    if args.random:
        if len(base) < base.nvars:
            print("random=n/a (fewer polynomials than variables)")
            summary.append("random=n/a")
        else:
            v = is_algebraically_random(system, rng=args.seed)
            word = {"random": "yes", "not_random": "no"}.get(v.verdict, v.verdict)
            print(f"random={word} ({v})")
            summary.append(f"random={word}")

    if args.semiregular:
        s = is_semiregular(system.top(), args.cap)
        print(f"semiregular={'yes' if s else 'no'}")
        summary.append(f"semiregular={'yes' if s else 'no'}")

    for flag, name, fn in ((args.standard, "solvdeg_s", solving_degree_standard), (args.mutant, "solvdeg_m", solving_degree_mutant)):
        if not flag:
            continue
        res = None
        try:
            res = fn(system, order, args.cap)
            text = f"{name}={res.degree}"
        except CapExceeded as exc:
            text = f"{name}>{exc.cap} (cap)"
            status = EXIT_CAP
        bound = ""
        if rep is not None:
            if name == "solvdeg_m":
                bound = f" max={rep.solvdeg_mutant_bound}"
            elif rep.standard_applies(dreg_base):
                bound = f" max={rep.solvdeg_standard_bound}"
            elif with_fe:
                bound = " max=n/a"
        print(text + bound)
        summary.append(text)
        if args.log and res is not None:
            print(res.log_text())
    print("summary: " + " ".join(summary))
    return status


# ---------------------------------------------------------------- gen

def _generate(args, rng: np.random.Generator) -> PolySystem:
    if args.scheme == "random":
        degrees = args.degrees if args.degrees else [args.D] * args.m
        return gen_random_system(args.q, args.n, args.m, degrees, rng)
    if args.scheme == "lpp-sharp":
        return gen_lpp_sharp_system(args.q, args.n, args.m, args.D)
    if args.scheme == "hfev":
        return gen_hfev_minus(HfevParams(args.n, args.d_hfe, args.a, args.v), rng)
    if args.scheme == "rainbow":
        if len(args.layers) != 3:
            raise UsageError("--layers needs three entries v1,o1,o2")
        return gen_rainbow(RainbowParams(args.q, tuple(args.layers)), rng)
    raise UsageError(f"unknown scheme {args.scheme}")


def cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    F = _generate(args, rng)
    if args.disguise:
        F = disguise(F, rng)[0]
    if args.square:
        F = make_square(F, rng=rng)
    if args.field_eqs:
        F = add_field_equations(F)
    F.metadata["seed"] = str(args.seed)
    F.metadata["scheme"] = args.scheme
    steps = [s for s, on in (("disguise", args.disguise), ("square", args.square), ("field-eqs", args.field_eqs)) if on]
    if steps:
        F.metadata["pipeline"] = ",".join(steps)
    text = sysfile.dumps(F)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- reproduce

@dataclass(frozen=True)
class GemssRow:
    n: int
    d_hfe: int
    a: int
    v: int
    ref_dreg: int | None
    ref_max_dreg: int
    ref_solvdeg: int
    ref_max_solvdeg: int
    desk: bool = True

    @property
    def m(self) -> int:
        return self.n - self.a

    def label(self) -> str:
        return f"n={self.n} D={self.d_hfe} a={self.a} v={self.v}"


@dataclass(frozen=True)
class RainbowRow:
    q: int
    layers: tuple[int, int, int]
    ref_dreg: str
    ref_dreg_fe: str
    ref_solvdeg: int
    ref_max_solvdeg: str
    desk: bool = True

    @property
    def m(self) -> int:
        return self.layers[1] + self.layers[2]

    def label(self) -> str:
        return f"q={self.q} [{','.join(map(str, self.layers))}]"


GEMSS_ROWS = [
    GemssRow(12, 4, 1, 1, 5, 10, 3, 18),
    GemssRow(8, 9, 1, 1, 3, 6, 3, 10),
    GemssRow(8, 9, 1, 2, 3, 6, 3, 10),
    GemssRow(8, 9, 2, 1, 3, 5, 3, 8),
    GemssRow(8, 9, 2, 2, 3, 5, 3, 8),
    GemssRow(24, 4, 1, 1, None, 22, 4, 42, desk=False),
    GemssRow(24, 4, 1, 2, None, 22, 4, 42, desk=False),
    GemssRow(24, 4, 1, 3, None, 22, 4, 42, desk=False),
    GemssRow(24, 4, 2, 1, None, 21, 4, 40, desk=False),
    GemssRow(24, 4, 2, 2, None, 21, 4, 40, desk=False),
    GemssRow(24, 4, 3, 1, None, 20, 4, 38, desk=False),
]

RAINBOW_ROWS = [
    RainbowRow(4, (3, 2, 2), "4/5", "4", 4, "8"),
    RainbowRow(4, (3, 3, 3), "6/7", "5", 5, "12"),
    RainbowRow(4, (7, 5, 5), "10/11", "6", 6, "20", desk=False),
    RainbowRow(9, (3, 2, 2), "5", "5", 9, "--"),
    RainbowRow(9, (7, 5, 5), "11", "9/10", 10, "20", desk=False),
]

DESK_LIMIT = 2**24
# Macaulay matrix entries allowed per dreg step in reproduce; larger steps report "cap"
MATRIX_BUDGET = 2**27


@dataclass
class InstanceResult:
    row: int
    instance: int
    values: dict[str, int | None] = dc_field(default_factory=dict)
    capped: set = dc_field(default_factory=set)
    solvable: str = "unchecked"
    bound_standard: str = "n/a"


def _solvdeg(fn, system, cap):
    try:
        return fn(system, GREVLEX, cap).degree, False
    except CapExceeded:
        return None, True


def _dreg_budgeted(F: PolySystem, budget: int = MATRIX_BUDGET) -> tuple[int | None, bool]:
    """degree_of_regularity limited to degrees whose Macaulay matrix fits the budget.

    Returns (dreg, capped); dreg None with capped False means d_reg is infinite.
    """
    n = F.nvars
    degs = [f.degree() for f in F if not f.is_zero()]
    full_cap = default_dreg_cap(F)
    cap = min(degs) - 1
    while cap < full_cap:
        d = cap + 1
        entries = count_monomials(n, d) * sum(count_monomials(n, d - e) for e in degs if e <= d)
        if entries > budget:
            break
        cap = d
    dreg = degree_of_regularity(F, d_cap=cap) if cap >= min(degs) else None
    return dreg, dreg is None and cap < full_cap


def instance_seed(master: int, row: int, instance: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([master & 0xFFFFFFFF, master >> 32, row, instance])


def run_gemss_instance(row_index: int, instance: int, master: int, dreg_only: bool = False) -> InstanceResult:
    row = GEMSS_ROWS[row_index]
    rng = np.random.default_rng(instance_seed(master, row_index, instance))
    P = gen_hfev_minus(HfevParams(row.n, row.d_hfe, row.a, row.v), rng)
    F = make_square(P, rng=rng)
    FE = add_field_equations(F)
    out = InstanceResult(row_index, instance, solvable=F.metadata["solvable"])
    out.values["dreg_fe"], capped = _dreg_budgeted(FE)
    if capped:
        out.capped.add("dreg_fe")
    if not dreg_only:
        for key, fn in (("solvdeg_m_fe", solving_degree_mutant), ("solvdeg_s_fe", solving_degree_standard)):
            out.values[key], capped = _solvdeg(fn, FE, None)
            if capped:
                out.capped.add(key)
    rep = bound_report(row.m, row.m, 2, 2, True)
    out.bound_standard = str(rep.solvdeg_standard_bound)
    return out


def run_rainbow_instance(row_index: int, instance: int, master: int, dreg_only: bool = False) -> InstanceResult:
    row = RAINBOW_ROWS[row_index]
    rng = np.random.default_rng(instance_seed(master, row_index, instance))
    P = gen_rainbow(RainbowParams(row.q, row.layers), rng)
    F = make_square(P, rng=rng)
    FE = add_field_equations(F)
    out = InstanceResult(row_index, instance, solvable=F.metadata["solvable"])
    for key, system in (("dreg", F), ("dreg_fe", FE)):
        out.values[key], capped = _dreg_budgeted(system)
        if capped:
            out.capped.add(key)
    if not dreg_only:
        for key, fn in (("solvdeg_s_fe", solving_degree_standard), ("solvdeg_m_fe", solving_degree_mutant)):
            out.values[key], capped = _solvdeg(fn, FE, None)
            if capped:
                out.capped.add(key)
    rep = bound_report(row.m, row.m, 2, row.q, True)
    dreg = None if "dreg" in out.capped else out.values["dreg"]
    out.bound_standard = str(rep.solvdeg_standard_bound) if rep.standard_applies(dreg) else "n/a"
    return out


def render_values(values: Sequence[int | None], capped: int = 0) -> str:
    """Distinct values joined by '/', followed by the full multiset."""
    c = Counter("inf" if v is None else v for v in values)
    if capped:
        c["cap"] = capped
    if not c:
        return "-"
    keys = sorted(c, key=lambda k: (isinstance(k, str), k if isinstance(k, int) else 0, str(k)))
    short = "/".join(str(k) for k in keys)
    if len(keys) == 1:
        return short
    return f"{short} [{' '.join(f'{k}x{c[k]}' for k in keys)}]"


def _select_rows(spec: str | None, rows) -> list[int]:
    if spec in (None, "desk"):
        return [i for i, r in enumerate(rows) if r.desk]
    if spec == "all":
        return list(range(len(rows)))
    idx = []
    for tok in spec.split(","):
        try:
            i = int(tok) - 1
        except ValueError:
            raise UsageError(f"bad row index {tok!r}") from None
        if not 0 <= i < len(rows):
            raise UsageError(f"row index {tok} outside 1..{len(rows)}")
        idx.append(i)
    return idx


def reproduce_table(table: str, rows: str | None, instances: int, seed: int, jobs: int = 1, dreg_only: bool = False, out=None) -> dict[int, list[InstanceResult]]:
    out = out or sys.stdout
    table_rows = GEMSS_ROWS if table == "gemss" else RAINBOW_ROWS
    runner = run_gemss_instance if table == "gemss" else run_rainbow_instance
    chosen = _select_rows(rows, table_rows)
    print(f"# reproduce {table} seed={seed} instances={instances}", file=out)
    tasks = []
    for i in chosen:
        r = table_rows[i]
        q = 2 if table == "gemss" else r.q
        if q**r.m > DESK_LIMIT:
            print(f"# row {i + 1} ({r.label()}): skipped, {q}^{r.m} exceeds the desk-scale limit 2^24", file=out)
            continue
        row_dreg_only = dreg_only or not r.desk
        if not r.desk:
            print(f"# row {i + 1} ({r.label()}): not desk scale, running dreg only", file=out)
        tasks += [(i, k, seed, row_dreg_only) for k in range(instances)]
    results: list[InstanceResult]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(runner, *zip(*tasks)))
    else:
        results = [runner(*t) for t in tasks]
    by_row: dict[int, list[InstanceResult]] = {}
    for res in sorted(results, key=lambda r: (r.row, r.instance)):
        by_row.setdefault(res.row, []).append(res)

    def col(rs, key):
        # keys absent from values were not computed (dreg-only rows)
        return render_values([r.values[key] for r in rs if key in r.values and key not in r.capped], sum(key in r.capped for r in rs))

    if table == "gemss":
        print("n, D | a | v | m | dreg(F+E) | max dreg(F+E) | solvdeg_m(F+E) | solvdeg_s(F+E) | max solvdeg_s(F+E) | reference dreg / solvdeg", file=out)
        for i, rs in by_row.items():
            r = GEMSS_ROWS[i]
            rep = bound_report(r.m, r.m, 2, 2, True)
            ref = f"{r.ref_dreg if r.ref_dreg is not None else ''} / {r.ref_solvdeg}"
            print(
                f"{r.n}, {r.d_hfe} | {r.a} | {r.v} | {r.m} | {col(rs, 'dreg_fe')} | {rep.dreg_bound} | "
                f"{col(rs, 'solvdeg_m_fe')} | {col(rs, 'solvdeg_s_fe')} | {rep.solvdeg_standard_bound} | {ref}",
                file=out,
            )
    else:
        print("q | [v1,o1,o2] | m | dreg(F) | dreg(F+E) | solvdeg_s(F+E) | solvdeg_m(F+E) | max solvdeg_s(F+E) | reference dreg(F) / dreg(F+E) / solvdeg / max", file=out)
        for i, rs in by_row.items():
            r = RAINBOW_ROWS[i]
            bounds = render_values_str([x.bound_standard for x in rs])
            ref = f"{r.ref_dreg} / {r.ref_dreg_fe} / {r.ref_solvdeg} / {r.ref_max_solvdeg}"
            print(
                f"{r.q} | [{','.join(map(str, r.layers))}] | {r.m} | {col(rs, 'dreg')} | {col(rs, 'dreg_fe')} | "
                f"{col(rs, 'solvdeg_s_fe')} | {col(rs, 'solvdeg_m_fe')} | {bounds} | {ref}",
                file=out,
            )
    unsolved = sum(r.solvable == "no" for rs in by_row.values() for r in rs)
    if unsolved:
        print(f"# {unsolved} instance(s) had no solvable target within the resampling limit", file=out)
    return by_row


def render_values_str(values: Sequence[str]) -> str:
    c = Counter(values)
    keys = sorted(c, key=lambda k: (not k.isdigit(), int(k) if k.isdigit() else 0))
    if len(keys) == 1:
        return keys[0]
    return f"{'/'.join(keys)} [{' '.join(f'{k}x{c[k]}' for k in keys)}]"


def cmd_reproduce(args) -> int:
    if args.instances < 1:
        raise UsageError("--instances must be positive")
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    reproduce_table(args.table, args.rows, args.instances, args.seed, args.jobs, args.dreg_only)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mqinv", description="Degree of regularity and solving degree of polynomial systems over small finite fields.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bounds", help="closed-form bounds for algebraically random systems")
    b.add_argument("-n", type=int, required=True, help="variables")
    b.add_argument("-m", type=int, required=True, help="polynomials")
    b.add_argument("-D", type=int, required=True, help="common degree")
    b.add_argument("-q", type=int, default=None, help="field size")
    b.add_argument("--field-eqs", action="store_true", help="field equations are appended")
    b.set_defaults(func=cmd_bounds)

    a = sub.add_parser("analyze", help="compute invariants of a system file")
    a.add_argument("input")
    a.add_argument("--field-eqs", action="store_true", help="append field equations")
    a.add_argument("--dreg", action="store_true")
    a.add_argument("--standard", action="store_true", help="solving degree, standard Macaulay variant")
    a.add_argument("--mutant", action="store_true", help="solving degree, mutant variant")
    a.add_argument("--random", action="store_true", help="algebraic randomness test")
    a.add_argument("--semiregular", action="store_true")
    a.add_argument("--order", choices=("grevlex", "lex"), default="grevlex")
    a.add_argument("--cap", type=int, default=None, help="degree cap")
    a.add_argument("--seed", type=_u64, default=0)
    a.add_argument("--log", action="store_true", help="print the per-degree log")
    a.set_defaults(func=cmd_analyze)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("scheme", choices=("random", "lpp-sharp", "hfev", "rainbow"))
    g.add_argument("-q", type=int, default=2)
    g.add_argument("-n", type=int)
    g.add_argument("-m", type=int)
    g.add_argument("-D", type=int, default=2)
    g.add_argument("--degrees", type=_int_list, default=None)
    g.add_argument("--d-hfe", type=int, default=None)
    g.add_argument("-a", type=int, default=0, help="minus count")
    g.add_argument("-v", type=int, default=0, help="vinegar count")
    g.add_argument("-l", "--layers", type=_int_list, default=None, help="v1,o1,o2")
    g.add_argument("--disguise", action="store_true")
    g.add_argument("--square", action="store_true")
    g.add_argument("--field-eqs", action="store_true")
    g.add_argument("--seed", type=_u64, default=0)
    g.add_argument("-o", "--out", default=None)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("reproduce", help="rerun the GeMSS or Rainbow experiment table")
    r.add_argument("table", choices=("gemss", "rainbow"))
    r.add_argument("--rows", default=None, help="'desk' (default), 'all' or 1-based indices")
    r.add_argument("--instances", type=int, default=10)
    r.add_argument("--seed", type=_u64, default=0)
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--dreg-only", action="store_true")
    r.set_defaults(func=cmd_reproduce)
    return p


def _check_gen_args(args):
    need = {"random": ("n", "m"), "lpp-sharp": ("n", "m"), "hfev": ("n", "d_hfe"), "rainbow": ("layers",)}
    for name in need[args.scheme]:
        if getattr(args, name) is None:
            raise UsageError(f"{args.scheme} needs --{name.replace('_', '-')}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            _check_gen_args(args)
        return args.func(args)
    except (UsageError, BoundError, PolyError, ValueError) as exc:
        print(f"mqinv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
