"""Verification suites exposed through the CLI.

``oracle`` reconciles the transition engine with the independent
brute-force/exact oracle on small instances; ``paper`` reruns the two
height-10 computations and checks the published residue pattern and
closed-form values.  Checks never raise on mismatch; they report.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import bounds, oracle
from .engine import compute_waste_table, load_or_compute_table, reconstruct_witness
from .states import enumerate_valid_states
from .transitions import Variant, build_transition_table

SUITES = ("oracle", "paper", "all")


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    expected: str
    got: str


def _check(name: str, expected, got) -> CheckResult:
    return CheckResult(name=name, ok=expected == got,
                       expected=repr(expected), got=repr(got))


def suite_oracle(threads: int | None = None) -> list[CheckResult]:
    results = []
    small = {}
    for variant, h in product(Variant, (1, 2, 3)):
        small[(variant, h)] = compute_waste_table(h, variant, n_max=8, threads=1)
    for variant, h, n in product(Variant, (1, 2, 3), (3, 4, 5)):
        name = f"dp_equals_brute[{variant.value},h={h},n={n}]"
        results.append(_check(name, oracle.brute_min_waste(h, n, variant),
                              small[(variant, h)].query(n)))

    for variant, h, n in product(Variant, (1, 2, 3), (2, 3, 4)):
        table = small[(variant, h)]
        finite = [s for s in range(table.seeds_total)
                  if table.seed_series[s, n] < 1 << 30]
        best = min(finite, key=lambda s: table.seed_series[s, n])
        stable = enumerate_valid_states(h)
        ttable = build_transition_table(stable, variant)
        cells, dp_value = reconstruct_witness(best, n, ttable, stable)
        name = f"witness_waste[{variant.value},h={h},n={n}]"
        results.append(_check(name, dp_value,
                              oracle.waste_of(cells, variant, h, n)))

    results.append(_check("gamma[C3]", 1,
                          oracle.exact_domination_number(3, 1).gamma))
    results.append(_check("gamma[C4]", 2,
                          oracle.exact_domination_number(4, 1).gamma))
    results.append(_check("gamma[10x12]", 28,
                          oracle.exact_domination_number(10, 12, mode="profile").gamma))
    for n in range(3, 15):
        for m in range(1, 25):
            if n * m > 20:
                continue
            name = f"gamma_modes_agree[{n}x{m}]"
            ex = oracle.exact_domination_number(n, m, mode="exhaustive").gamma
            pr = oracle.exact_domination_number(n, m, mode="profile").gamma
            results.append(_check(name, ex, pr))
    for n in (3, 4, 10):
        count = oracle.count_cyclic_states(n)
        got = oracle._enumerate_cyclic_states(n).shape[0]
        results.append(_check(f"cyclic_state_count[n={n}]", count, got))
    return results


def suite_paper(cache_dir=None, threads: int | None = None) -> list[CheckResult]:
    results = []
    interior, _ = load_or_compute_table(cache_dir, Variant.INTERIOR, 10, threads=threads)
    boundary, _ = load_or_compute_table(cache_dir, Variant.BOUNDARY, 10, threads=threads)

    results.append(_check("interior10_global", (12, 5, 0), interior.global_cert))
    results.append(_check("interior10_residues", [0, 6, 5, 9, 6],
                          interior.residue_constants))
    ok_vals = all(interior.query(n) == (0, 6, 5, 9, 6)[n % 5]
                  for n in range(12, interior.n_max + 1))
    results.append(CheckResult("interior10_values_n>=12", ok_vals,
                               "d(n) = (0,6,5,9,6)[n mod 5]", "match" if ok_vals else "mismatch"))
    results.append(_check("interior10_query_huge", 9, interior.query(10 ** 6 + 3)))

    got = [boundary.query(n) for n in range(65, 81)]
    results.append(_check("boundary10_values_65_80", list(range(65, 81)), got))
    g = boundary.global_cert
    results.append(CheckResult("boundary10_global_pq", g is not None and g[1:] == (1, 1)
                               and g[0] <= 65, "(N<=65, p=1, q=1)", repr(g)))
    results.append(_check("boundary10_query_100", 100, boundary.query(100)))

    tables = {(Variant.INTERIOR, 10): interior, (Variant.BOUNDARY, 10): boundary}
    formulas_ok, gaps_ok = True, True
    for n in range(65, 75):
        for m in (20, 30, 40):
            report = bounds.make_report(n, m, tables)
            paper = bounds.paper_lower_bound(n, m)
            if report.lower != -(-paper.numerator // paper.denominator):
                formulas_ok = False
            if paper > report.upper_ref:
                formulas_ok = False
            if n % 5 == 2 and report.upper_ref - paper != Fraction(11, 5):
                gaps_ok = False
    results.append(CheckResult("assembled_equals_formula", formulas_ok,
                               "lower == ceil(closed form), lower form <= upper form",
                               "match" if formulas_ok else "mismatch"))
    results.append(CheckResult("gap_residue2", gaps_ok, "upper - lower == 2.2",
                               "match" if gaps_ok else "mismatch"))
    return results


def run_suite(suite: str, cache_dir=None, threads: int | None = None) -> list[CheckResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    results = []
    if suite in ("oracle", "all"):
        results.extend(suite_oracle(threads=threads))
    if suite in ("paper", "all"):
        results.extend(suite_paper(cache_dir=cache_dir, threads=threads))
    return results
