"""Assembling strip waste tables into domination-number bounds.

Partition the cylinder's m rows into strips; the waste of a dominating
set is at least the sum of per-strip waste minima (each vertex is
counted at least once across strips), and a dominating set S satisfies
|S| >= (n*m + w(S)) / 5.  End strips use the boundary tables, inner
strips the interior tables, and any leftover rows may be covered by a
zero-waste "padding" pseudo-strip, which is always a sound lower bound.

Closed-form reference values, by n mod 5 with residues (0,1,2,3,4):

    lower (m >= 20, n >= 64):  (m+2)n/5 + (a/5) * floor((m-20)/10),
                               a = 0, 6, 5, 9, 6
    upper (reference only):    (m+2)n/5 + c * (m+2),
                               c = 0, 7/40, 1/10, 2/5, 1/5

All formula arithmetic is exact rational; only the final assembled
lower bound is rounded (up), at report time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .engine import WasteTable
from .errors import InfeasiblePartitionError
from .oracle import exact_domination_number
from .transitions import Variant

A_BY_RESIDUE = (0, 6, 5, 9, 6)
C_BY_RESIDUE = (Fraction(0), Fraction(7, 40), Fraction(1, 10),
                Fraction(2, 5), Fraction(1, 5))

ROLE_BOUNDARY = "boundary"
ROLE_INTERIOR = "interior"
ROLE_PADDING = "padding"

CSV_HEADER = "n,m,lower,paper_lower,upper_ref,exact,partition"


def paper_lower_bound(n: int, m: int) -> Fraction:
    """Closed-form lower bound; defined for m >= 20 and n >= 64."""
    if m < 20 or n < 64:
        raise ValueError(f"closed-form lower bound needs m >= 20 and n >= 64, got ({n}, {m})")
    a = A_BY_RESIDUE[n % 5]
    return Fraction((m + 2) * n, 5) + Fraction(a * ((m - 20) // 10), 5)


def upper_bound_reference(n: int, m: int) -> Fraction:
    """Known constructive upper bound, reported as a reference value."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    return Fraction((m + 2) * n, 5) + C_BY_RESIDUE[n % 5] * (m + 2)


@dataclass(frozen=True)
class Strip:
    height: int
    role: str

    def __str__(self) -> str:
        return f"{self.role[0].upper()}{self.height}"


StripPartition = tuple[Strip, ...]

TableMap = Mapping[tuple[Variant, int], WasteTable]


def validate_partition(partition: StripPartition, m: int) -> None:
    if len(partition) < 2:
        raise ValueError("a partition needs at least two strips")
    if sum(s.height for s in partition) != m:
        raise ValueError(f"strip heights must sum to m={m}")
    if any(s.height < 1 for s in partition):
        raise ValueError("strip heights must be positive")
    for k, s in enumerate(partition):
        if s.role == ROLE_PADDING:
            continue
        at_end = k in (0, len(partition) - 1)
        if at_end and s.role != ROLE_BOUNDARY:
            raise ValueError("non-padding end strips must be boundary strips")
        if not at_end and s.role != ROLE_INTERIOR:
            raise ValueError("non-padding inner strips must be interior strips")


def partition_str(partition: StripPartition) -> str:
    return "+".join(str(s) for s in partition)


def total_waste(n: int, partition: StripPartition, tables: TableMap) -> int:
    """Sum of per-strip waste lower bounds at circumference n."""
    validate_partition(partition, sum(s.height for s in partition))
    total = 0
    for s in partition:
        if s.role == ROLE_PADDING:
            continue
        variant = Variant.BOUNDARY if s.role == ROLE_BOUNDARY else Variant.INTERIOR
        table = tables.get((variant, s.height))
        if table is None:
            raise InfeasiblePartitionError(
                f"no {variant.value} table for height {s.height}")
        total += table.query(n)
    return total


def optimize_partition(n: int, m: int, tables: TableMap) -> tuple[StripPartition, int]:
    """Partition of m maximising the total waste at circumference n.

    End strips draw on boundary tables, inner strips on interior
    tables, and leftover rows become a zero-waste padding strip (ends
    included, when no boundary strip fits).  Ties prefer the
    lexicographically smallest height sequence, then role names.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    b_heights = sorted(h for (v, h) in tables if v is Variant.BOUNDARY)
    i_heights = sorted(h for (v, h) in tables if v is Variant.INTERIOR)
    if not b_heights:
        raise InfeasiblePartitionError("no boundary table available")
    b_val = {h: tables[(Variant.BOUNDARY, h)].query(n) for h in b_heights}
    i_val = {h: tables[(Variant.INTERIOR, h)].query(n) for h in i_heights}

    def middle_best(rows: int) -> tuple[int, list[int]]:
        """Unbounded knapsack over interior strips; leftover rows pad for free."""
        value = [0] * (rows + 1)
        pick = [0] * (rows + 1)  # 0 = padding row, else interior height
        for r in range(1, rows + 1):
            value[r], pick[r] = value[r - 1], 0
            for hh in i_heights:
                if hh <= r and value[r - hh] + i_val[hh] > value[r]:
                    value[r], pick[r] = value[r - hh] + i_val[hh], hh
        heights, r = [], rows
        while r > 0:
            if pick[r]:
                heights.append(pick[r])
                r -= pick[r]
            else:
                r -= 1
        return value[rows], sorted(heights)

    candidates = []
    for b1 in [*b_heights, 0]:
        for b2 in [*b_heights, 0]:
            rows = m - b1 - b2
            if rows < 0:
                continue
            mid_value, mid_heights = middle_best(rows)
            pad = rows - sum(mid_heights)
            strips = []
            if b1:
                strips.append(Strip(b1, ROLE_BOUNDARY))
            strips.extend(Strip(hh, ROLE_INTERIOR) for hh in mid_heights)
            if pad:
                strips.append(Strip(pad, ROLE_PADDING))
            if b2:
                strips.append(Strip(b2, ROLE_BOUNDARY))
            if len(strips) == 1:  # all rows in one padding strip: split to keep t >= 2
                strips = [Strip(1, ROLE_PADDING), Strip(m - 1, ROLE_PADDING)]
            value = (b_val.get(b1, 0) if b1 else 0) + (b_val.get(b2, 0) if b2 else 0) \
                + mid_value
            partition = tuple(strips)
            key = (-value, tuple(s.height for s in partition),
                   tuple(s.role for s in partition))
            candidates.append((key, partition, value))
    if not candidates:
        raise InfeasiblePartitionError(f"no partition of m={m} is feasible")
    key, partition, value = min(candidates)
    validate_partition(partition, m)
    return partition, value


@dataclass(frozen=True)
class BoundReport:
    n: int
    m: int
    partition: StripPartition
    total_waste: int
    lower: int
    paper_lower: Fraction | None
    upper_ref: Fraction
    exact: int | None
    determined: bool


def make_report(n: int, m: int, tables: TableMap, *,
                want_exact: bool = False, exact_mode: str = "auto",
                exact_caps: tuple[int, int] = (14, 24)) -> BoundReport:
    """Assembled lower bound plus reference values for one cylinder."""
    if n < 3:
        raise ValueError("cylinders need n >= 3")
    partition, waste = optimize_partition(n, m, tables)
    lower = math.ceil(Fraction(n * m + waste, 5))
    paper = None
    if m >= 20 and n >= 64:
        paper = paper_lower_bound(n, m)
    upper = upper_bound_reference(n, m)
    exact = None
    if want_exact and n <= exact_caps[0] and m <= exact_caps[1]:
        exact = exact_domination_number(n, m, mode=exact_mode,
                                        max_n=exact_caps[0], max_m=exact_caps[1]).gamma
    determined = lower == math.floor(upper)
    if lower > math.ceil(upper):
        raise AssertionError("assembled lower bound exceeds the reference upper bound")
    return BoundReport(n=n, m=m, partition=partition, total_waste=waste,
                       lower=lower, paper_lower=paper, upper_ref=upper,
                       exact=exact, determined=determined)


def fraction_str(value: Fraction | None) -> str:
    """Exact decimal rendering (denominators here only have factors 2 and 5)."""
    if value is None:
        return ""
    if value.denominator == 1:
        return str(value.numerator)
    scale, d = 0, value.denominator
    while d % 2 == 0:
        d //= 2
        scale += 1
    s5 = 0
    while d % 5 == 0:
        d //= 5
        s5 += 1
    if d != 1:
        return str(value)
    digits = max(scale, s5)
    scaled = value * 10 ** digits
    text = str(scaled.numerator).rjust(digits + 1, "0")
    return f"{text[:-digits]}.{text[-digits:]}"


def report_csv_row(report: BoundReport, paper_out_of_range: str = "out of range") -> str:
    paper = fraction_str(report.paper_lower) if report.paper_lower is not None \
        else paper_out_of_range
    exact = "" if report.exact is None else str(report.exact)
    return (f"{report.n},{report.m},{report.lower},{paper},"
            f"{fraction_str(report.upper_ref)},{exact},{partition_str(report.partition)}")


def report_json_dict(report: BoundReport) -> dict:
    return {
        "n": report.n,
        "m": report.m,
        "lower": report.lower,
        "paper_lower": None if report.paper_lower is None
                       else fraction_str(report.paper_lower),
        "upper_ref": fraction_str(report.upper_ref),
        "gap": None if report.paper_lower is None
               else fraction_str(report.upper_ref - report.paper_lower),
        "exact": report.exact,
        "total_waste": report.total_waste,
        "partition": [{"height": s.height, "role": s.role} for s in report.partition],
        "determined": report.determined,
    }
