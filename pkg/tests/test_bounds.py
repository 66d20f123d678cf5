import math
from fractions import Fraction

import numpy as np
import pytest

from cyldom import bounds
from cyldom.bounds import (Strip, fraction_str, make_report, optimize_partition,
                           paper_lower_bound, partition_str, report_csv_row,
                           total_waste, upper_bound_reference)
from cyldom.engine import WasteTable
from cyldom.errors import IncompleteTableError, InfeasiblePartitionError
from cyldom.oracle import exact_domination_number
from cyldom.transitions import Variant


def test_paper_lower_bound_values():
    assert paper_lower_bound(65, 20) == 286
    assert paper_lower_bound(66, 30) == Fraction(2118, 5)  # 423.6
    assert paper_lower_bound(68, 30) == 437
    with pytest.raises(ValueError):
        paper_lower_bound(63, 20)
    with pytest.raises(ValueError):
        paper_lower_bound(65, 19)


def test_upper_bound_values():
    assert upper_bound_reference(65, 20) == 286
    assert upper_bound_reference(66, 30) == 428
    assert upper_bound_reference(67, 30) == 432
    with pytest.raises(ValueError):
        upper_bound_reference(0, 5)


def test_gap_identity_and_ordering():
    for n in (67, 72, 102):
        for m in (20, 30, 40, 50):
            gap = upper_bound_reference(n, m) - paper_lower_bound(n, m)
            if m % 10 == 0:
                assert gap == Fraction(11, 5)
    for n in range(64, 80):
        for m in range(20, 45):
            assert paper_lower_bound(n, m) <= upper_bound_reference(n, m)


def test_fraction_str():
    assert fraction_str(Fraction(2118, 5)) == "423.6"
    assert fraction_str(Fraction(286)) == "286"
    assert fraction_str(Fraction(7, 40)) == "0.175"
    assert fraction_str(None) == ""


def _synthetic_boundary(height=10, n_max=90):
    d = np.arange(n_max + 1, dtype=np.int64)
    d[0] = 0
    return WasteTable(variant=Variant.BOUNDARY, height=height, n_max=n_max,
                      d=d, seeds_total=1, seeds_certified=1,
                      global_cert=(60, 1, 1), residue_constants=None)


def _synthetic_interior(height=10, n_max=90, residues=(0, 6, 5, 9, 6)):
    d = np.array([0] + [residues[n % 5] for n in range(1, n_max + 1)],
                 dtype=np.int64)
    return WasteTable(variant=Variant.INTERIOR, height=height, n_max=n_max,
                      d=d, seeds_total=1, seeds_certified=1,
                      global_cert=(12, 5, 0), residue_constants=list(residues))


@pytest.fixture()
def synthetic_tables():
    return {(Variant.BOUNDARY, 10): _synthetic_boundary(),
            (Variant.INTERIOR, 10): _synthetic_interior()}


def test_total_waste_and_partitions(synthetic_tables):
    part20 = (Strip(10, "boundary"), Strip(10, "boundary"))
    assert total_waste(70, part20, synthetic_tables) == 140
    part30 = (Strip(10, "boundary"), Strip(10, "interior"), Strip(10, "boundary"))
    assert total_waste(68, part30, synthetic_tables) == 2 * 68 + 9
    padded = (Strip(10, "boundary"), Strip(3, "padding"), Strip(10, "boundary"))
    assert total_waste(70, padded, synthetic_tables) == 140
    with pytest.raises(InfeasiblePartitionError):
        total_waste(70, (Strip(9, "boundary"), Strip(11, "boundary")),
                    synthetic_tables)
    with pytest.raises(ValueError):
        total_waste(70, (Strip(10, "interior"), Strip(10, "boundary")),
                    synthetic_tables)


def test_optimizer_canonical_partitions(synthetic_tables):
    part, value = optimize_partition(68, 20, synthetic_tables)
    assert part == (Strip(10, "boundary"), Strip(10, "boundary"))
    part, value = optimize_partition(68, 30, synthetic_tables)
    assert part == (Strip(10, "boundary"), Strip(10, "interior"),
                    Strip(10, "boundary"))
    assert value == 2 * 68 + 9
    part, value = optimize_partition(68, 25, synthetic_tables)
    assert part == (Strip(10, "boundary"), Strip(5, "padding"),
                    Strip(10, "boundary"))
    part, value = optimize_partition(68, 12, synthetic_tables)
    assert value == 68  # one boundary strip + padding
    assert sum(s.height for s in part) == 12


def test_optimizer_prefers_interior_height8(synthetic_tables):
    tables = dict(synthetic_tables)
    d8 = np.array([0] + [3] * 90, dtype=np.int64)
    tables[(Variant.INTERIOR, 8)] = WasteTable(
        variant=Variant.INTERIOR, height=8, n_max=90, d=d8, seeds_total=1,
        seeds_certified=1, global_cert=(1, 1, 0), residue_constants=[3])
    part, value = optimize_partition(70, 28, tables)
    assert part == (Strip(10, "boundary"), Strip(8, "interior"),
                    Strip(10, "boundary"))
    assert value == 140 + 3
    # without the height-8 table the leftover rows pad for free
    part2, value2 = optimize_partition(70, 28, synthetic_tables)
    assert part2 == (Strip(10, "boundary"), Strip(8, "padding"),
                     Strip(10, "boundary"))
    assert value2 == 140


def test_optimizer_requires_boundary_table(synthetic_tables):
    with pytest.raises(InfeasiblePartitionError):
        optimize_partition(68, 20, {(Variant.INTERIOR, 10):
                                    synthetic_tables[(Variant.INTERIOR, 10)]})


def test_reports_match_formulas(synthetic_tables):
    for n in range(65, 75):
        for m in (20, 30, 40):
            report = make_report(n, m, synthetic_tables)
            paper = paper_lower_bound(n, m)
            assert report.lower == math.ceil(paper)
            assert report.paper_lower == paper
            if n % 5 == 2:
                assert report.upper_ref - paper == Fraction(11, 5)
    report = make_report(65, 20, synthetic_tables)
    assert report.lower == 286 and report.upper_ref == 286 and report.determined


def test_report_examples(synthetic_tables):
    # L = 2n + a with a = 5 for n = 67 (residue 2), m = 30
    report = make_report(67, 30, synthetic_tables)
    assert report.total_waste == 2 * 67 + 5
    assert report.lower == math.ceil(Fraction(2010 + 139, 5)) == 430


def test_csv_row_format(synthetic_tables):
    report = make_report(66, 30, synthetic_tables)
    row = report_csv_row(report)
    assert row == "66,30,424,423.6,428,,B10+I10+B10"
    assert bounds.CSV_HEADER == "n,m,lower,paper_lower,upper_ref,exact,partition"
    small = make_report(66, 12, synthetic_tables)
    assert report_csv_row(small).split(",")[3] == "out of range"


def test_incomplete_tables_propagate():
    short = WasteTable(variant=Variant.BOUNDARY, height=10, n_max=30,
                       d=np.arange(31, dtype=np.int64), seeds_total=2,
                       seeds_certified=1, global_cert=None,
                       residue_constants=None)
    with pytest.raises(IncompleteTableError):
        total_waste(40, (Strip(10, "boundary"), Strip(10, "boundary")),
                    {(Variant.BOUNDARY, 10): short})


def test_oracle_sandwich_on_real_small_tables(small_tables):
    tables = {k: v for k, v in small_tables.items() if k[1] in (2, 3)}
    for n in (3, 4, 5):
        for m in (4, 5, 6):
            report = make_report(n, m, tables, want_exact=True)
            assert report.exact == exact_domination_number(n, m).gamma
            assert report.lower <= report.exact
            assert report.exact <= report.upper_ref
            assert report.lower >= math.ceil(Fraction(n * m, 5))
