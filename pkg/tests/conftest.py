import pytest

from cyldom import Variant, compute_waste_table


@pytest.fixture(scope="session")
def small_tables():
    """Waste tables for h <= 3, both variants, computed single-threaded."""
    tables = {}
    for variant in Variant:
        for h in (1, 2, 3):
            tables[(variant, h)] = compute_waste_table(h, variant, n_max=12, threads=1)
    return tables
