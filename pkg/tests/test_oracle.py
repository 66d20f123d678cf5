from itertools import product

import pytest

from cyldom.errors import CapacityError
from cyldom.oracle import (ExactResult, brute_min_waste, count_cyclic_states,
                           dominates_cylinder, exact_domination_number, waste_of,
                           _enumerate_cyclic_states)
from cyldom.transitions import Variant


def test_waste_of_examples():
    assert waste_of([], Variant.INTERIOR, 3, 4) == 0
    assert waste_of([(3, 3)], Variant.INTERIOR, 5, 5) == 0
    assert waste_of([(2, 3), (3, 3)], Variant.INTERIOR, 5, 6) == 2
    with pytest.raises(ValueError):
        waste_of([(0, 1)], Variant.INTERIOR, 3, 4)


def test_waste_of_phantom_rows():
    # one occupant in the bottom row: phantom below counts for both variants
    assert waste_of([(2, 1)], Variant.BOUNDARY, 3, 5) == 0
    assert waste_of([(2, 1)], Variant.INTERIOR, 3, 5) == 0
    # a full column of height 1: boundary credits one phantom, interior two
    assert waste_of([(1, 1)], Variant.BOUNDARY, 1, 5) == 5 - 4
    assert waste_of([(1, 1)], Variant.INTERIOR, 1, 5) == 5 - 5


@pytest.mark.parametrize("n", [3, 4, 5])
def test_brute_interior_h1_is_zero(n):
    assert brute_min_waste(1, n, Variant.INTERIOR) == 0


def test_brute_frozen_values():
    # frozen from the exhaustive search itself (regression anchors)
    assert [brute_min_waste(2, n, Variant.BOUNDARY) for n in (3, 4, 5)] == [1, 1, 3]
    assert [brute_min_waste(3, n, Variant.BOUNDARY) for n in (3, 4, 5)] == [3, 1, 3]
    assert [brute_min_waste(1, n, Variant.BOUNDARY) for n in (3, 4, 5)] == [0, 0, 0]


def test_brute_cap():
    with pytest.raises(CapacityError):
        brute_min_waste(5, 5, Variant.INTERIOR)


def test_gamma_small_cycles():
    assert exact_domination_number(3, 1).gamma == 1
    assert exact_domination_number(4, 1).gamma == 2
    for n in range(3, 13):
        profile = exact_domination_number(n, 1, mode="profile").gamma
        exhaustive = exact_domination_number(n, 1, mode="exhaustive").gamma
        assert profile == exhaustive == -(-n // 3)


@pytest.mark.parametrize("n,m", [(3, 4), (4, 3), (5, 4), (6, 3), (10, 2)])
def test_gamma_modes_agree(n, m):
    ex = exact_domination_number(n, m, mode="exhaustive")
    pr = exact_domination_number(n, m, mode="profile")
    assert ex.gamma == pr.gamma


def test_gamma_witnesses():
    res = exact_domination_number(5, 4, mode="exhaustive", want_witness=True)
    assert isinstance(res, ExactResult)
    assert res.witness is not None
    assert len(res.witness) == res.gamma
    assert dominates_cylinder(res.witness, 5, 4)
    res2 = exact_domination_number(5, 4, mode="profile", want_witness=True)
    assert res2.gamma == res.gamma
    assert dominates_cylinder(res2.witness, 5, 4)
    assert len(res2.witness) == res2.gamma


def test_gamma_validation_and_caps():
    with pytest.raises(ValueError):
        exact_domination_number(2, 3)
    with pytest.raises(CapacityError):
        exact_domination_number(15, 3)
    with pytest.raises(CapacityError):
        exact_domination_number(10, 25)
    with pytest.raises(CapacityError):
        exact_domination_number(7, 3, mode="exhaustive")  # 21 cells


def brute_cyclic_count(n):
    return sum(1 for w in product((0, 1, 2), repeat=n)
               if all({w[k], w[(k + 1) % n]} != {0, 2} for k in range(n)))


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_count_cyclic_states_small(n):
    assert count_cyclic_states(n) == brute_cyclic_count(n)
    assert _enumerate_cyclic_states(n).shape[0] == count_cyclic_states(n)


def test_count_cyclic_states_n10():
    assert count_cyclic_states(10) == 6727
