from math import factorial

import pytest
from hypothesis import given, strategies as st

from parhitchin.combinatorics import (LeviType, LevelFunction, Partition, branch_steps,
                                      compositions, conjugate, flag_dimension, level_function,
                                      min_pair_sum, partitions, sort_to_partition,
                                      weyl_coset_count)
from parhitchin.errors import CountOverflow

levi_types = st.lists(st.integers(1, 5), min_size=1, max_size=6).map(lambda x: LeviType(tuple(x)))


# -- oracle examples ---------------------------------------------------------

def test_conjugate_examples():
    assert conjugate((5, 4, 2)).parts == (3, 3, 2, 2, 1)
    assert conjugate((4,)).parts == (1, 1, 1, 1)
    assert conjugate((1, 1, 1)).parts == (3,)


def test_level_function_examples():
    assert level_function((5, 4, 2)).values == (1, 1, 1, 2, 2, 2, 3, 3, 4, 4, 5)
    # straight from the defining inequality: a single row gives one box per column
    assert level_function((6,)).values == (1, 2, 3, 4, 5, 6)
    assert level_function((1, 1, 1)).values == (1, 1, 1)
    assert level_function((1, 1)).values == (1, 1)


def test_sort_to_partition_examples():
    assert sort_to_partition((1, 4, 2)).parts == (4, 2, 1)
    assert sort_to_partition((2, 2)).parts == (2, 2)
    assert sort_to_partition((1, 1, 1)).parts == (1, 1, 1)


def test_flag_dimension_examples():
    assert flag_dimension((1, 1)) == 1
    assert flag_dimension((7,)) == 0
    assert flag_dimension((5, 4, 2)) == 38


def test_weyl_coset_count_examples():
    for r in range(1, 9):
        assert weyl_coset_count((1,) * r) == factorial(r)
        assert weyl_coset_count((r,)) == 1
    assert weyl_coset_count((2, 1)) == 3


def test_min_pair_sum_examples():
    assert min_pair_sum((3, 3, 2, 2, 1)) == 17
    assert min_pair_sum((5,)) == 0
    assert min_pair_sum((1, 1)) == 1


# -- validation --------------------------------------------------------------

@pytest.mark.parametrize("parts", [(), (1, 2), (2, 0)])
def test_partition_rejects_bad_parts(parts):
    with pytest.raises(ValueError):
        Partition(parts)


@pytest.mark.parametrize("ms", [(), (0, 1), (2, -1)])
def test_levi_rejects_bad_multiplicities(ms):
    with pytest.raises(ValueError):
        LeviType(ms)


@pytest.mark.parametrize("vals", [(2, 2), (1, 3), (1, 2, 1)])
def test_level_function_rejects_bad_values(vals):
    with pytest.raises(ValueError):
        LevelFunction(vals)


def test_levi_keeps_order():
    assert LeviType((1, 4, 2)).multiplicities == (1, 4, 2)


def test_weyl_coset_count_overflow_reported():
    with pytest.raises(CountOverflow):
        weyl_coset_count((1,) * 20, limit=10 ** 6)
    assert weyl_coset_count((1,) * 20) == factorial(20)


# -- enumeration -------------------------------------------------------------

def test_partition_counts():
    # p(r) for r = 1..12
    counts = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]
    assert [sum(1 for _ in partitions(r)) for r in range(1, 13)] == counts


def test_composition_counts():
    for r in range(1, 9):
        comps = list(compositions(r))
        assert len(comps) == 2 ** (r - 1)
        assert len(set(comps)) == len(comps)
        assert all(c.rank == r for c in comps)


# -- identities, exhaustive for r <= 12 -------------------------------------

def all_partitions(limit=12):
    for r in range(1, limit + 1):
        yield from partitions(r)


def test_identities_exhaustive():
    for p in all_partitions():
        mu = conjugate(p).parts
        gam = level_function(p).values
        n = p.parts
        assert sum(gam) == sum(t * m for t, m in enumerate(mu, 1)) == sum(x * (x + 1) // 2 for x in n)
        assert sum(x * x for x in n) == sum((2 * t - 1) * m for t, m in enumerate(mu, 1))
        assert conjugate(conjugate(p)) == p
        assert min_pair_sum(conjugate(p)) == sum(x * (x - 1) // 2 for x in n)


def test_level_function_shape():
    for p in all_partitions():
        gam = level_function(p).values
        assert len(gam) == p.rank
        assert gam[0] == 1
        assert gam[-1] == p.parts[0]
        assert all(g <= j for j, g in enumerate(gam, 1))


# -- properties --------------------------------------------------------------

@given(levi_types, st.randoms(use_true_random=False))
def test_flag_dimension_order_independent(lt, rnd):
    ms = list(lt.multiplicities)
    rnd.shuffle(ms)
    assert flag_dimension(lt) == flag_dimension(ms) == flag_dimension(sort_to_partition(lt).parts)


@given(levi_types)
def test_flag_dimension_zero_iff_trivial(lt):
    assert (flag_dimension(lt) == 0) == (lt.length == 1)
    assert flag_dimension(lt) >= 0


@given(levi_types)
def test_coset_count_is_multinomial(lt):
    count = factorial(lt.rank)
    for m in lt.multiplicities:
        count //= factorial(m)
    assert weyl_coset_count(lt) == count


@given(levi_types)
def test_branch_steps_table(lt):
    steps = branch_steps(lt)
    mu = conjugate(sort_to_partition(lt)).parts
    # branch i ends at its degree, and flag step j drops exactly m_j dimensions
    assert tuple(row[-1] for row in steps) == mu
    for j, m in enumerate(lt.multiplicities):
        assert sum(row[j + 1] - row[j] for row in steps) == m
