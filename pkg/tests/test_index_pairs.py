import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dispgen import core_box, core_cell, count_index_pairs, enumerate_index_pairs
from dispgen.errors import BudgetExceeded
from dispgen.index_pairs import IndexPair, is_index_pair, sample_index_pair


def brute_classes(m, d):
    """Grid traces of open boxes with volume above 2^-m, found by grid search.

    Largest boxes with a given trace have endpoints on the grid itself, so
    scanning all integer endpoint pairs finds every reachable trace.
    """
    den = 2**m
    intervals = list(itertools.combinations(range(den + 1), 2))
    found = set()
    for box in itertools.product(intervals, repeat=d):
        vol = 1
        for a, b in box:
            vol *= b - a
        if Fraction(vol, den**d) <= Fraction(1, den):
            continue
        s = tuple(b - a - 1 for a, b in box)
        p = tuple(a + 1 for a, _ in box)
        found.add((s, p))
    return found


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_nonempty_classes_match_grid_search(m, d):
    pairs = enumerate_index_pairs(m, d)
    assert {(p.s, p.p_num) for p in pairs} == brute_classes(m, d)
    assert len(pairs) == count_index_pairs(m, d)


@pytest.mark.parametrize(
    "m, d, n", [(2, 1, 6), (2, 2, 27), (2, 3, 108), (2, 8, 4073), (3, 8, 52198807)]
)
def test_known_counts(m, d, n):
    assert count_index_pairs(m, d) == n


def test_enumeration_is_sorted_and_budgeted():
    pairs = enumerate_index_pairs(2, 3)
    keys = [tuple(itertools.chain.from_iterable(zip(p.s, p.p_num))) for p in pairs]
    assert keys == sorted(keys)
    with pytest.raises(BudgetExceeded):
        enumerate_index_pairs(3, 8)


@pytest.mark.parametrize("m, d", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_core_cells_are_large(m, d):
    levels = 2**m - 1
    for pair in enumerate_index_pairs(m, d):
        assert Fraction(core_cell(pair).size, levels**d) >= Fraction(1, 2 ** (m + 4))


@given(st.integers(1, 3), st.integers(1, 6), st.integers(0, 2**32))
def test_samples_are_valid(m, d, seed):
    rng = np.random.default_rng(seed)
    for _ in range(5):
        pair = sample_index_pair(m, d, rng)
        assert is_index_pair(m, pair.s, pair.p_num)


def test_core_box_and_cell_agree():
    for pair in enumerate_index_pairs(2, 2):
        box, cell = core_box(pair), core_cell(pair)
        grid = itertools.product(range(1, 4), repeat=2)
        inside = {g for g in grid if box.contains(tuple(Fraction(v, 4) for v in g))}
        assert inside == set(cell.points())
        assert all(cell.contains(g) for g in inside)


def test_pair_accessors():
    pair = IndexPair(2, (3, 2), (1, 2))
    assert pair.d == 2 and pair.p == (Fraction(1, 4), Fraction(1, 2))
    assert is_index_pair(2, pair.s, pair.p_num)
    assert not is_index_pair(2, (1, 1), (1, 1))
    assert core_cell(pair).size == 6
