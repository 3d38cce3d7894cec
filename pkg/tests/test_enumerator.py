from __future__ import annotations

from itertools import islice, permutations

import pytest

from magicgen.constraints import build_system
from magicgen.enumerator import (
    Shard,
    _iter_generic,
    _iter_order4,
    count_squares,
    enumerate_shards_parallel,
    enumerate_squares,
    iter_squares,
    shard_for,
    single_cell_shards,
    trial_cells,
)
from magicgen.squares import _is_magic_grid, is_normal_magic


def test_trial_order_matches_design():
    assert trial_cells(3) == (0, 1)
    # a, b, c (forces d), e, i (forces m and p), f (forces k), g (rest).
    assert trial_cells(4) == (0, 1, 2, 4, 8, 5, 6)
    assert trial_cells(5)[:8] == (0, 1, 2, 3, 5, 6, 7, 8)


def test_order3_matches_brute_force_oracle():
    brute = {
        p for p in permutations(range(1, 10)) if _is_magic_grid(p, 3)
    }
    mine = [sq.cells for sq in iter_squares(3)]
    assert len(mine) == 8
    assert set(mine) == brute
    assert len(set(mine)) == len(mine)


def test_order4_count(catalog4):
    assert len(catalog4) == 7040


def test_order4_no_duplicates(catalog4):
    assert len({sq.cells for sq in catalog4}) == 7040


def test_order4_all_magic_rechecked(catalog4):
    assert all(is_normal_magic(sq) for sq in catalog4)


def test_unsupported_order():
    with pytest.raises(ValueError, match="unsupported order"):
        count_squares(6)


def test_enumerate_squares_sink():
    seen = []
    count = enumerate_squares(3, seen.append)
    assert count == 8 == len(seen)


def test_determinism_two_runs_identical():
    a = [sq.cells for sq in iter_squares(4, Shard((7,)))]
    b = [sq.cells for sq in iter_squares(4, Shard((7,)))]
    assert a == b


@pytest.mark.parametrize("prefix", [(1,), (7,), (16,), (1, 15)])
def test_order4_fast_path_equals_generic_engine(prefix):
    assert list(_iter_order4(prefix)) == list(_iter_generic(4, prefix))


class TestShards:
    def test_complementary_shards_have_equal_counts(self):
        # v -> 17-v maps magic squares to magic squares and a=1 to a=16.
        assert count_squares(4, Shard((1,))) == count_squares(4, Shard((16,)))

    def test_contradictory_shard_is_empty(self):
        # No order-3 square has 1 in a corner (and 5 is pinned to the center).
        assert count_squares(3, Shard((1,))) == 0
        assert count_squares(3, Shard((5,))) == 0

    def test_shard_partition_sums_to_total(self, catalog4):
        counts = [count_squares(4, s) for s in single_cell_shards(4)]
        assert len(counts) == 16
        assert sum(counts) == 7040

    def test_invalid_prefixes_rejected(self):
        with pytest.raises(ValueError, match="repeats"):
            count_squares(4, Shard((3, 3)))
        with pytest.raises(ValueError, match="outside"):
            count_squares(4, Shard((17,)))
        with pytest.raises(ValueError, match="longer"):
            count_squares(3, Shard((1, 2, 3)))

    def test_shard_for_validates_cells(self):
        assert shard_for(4, [0, 1], [3, 9]).prefix == (3, 9)
        with pytest.raises(ValueError, match="leading trial cells"):
            shard_for(4, [0, 2], [3, 9])

    def test_parallel_merge_matches_serial(self):
        shards = [Shard((v,)) for v in (2, 3)]
        serial = [sq.cells for s in shards for sq in iter_squares(4, s)]
        parallel = [
            sq.cells
            for sq in enumerate_shards_parallel(4, shards, max_workers=2)
        ]
        assert parallel == serial


class TestOrderFive:
    def test_leading_shard_squares_are_magic_and_round_trip(self):
        system = build_system(5)
        sample = list(islice(_iter_generic(5, (13,)), 60))
        assert len(sample) == 60
        for cells in sample:
            assert _is_magic_grid(cells, 5)
            basis = [cells[c] for c in system.free_cells]
            assert tuple(int(v) for v in system.solve(basis)) == cells

    def test_deep_prefix_matches_filtered_shallow(self):
        tcells = trial_cells(5)
        shallow = list(islice(_iter_generic(5, (13,)), 40))
        first = shallow[0]
        deep_prefix = tuple(first[c] for c in tcells[:4])
        deep = list(islice(_iter_generic(5, deep_prefix), 40))
        expect = [
            cells
            for cells in shallow
            if tuple(cells[c] for c in tcells[:4]) == deep_prefix
        ]
        assert deep[: len(expect)] == expect
