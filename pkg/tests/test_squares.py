from __future__ import annotations

import random

import pytest

from magicgen.squares import (
    Square,
    Transformation,
    broken_diagonal_sums,
    complement_pairs,
    determinant,
    encode_square,
    grid_symmetries,
    identity_transformation,
    is_normal_magic,
    magic_constant,
    parse_square,
)


def cofactor_determinant(rows: list[list[int]]) -> int:
    """Independent oracle: textbook cofactor expansion along the first row."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * cofactor_determinant(minor)
    return total


def random_square(rng: random.Random, n: int) -> Square:
    values = list(range(1, n * n + 1))
    rng.shuffle(values)
    return Square(n, tuple(values))


def random_transformation(rng: random.Random, n: int) -> Transformation:
    rp = list(range(n))
    cp = list(range(n))
    rng.shuffle(rp)
    rng.shuffle(cp)
    return Transformation(tuple(rp), tuple(cp), rng.random() < 0.5)


@pytest.mark.parametrize("n,expected", [(4, 34), (3, 15), (5, 65)])
def test_magic_constant(n, expected):
    assert magic_constant(n) == expected


def test_magic_constant_rejects_nonpositive():
    with pytest.raises(ValueError):
        magic_constant(0)


class TestSquareValidation:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="outside the range"):
            Square(3, (0, 2, 3, 4, 5, 6, 7, 8, 9))
        with pytest.raises(ValueError, match="outside the range"):
            Square(3, (1, 2, 3, 4, 5, 6, 7, 8, 10))

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError, match="repeats"):
            Square(3, (1, 2, 3, 4, 5, 6, 7, 8, 8))

    def test_rejects_wrong_count(self):
        with pytest.raises(ValueError, match="expected 9 cells"):
            Square(3, tuple(range(1, 9)))

    def test_rejects_small_order(self):
        with pytest.raises(ValueError, match="order"):
            Square(2, (1, 2, 3, 4))


def test_is_normal_magic(lo_shu, durer):
    assert is_normal_magic(lo_shu)
    assert is_normal_magic(durer)
    assert not is_normal_magic(Square(4, tuple(range(1, 17))))


def test_magic_square_wrapper(lo_shu, durer):
    from magicgen.squares import MagicSquare

    ms = MagicSquare.from_square(durer)
    assert ms.mu == 34
    assert MagicSquare.from_square(lo_shu).mu == 15
    with pytest.raises(ValueError, match="not magic"):
        MagicSquare.from_square(Square(4, tuple(range(1, 17))))
    with pytest.raises(ValueError, match="magic constant"):
        MagicSquare(durer, 33)


def test_parse_round_trip(durer):
    line = encode_square(durer)
    assert line == "16 3 2 13 5 10 11 8 9 6 7 12 4 15 14 1"
    assert parse_square(line) == durer
    assert parse_square(line, order=4) == durer


def test_parse_errors_are_distinct():
    with pytest.raises(ValueError, match="expected 16 values"):
        parse_square("1 2 3", order=4)
    with pytest.raises(ValueError, match="non-integer token"):
        parse_square("1 2 3 x 5 6 7 8 9", order=3)
    with pytest.raises(ValueError, match="outside the range"):
        parse_square("0 2 3 4 5 6 7 8 9", order=3)
    with pytest.raises(ValueError, match="repeats"):
        parse_square("1 1 3 4 5 6 7 8 9", order=3)


class TestBrokenDiagonals:
    def test_durer_sums(self, durer):
        sums = broken_diagonal_sums(durer)
        assert sums == (30, 34, 38, 46, 34, 22)
        assert sum(1 for s in sums if s == 34) == 2

    def test_lo_shu_sums(self, lo_shu):
        sums = broken_diagonal_sums(lo_shu)
        assert len(sums) == 4
        assert sums == (24, 6, 12, 18)
        assert all(s != 15 for s in sums)

    def test_sum_identity_on_random_squares(self):
        # broken sums + the two main traces account for every cell twice.
        rng = random.Random(7)
        for n in (3, 4, 5):
            for _ in range(50):
                sq = random_square(rng, n)
                broken = broken_diagonal_sums(sq)
                assert len(broken) == 2 * (n - 1)
                major = sum(sq.at(i, i) for i in range(n))
                minor = sum(sq.at(i, n - 1 - i) for i in range(n))
                assert sum(broken) + major + minor == 2 * sum(sq.cells)


class TestComplementPairs:
    def test_durer_known_pairs(self, durer):
        pairs = complement_pairs(durer)
        assert frozenset({(0, 0), (3, 3)}) in pairs  # 16 and 1
        assert frozenset({(0, 1), (3, 2)}) in pairs  # 3 and 14

    def test_perfect_matching(self, durer):
        pairs = complement_pairs(durer)
        assert len(pairs) == 8
        covered = {pos for pair in pairs for pos in pair}
        assert len(covered) == 16

    def test_odd_order_rejected(self, lo_shu):
        with pytest.raises(ValueError, match="even order"):
            complement_pairs(lo_shu)


class TestDeterminant:
    def test_lo_shu(self, lo_shu):
        assert cofactor_determinant([list(r) for r in lo_shu.rows()]) == 360
        assert determinant(lo_shu) == 360

    def test_durer(self, durer):
        assert cofactor_determinant([list(r) for r in durer.rows()]) == 0
        assert determinant(durer) == 0

    def test_matches_cofactor_oracle_on_random_squares(self):
        rng = random.Random(11)
        for n in (3, 4):
            for _ in range(25):
                sq = random_square(rng, n)
                assert determinant(sq) == cofactor_determinant(
                    [list(r) for r in sq.rows()]
                )

    def test_row_swap_negates(self):
        rng = random.Random(13)
        for _ in range(20):
            sq = random_square(rng, 4)
            swapped = Transformation((1, 0, 2, 3), (0, 1, 2, 3), False).apply(sq)
            assert determinant(swapped) == -determinant(sq)

    def test_transpose_invariant(self):
        rng = random.Random(17)
        for _ in range(20):
            sq = random_square(rng, 4)
            t = Transformation((0, 1, 2, 3), (0, 1, 2, 3), True)
            assert determinant(t.apply(sq)) == determinant(sq)


class TestTransformation:
    def test_identity(self, durer):
        assert identity_transformation(4).apply(durer) == durer

    def test_row_swap_example(self):
        # Swapping the second and third rows of the 1..9 grid.
        sq = Square.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        t = Transformation((0, 2, 1), (0, 1, 2), False)
        assert t.apply(sq) == Square.from_rows([[1, 2, 3], [7, 8, 9], [4, 5, 6]])

    def test_column_permutation(self):
        sq = Square.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        t = Transformation((0, 1, 2), (0, 2, 1), False)
        assert t.apply(sq) == Square.from_rows([[1, 3, 2], [4, 6, 5], [7, 9, 8]])

    def test_inverse_round_trip(self):
        rng = random.Random(23)
        for _ in range(50):
            sq = random_square(rng, 4)
            t = random_transformation(rng, 4)
            assert t.inverse().apply(t.apply(sq)) == sq

    def test_composition_matches_sequential_application(self):
        rng = random.Random(29)
        for _ in range(100):
            sq = random_square(rng, 4)
            t1 = random_transformation(rng, 4)
            t2 = random_transformation(rng, 4)
            assert t2.after(t1).apply(sq) == t2.apply(t1.apply(sq))

    def test_composition_associative(self):
        rng = random.Random(31)
        for _ in range(50):
            t1 = random_transformation(rng, 4)
            t2 = random_transformation(rng, 4)
            t3 = random_transformation(rng, 4)
            assert t3.after(t2).after(t1) == t3.after(t2.after(t1))

    def test_preserves_value_multiset(self):
        rng = random.Random(37)
        for _ in range(20):
            sq = random_square(rng, 5)
            t = random_transformation(rng, 5)
            assert sorted(t.apply(sq).cells) == sorted(sq.cells)

    def test_apply_does_not_promise_magicness(self, durer):
        # Row and column sums survive any row/column permutation, but the
        # diagonals generally do not.
        t = Transformation((1, 0, 2, 3), (0, 1, 2, 3), False)
        out = t.apply(durer)
        assert sorted(out.cells) == sorted(durer.cells)
        assert not is_normal_magic(out)

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError, match="not a permutation"):
            Transformation((0, 0, 1), (0, 1, 2), False)

    def test_order_mismatch(self, durer):
        with pytest.raises(ValueError, match="order"):
            identity_transformation(3).apply(durer)


def test_grid_symmetries_form_dihedral_group():
    syms = grid_symmetries(4)
    assert len(syms) == 8
    assert len(set(syms)) == 8
    table = set(syms)
    for a in syms:
        assert a.inverse() in table
        for b in syms:
            assert a.after(b) in table


def test_grid_symmetries_rotate_as_expected():
    sq = Square.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    rot90 = grid_symmetries(3)[1]
    assert rot90.apply(sq) == Square.from_rows([[7, 4, 1], [8, 5, 2], [9, 6, 3]])
