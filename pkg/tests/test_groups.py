from __future__ import annotations

import random

import pytest

from magicgen.enumerator import iter_squares
from magicgen.groups import (
    are_symmetric,
    candidate_universe,
    orbit,
    symmetry_group,
)
from magicgen.squares import (
    Square,
    Transformation,
    encode_square,
    grid_symmetries,
    identity_transformation,
    is_normal_magic,
)


@pytest.fixture(scope="module")
def all3():
    return list(iter_squares(3))


@pytest.fixture(scope="module")
def group3(all3):
    return symmetry_group(all3)


class TestUniverse:
    def test_sizes(self):
        assert len(candidate_universe(3)) == 72
        assert len(candidate_universe(4)) == 1152

    def test_contains_identity(self):
        assert identity_transformation(4) in candidate_universe(4)

    def test_too_large_rejected(self):
        with pytest.raises(ValueError, match="not supported"):
            candidate_universe(6)

    def test_no_duplicates(self):
        u = candidate_universe(3)
        assert len(set(u)) == len(u)


class TestSymmetryGroup:
    def test_order3_group_is_dihedral(self, all3, group3):
        assert len(group3) == 8
        assert set(group3.members) == set(grid_symmetries(3))

    def test_order3_action_is_transitive(self, all3, group3):
        orb = orbit(all3[0], group3)
        assert orb.size == 8
        assert {m.cells for m in orb.members} == {sq.cells for sq in all3}

    def test_group_axioms_hold(self, group3):
        members = set(group3.members)
        for t in members:
            assert t.inverse() in members
            for s in members:
                assert t.after(s) in members

    def test_every_member_preserves_the_set(self, all3, group3):
        index = {sq.cells for sq in all3}
        for t in group3.members:
            for sq in all3:
                out = t.apply(sq)
                assert out.cells in index
                assert is_normal_magic(out)

    def test_single_square_with_transpose_closure(self, lo_shu):
        transpose = Transformation((0, 1, 2), (0, 1, 2), True)
        pair_set = [lo_shu, transpose.apply(lo_shu)]
        group = symmetry_group(pair_set)
        assert identity_transformation(3) in group.members
        assert transpose in group.members

    def test_empty_and_mixed_sets_rejected(self, lo_shu, durer):
        with pytest.raises(ValueError, match="empty"):
            symmetry_group([])
        with pytest.raises(ValueError, match="mixes orders"):
            symmetry_group([lo_shu, durer])

    def test_trigg_class_group_orders(self, gencensus4):
        # The triples preserving each whole Trigg class; the published
        # per-generator "group orders" are closure-orbit sizes, not these.
        orders = {c.letter: c.group_order for c in gencensus4.classes}
        assert orders == {"A": 192, "B": 32, "C": 32, "D": 32}
        pair_views = {c.letter: c.pair_view_order for c in gencensus4.classes}
        assert pair_views == {"A": 96, "B": 16, "C": 16, "D": 16}

    def test_pair_view_members_qualify_both_ways(self, gencensus4):
        cls = gencensus4.by_letter("A")
        members = set(cls.group.members)
        for rp, cp in cls.group.pair_view():
            assert Transformation(rp, cp, False) in members
            assert Transformation(rp, cp, True) in members


class TestAreSymmetric:
    def test_reflexive(self, lo_shu):
        assert are_symmetric(lo_shu, lo_shu)

    def test_lo_shu_vs_rotation(self, lo_shu):
        rot = grid_symmetries(3)[1].apply(lo_shu)
        assert are_symmetric(lo_shu, rot)

    def test_symmetric_on_samples(self, catalog4):
        rng = random.Random(53)
        squares = rng.sample(catalog4, 6)
        for a in squares:
            for b in squares:
                assert are_symmetric(a, b) == are_symmetric(b, a)

    def test_transitive_within_closure_orbits(self, gencensus4):
        # All members of one reachability class are pairwise symmetric.
        orb = gencensus4.by_letter("D").closure_partition.orbits[0]
        sample = sorted(orb.members, key=encode_square)[:5]
        for a in sample:
            for b in sample:
                assert are_symmetric(a, b)

    def test_distinct_type_a_generators_not_symmetric(self, gencensus4):
        gens = gencensus4.by_letter("A").closure_partition.generators()
        assert len(gens) == 3
        for i in range(3):
            for j in range(i + 1, 3):
                assert not are_symmetric(gens[i], gens[j])

    def test_order_mismatch(self, lo_shu, durer):
        with pytest.raises(ValueError, match="different orders"):
            are_symmetric(lo_shu, durer)


class TestOrbit:
    def test_orbit_size_divides_group_order(self, all3, group3):
        orb = orbit(all3[0], group3)
        assert len(group3) % orb.size == 0

    def test_orbit_is_stable_under_group_members(self, gencensus4):
        cls = gencensus4.by_letter("D")
        orb = cls.group_partition.orbits[0]
        members = {m.cells for m in orb.members}
        for t in list(cls.group.members)[:8]:
            for m in list(orb.members)[:4]:
                assert t.apply(m).cells in members

    def test_generator_is_lexicographic_minimum(self, all3, group3):
        orb = orbit(all3[-1], group3)
        assert encode_square(orb.generator) == min(
            encode_square(m) for m in orb.members
        )

    def test_outside_subject_rejected(self, group3, durer, lo_shu):
        bad = Square.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        with pytest.raises(ValueError, match="outside"):
            orbit(bad, group3)

    def test_type_a_group_orbits_have_size_192(self, gencensus4):
        # The class group (order 192) acts freely on Trigg A: six orbits of
        # 192; fusing symmetric orbit pairs gives the published 3 x 384.
        cls = gencensus4.by_letter("A")
        assert [o.size for o in cls.group_partition.orbits] == [192] * 6
        assert [o.size for o in cls.closure_partition.orbits] == [384] * 3
