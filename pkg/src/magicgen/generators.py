"""Orbit decomposition of square classes and the generator census.

Two decompositions are computed and reported side by side:

* decompose(): orbits of the class's own symmetry group (the triples
  preserving the class as a set).  Self-contained and self-certifying,
  but finer than the published census.

* symmetric_closure_partition(): equivalence classes of "some candidate
  triple maps one square to the other", i.e. orbits of the full
  (row perm, col perm, transpose) universe restricted to the class.
  Peeling a class this way -- expand every triple image of the smallest
  unassigned square, delete the magic ones, repeat -- reproduces the
  published generator counts exactly (95 for order 4, with Trigg class
  histograms A: 3x384, B: 12x192 + 4x96 + 10x64 + 20x32, C: 12x64 +
  32x32, D: 2x64), so the census headlines it.

Both are OrbitPartitions that pass verify_partition; the closure view's
generators are pairwise non-symmetric even under the full universe.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .classifier import DudeneyCensus
from .groups import (
    Orbit,
    TransformationGroup,
    _universe_maps,
    orbit,
    symmetry_group,
)
from .squares import Square, Transformation, _is_magic_grid, encode_square

# Published census targets for the order-4 space: orbit-size histogram per
# Trigg class under symmetric closure, and the generator total.
REFERENCE_HISTOGRAMS: dict[str, dict[int, int]] = {
    "A": {384: 3},
    "B": {192: 12, 96: 4, 64: 10, 32: 20},
    "C": {64: 12, 32: 32},
    "D": {64: 2},
}
REFERENCE_TOTAL_GENERATORS = 95


@dataclass(frozen=True)
class OrbitPartition:
    """Disjoint orbits covering a subject set, one generator per orbit."""

    subject_name: str
    method: str  # "group" or "closure"
    orbits: tuple[Orbit, ...]

    @property
    def size_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(o.size for o in self.orbits).items(), reverse=True))

    @property
    def total(self) -> int:
        return sum(o.size for o in self.orbits)

    def generators(self) -> tuple[Square, ...]:
        return tuple(sorted((o.generator for o in self.orbits), key=encode_square))


def decompose(
    subject: Iterable[Square],
    group: TransformationGroup,
    subject_name: str = "",
) -> OrbitPartition:
    """Peel the subject into orbits of its symmetry group.

    Repeatedly takes the unassigned square with the smallest encoding,
    expands its group orbit, and removes it; the orbit count does not
    depend on the peeling order (orbits are equivalence classes).
    """
    items = sorted(((encode_square(sq), sq) for sq in subject), key=lambda e: e[0])
    for _, sq in items:
        if sq.cells not in group.subject:
            raise ValueError("subject square missing from the group's subject set")
    if len(items) != len(group.subject):
        raise ValueError(
            f"subject has {len(items)} squares, group was built over {len(group.subject)}"
        )
    orbits: list[Orbit] = []
    assigned: set[tuple[int, ...]] = set()
    for enc, sq in items:
        if sq.cells in assigned:
            continue
        orb = orbit(sq, group)
        if orb.generator.cells != sq.cells:
            raise AssertionError("peeled square is not its orbit's minimum")
        orbits.append(orb)
        assigned.update(m.cells for m in orb.members)
    if len(assigned) != len(items):
        raise ValueError("group orbits left part of the subject uncovered")
    return OrbitPartition(subject_name, "group", tuple(orbits))


def symmetric_closure_partition(
    subject: Iterable[Square],
    subject_name: str = "",
) -> OrbitPartition:
    """Partition the subject by full-universe reachability.

    Each part is {images of one square under all candidate triples}
    intersected with the subject; a magic image escaping the subject
    means the subject is not closed under symmetry and raises.
    """
    items = sorted(((encode_square(sq), sq) for sq in subject), key=lambda e: e[0])
    if not items:
        raise ValueError("subject is empty")
    n = items[0][1].order
    index = {sq.cells: sq for _, sq in items}
    maps = [cmap for _, cmap in _universe_maps(n)]
    orbits: list[Orbit] = []
    assigned: set[tuple[int, ...]] = set()
    for enc, sq in items:
        if sq.cells in assigned:
            continue
        cells = sq.cells
        reach = {tuple(cells[i] for i in cmap) for cmap in maps}
        members = []
        for r in reach:
            hit = index.get(r)
            if hit is not None:
                members.append(hit)
            elif _is_magic_grid(r, n):
                raise ValueError(
                    "subject is not closed under symmetric reachability: "
                    f"{' '.join(map(str, r))} is magic but outside the subject"
                )
        orb = Orbit(frozenset(members), sq)
        orbits.append(orb)
        assigned.update(m.cells for m in orb.members)
    return OrbitPartition(subject_name, "closure", tuple(orbits))


@dataclass(frozen=True)
class PartitionVerdict:
    ok: bool
    problems: tuple[str, ...] = ()


def verify_partition(
    partition: OrbitPartition,
    subject: Iterable[Square],
    transformations: Sequence[Transformation] | None = None,
    pair_sample_cap: int = 150,
) -> PartitionVerdict:
    """Independently re-check a partition.

    Verifies disjointness, exact coverage of the subject, that each
    generator is its orbit's encoding minimum, and that sampled generator
    pairs are non-symmetric under `transformations` (the full candidate
    universe when omitted).  Returns a verdict instead of raising.
    """
    problems: list[str] = []
    subject_cells = {sq.cells for sq in subject}
    seen: set[tuple[int, ...]] = set()
    dup = 0
    for orb in partition.orbits:
        for m in orb.members:
            if m.cells in seen:
                dup += 1
            seen.add(m.cells)
    if dup:
        problems.append(f"{dup} squares appear in more than one orbit")
    if seen != subject_cells:
        missing = len(subject_cells - seen)
        extra = len(seen - subject_cells)
        problems.append(f"coverage mismatch: {missing} missing, {extra} extra")
    for orb in partition.orbits:
        lo = min(encode_square(m) for m in orb.members)
        if encode_square(orb.generator) != lo:
            problems.append(
                f"generator {encode_square(orb.generator)} is not its orbit minimum"
            )
            break

    gens = partition.generators()
    if len(gens) > 1:
        if transformations is None:
            n = gens[0].order
            maps = [cmap for _, cmap in _universe_maps(n)]
        else:
            maps = [t.cell_map() for t in transformations]
        pairs = [
            (i, j) for i in range(len(gens)) for j in range(i + 1, len(gens))
        ]
        if len(pairs) > pair_sample_cap:
            stride = len(pairs) // pair_sample_cap + 1
            pairs = pairs[::stride]
        for i, j in pairs:
            src = gens[i].cells
            target = gens[j].cells
            if any(tuple(src[k] for k in cmap) == target for cmap in maps):
                problems.append(
                    f"generators {i} and {j} are symmetric to each other"
                )
                break
    return PartitionVerdict(not problems, tuple(problems))


@dataclass(frozen=True)
class Discrepancy:
    """A difference between the computed census and the published targets."""

    subject: str
    field: str
    expected: str
    computed: str

    def as_dict(self) -> dict[str, str]:
        return {
            "subject": self.subject,
            "field": self.field,
            "expected": self.expected,
            "computed": self.computed,
        }


@dataclass(frozen=True)
class ClassCensus:
    """Everything computed for one Trigg class."""

    letter: str
    population: int
    group: TransformationGroup
    group_partition: OrbitPartition
    closure_partition: OrbitPartition

    @property
    def group_order(self) -> int:
        return len(self.group)

    @property
    def pair_view_order(self) -> int:
        return len(self.group.pair_view())

    def subgroup_split(self) -> tuple[tuple[str, int, int], ...]:
        """Named subsets per closure orbit size, e.g. B-1..B-4 (size desc)."""
        hist = self.closure_partition.size_histogram
        if len(hist) <= 1:
            return ()
        return tuple(
            (f"{self.letter}-{rank}", size, count)
            for rank, (size, count) in enumerate(hist.items(), start=1)
        )


@dataclass(frozen=True)
class GeneratorCensus:
    classes: tuple[ClassCensus, ...]
    discrepancies: tuple[Discrepancy, ...]

    @property
    def total_generators(self) -> int:
        return sum(len(c.closure_partition.orbits) for c in self.classes)

    def by_letter(self, letter: str) -> ClassCensus:
        for c in self.classes:
            if c.letter == letter:
                return c
        raise KeyError(letter)


def census(dudeney: DudeneyCensus) -> GeneratorCensus:
    """Per-Trigg-class groups and decompositions for the full order-4 census."""
    classes: list[ClassCensus] = []
    discrepancies: list[Discrepancy] = []
    for letter in "ABCD":
        members = dudeney.trigg_members(letter)
        name = f"trigg_{letter}"
        group = symmetry_group(members)
        group_part = decompose(members, group, name)
        closure_part = symmetric_closure_partition(members, name)
        for part in (group_part, closure_part):
            if part.total != len(members):
                raise ValueError(
                    f"{name} {part.method} partition covers {part.total} "
                    f"of {len(members)} squares"
                )
        cls = ClassCensus(letter, len(members), group, group_part, closure_part)
        expected = REFERENCE_HISTOGRAMS[letter]
        got = closure_part.size_histogram
        if got != expected:
            discrepancies.append(
                Discrepancy(name, "orbit_histogram", repr(expected), repr(got))
            )
        classes.append(cls)
    result = GeneratorCensus(tuple(classes), tuple(discrepancies))
    if result.total_generators != REFERENCE_TOTAL_GENERATORS and not discrepancies:
        raise AssertionError("totals disagree but no histogram discrepancy recorded")
    return result
