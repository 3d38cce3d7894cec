"""Dudeney/Trigg classification of order-4 normal magic squares.

The values 1..16 split into 8 complement pairs summing to 17.  Drawing a
link between the two grid positions of each pair gives a diagram whose
orientation-independent shape is the square's Dudeney type; exactly 12
shapes occur across the 7040 squares.  The classifier canonicalizes that
pair geometry (minimum encoding over the 8 grid symmetries), discovers
the 12 classes from a full catalog, and names them:

* Trigg letters follow class population: the three 384-classes are A,
  {768, 768, 2432} are B, the four 448-classes are C, the two 64-classes
  are D.
* Dudeney numerals I..XII order population groups as above; within a
  same-population group, classes are sorted by their smallest member's
  canonical text encoding.  Downstream results do not depend on the
  within-group order.
* Class VI (the 2432 class) splits VI''/VI' by whether some broken
  diagonal sums to 34.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .constraints import dependent_cells_order4, validate_grid
from .squares import (
    Square,
    broken_diagonal_sums,
    complement_pairs,
    encode_square,
    grid_symmetries,
    magic_constant,
)

PairingSignature = tuple[tuple[int, int], ...]

ROMAN = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII")

TRIGG_OF_DUDENEY: dict[str, str] = (
    {r: "A" for r in ROMAN[:3]}
    | {r: "B" for r in ROMAN[3:6]}
    | {r: "C" for r in ROMAN[6:10]}
    | {r: "D" for r in ROMAN[10:]}
)

# Class populations as first counted by Dudeney (1917).
DUDENEY_POPULATIONS = (384, 384, 384, 768, 768, 2432, 448, 448, 448, 448, 64, 64)
TRIGG_POPULATIONS = {"A": 1152, "B": 3968, "C": 1792, "D": 128}

VI_SPLIT_PLAIN = "VI'"
VI_SPLIT_BROKEN = "VI''"

_FREE_CELLS = (0, 1, 2, 4, 5, 6, 8)


@dataclass(frozen=True)
class ClassLabel:
    """Dudeney numeral, Trigg letter, and the VI sub-split when it applies."""

    dudeney: str
    trigg: str
    vi_split: str | None = None


def _symmetry_position_maps(n: int) -> tuple[tuple[int, ...], ...]:
    # img[i] = where cell i lands under the symmetry.
    maps = []
    for t in grid_symmetries(n):
        cm = t.cell_map()
        img = [0] * (n * n)
        for target, source in enumerate(cm):
            img[source] = target
        maps.append(tuple(img))
    return tuple(maps)


_SYM_MAPS4 = _symmetry_position_maps(4)


def _index_pairs(square: Square) -> tuple[tuple[int, int], ...]:
    n = square.order
    pairs = []
    for pair in complement_pairs(square):
        (r1, c1), (r2, c2) = sorted(pair)
        pairs.append((r1 * n + c1, r2 * n + c2))
    return tuple(pairs)


def signature(square: Square) -> PairingSignature:
    """Canonical complement-pair geometry, invariant under the 8 grid symmetries."""
    if square.order != 4:
        raise ValueError(f"signatures are defined for order 4, got {square.order}")
    pairs = _index_pairs(square)
    best: PairingSignature | None = None
    for img in _SYM_MAPS4:
        moved = []
        for a, b in pairs:
            ia, ib = img[a], img[b]
            moved.append((ia, ib) if ia < ib else (ib, ia))
        moved.sort()
        cand = tuple(moved)
        if best is None or cand < best:
            best = cand
    assert best is not None
    return best


def count_magic_broken_diagonals(square: Square) -> int:
    """How many of the square's broken diagonals sum to the magic constant."""
    mu = magic_constant(square.order)
    return sum(1 for s in broken_diagonal_sums(square) if s == mu)


def is_pandiagonal(square: Square) -> bool:
    return count_magic_broken_diagonals(square) == 2 * (square.order - 1)


@dataclass(frozen=True)
class SignatureClass:
    signature: PairingSignature
    members: tuple[Square, ...]

    @property
    def population(self) -> int:
        return len(self.members)

    @property
    def min_encoding(self) -> str:
        return min(encode_square(sq) for sq in self.members)


def discover_classes(catalog: Iterable[Square]) -> tuple[SignatureClass, ...]:
    """Partition a complete order-4 catalog by signature.

    Returns the classes sorted by their smallest member encoding.  Raises
    if the catalog is not the full census (7040 squares, 12 classes).
    """
    buckets: dict[PairingSignature, list[Square]] = {}
    total = 0
    for sq in catalog:
        buckets.setdefault(signature(sq), []).append(sq)
        total += 1
    if total != 7040:
        raise ValueError(f"incomplete catalog: {total} squares, expected 7040")
    if len(buckets) != 12:
        raise ValueError(f"expected 12 signature classes, found {len(buckets)}")
    classes = [SignatureClass(sig, tuple(members)) for sig, members in buckets.items()]
    classes.sort(key=lambda c: c.min_encoding)
    return tuple(classes)


def assign_labels(
    classes: Sequence[SignatureClass],
) -> dict[PairingSignature, ClassLabel]:
    """Name the 12 discovered classes (population groups, then smallest member)."""
    observed = sorted(c.population for c in classes)
    if observed != sorted(DUDENEY_POPULATIONS):
        raise ValueError(
            f"population multiset {observed} does not match the Dudeney census"
        )
    by_pop: dict[int, list[SignatureClass]] = {}
    for cls in classes:
        by_pop.setdefault(cls.population, []).append(cls)
    for group in by_pop.values():
        group.sort(key=lambda c: c.min_encoding)

    ordered = by_pop[384] + by_pop[768] + by_pop[2432] + by_pop[448] + by_pop[64]
    labels: dict[PairingSignature, ClassLabel] = {}
    for numeral, cls in zip(ROMAN, ordered):
        labels[cls.signature] = ClassLabel(numeral, TRIGG_OF_DUDENEY[numeral])
    return labels


def split_type_vi(
    square: Square, labels: Mapping[PairingSignature, ClassLabel]
) -> str:
    """VI'' iff some broken diagonal sums to 34; only valid for class VI."""
    label = labels[signature(square)]
    if label.dudeney != "VI":
        raise ValueError(f"square is class {label.dudeney}, not VI")
    return VI_SPLIT_BROKEN if count_magic_broken_diagonals(square) else VI_SPLIT_PLAIN


class DudeneyCensus:
    """Discovered classes plus labels for the complete order-4 catalog."""

    def __init__(
        self,
        classes: tuple[SignatureClass, ...],
        labels: dict[PairingSignature, ClassLabel],
    ) -> None:
        self.classes = classes
        self.labels = labels
        self.class_by_numeral = {
            labels[c.signature].dudeney: c for c in classes
        }

    @classmethod
    def from_catalog(cls, catalog: Iterable[Square]) -> "DudeneyCensus":
        classes = discover_classes(catalog)
        return cls(classes, assign_labels(classes))

    def label_of(self, square: Square) -> ClassLabel:
        """Full-path classification (signature lookup, VI split included)."""
        label = self.labels[signature(square)]
        if label.dudeney != "VI":
            return label
        split = (
            VI_SPLIT_BROKEN
            if count_magic_broken_diagonals(square)
            else VI_SPLIT_PLAIN
        )
        return ClassLabel(label.dudeney, label.trigg, split)

    def population(self, numeral: str) -> int:
        return self.class_by_numeral[numeral].population

    def trigg_members(self, letter: str) -> tuple[Square, ...]:
        members: list[Square] = []
        for cls in self.classes:
            if self.labels[cls.signature].trigg == letter:
                members.extend(cls.members)
        return tuple(members)

    def trigg_populations(self) -> dict[str, int]:
        pops: dict[str, int] = {}
        for cls in self.classes:
            letter = self.labels[cls.signature].trigg
            pops[letter] = pops.get(letter, 0) + cls.population
        return pops


FastKey = tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]]


class FastClassifier:
    """Basis-only classification via complement pairs among the free cells.

    The free cells (a, b, c, e, f, g, i) hold 7 of the 16 values; whenever
    both members of a complement pair land on free cells, the pair's
    position geometry is visible without deriving the dependent cells, and
    each remaining free cell still reveals which complement pair its value
    belongs to.  A lookup table from that partial view to the class label
    is built once from a classified census; keys observed with more than
    one label (about 1% of squares) are ambiguous and fall back to the
    full signature path.
    """

    def __init__(
        self,
        census: DudeneyCensus,
        table: dict[FastKey, ClassLabel | None],
    ) -> None:
        self._census = census
        self._table = table
        self.fallbacks = 0

    @classmethod
    def from_census(cls, census: DudeneyCensus) -> "FastClassifier":
        table: dict[FastKey, ClassLabel | None] = {}
        for sig_class in census.classes:
            label = census.labels[sig_class.signature]
            for sq in sig_class.members:
                key = cls._basis_key([sq.cells[c] for c in _FREE_CELLS])
                prior = table.get(key, label)
                table[key] = label if prior == label else None
        return cls(census, table)

    @property
    def ambiguous_keys(self) -> int:
        return sum(1 for v in self._table.values() if v is None)

    @staticmethod
    def _basis_key(basis: Sequence[int]) -> FastKey:
        where = {v: _FREE_CELLS[i] for i, v in enumerate(basis)}
        pairs = []
        unpaired = []
        for v, pos in where.items():
            mate = where.get(17 - v)
            if mate is None:
                unpaired.append((pos, min(v, 17 - v)))
            elif v < 17 - v:
                pairs.append((pos, mate) if pos < mate else (mate, pos))
        pairs.sort()
        unpaired.sort()
        return tuple(pairs), tuple(unpaired)

    def classify(self, basis: Sequence[int]) -> ClassLabel:
        """Label for the square defined by the 7-value basis.

        The basis must define a valid normal magic square; the dependent
        cells are derived only when the partial scan is ambiguous or the
        class needs the VI broken-diagonal split.
        """
        if len(basis) != 7:
            raise ValueError(f"expected 7 basis values, got {len(basis)}")
        label = self._table.get(self._basis_key(basis))
        if label is not None and label.dudeney != "VI":
            return label
        grid = dependent_cells_order4(tuple(basis))
        check = validate_grid(grid)
        if not check.ok:
            raise ValueError(f"basis does not define a magic square: {check.reason}")
        square = Square(4, grid)
        if label is None:
            self.fallbacks += 1
            return self._census.label_of(square)
        split = (
            VI_SPLIT_BROKEN
            if count_magic_broken_diagonals(square)
            else VI_SPLIT_PLAIN
        )
        return ClassLabel(label.dudeney, label.trigg, split)
