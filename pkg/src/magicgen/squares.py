"""Normal magic squares and the row/column/transpose maps that act on them.

A normal magic square of order n holds each integer 1..n^2 exactly once,
with every row, every column, and both main diagonals summing to the
magic constant n(n^2+1)/2.  Cells are indexed 0-based in reading order:
cell (r, c) lives at index r*n + c.

The canonical text encoding of a square is its n^2 cell values, row-major,
space-separated on one line.  That string is the interchange format for
every file this package writes, and string comparison of encodings is the
canonical ordering used wherever a "lexicographically smallest" square is
required.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


def magic_constant(n: int) -> int:
    """Common line sum of a normal order-n magic square: n(n^2+1)/2."""
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    return n * (n * n + 1) // 2


@dataclass(frozen=True, slots=True)
class Square:
    """An order-n grid whose cells are a permutation of 1..n^2."""

    order: int
    cells: tuple[int, ...]

    def __post_init__(self) -> None:
        n = self.order
        if n < 3:
            raise ValueError(f"square order must be >= 3, got {n}")
        n2 = n * n
        if len(self.cells) != n2:
            raise ValueError(
                f"expected {n2} cells for order {n}, got {len(self.cells)}"
            )
        seen = 0
        for idx, v in enumerate(self.cells):
            if not 1 <= v <= n2:
                raise ValueError(
                    f"cell {idx} holds {v}, outside the range 1..{n2}"
                )
            bit = 1 << v
            if seen & bit:
                raise ValueError(f"cell {idx} repeats the value {v}")
            seen |= bit

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "Square":
        grid = [list(r) for r in rows]
        cells = tuple(v for row in grid for v in row)
        return cls(len(grid), cells)

    def at(self, r: int, c: int) -> int:
        return self.cells[r * self.order + c]

    def row(self, r: int) -> tuple[int, ...]:
        n = self.order
        return self.cells[r * n : (r + 1) * n]

    def rows(self) -> Iterator[tuple[int, ...]]:
        for r in range(self.order):
            yield self.row(r)


@dataclass(frozen=True, slots=True)
class MagicSquare:
    """A square certified magic, carrying its magic constant."""

    square: Square
    mu: int

    def __post_init__(self) -> None:
        if self.mu != magic_constant(self.square.order):
            raise ValueError(
                f"magic constant {self.mu} does not match order {self.square.order}"
            )
        if not is_normal_magic(self.square):
            raise ValueError("square is not magic: some line misses the constant")

    @classmethod
    def from_square(cls, square: Square) -> "MagicSquare":
        return cls(square, magic_constant(square.order))


def encode_square(square: Square) -> str:
    """Canonical one-line text encoding: cell values, row-major."""
    return " ".join(str(v) for v in square.cells)


def parse_square(line: str, order: int | None = None) -> Square:
    """Parse the canonical encoding back into a Square.

    Rejects, with distinct messages: a token count that is not n^2,
    non-integer tokens, out-of-range values, and duplicates.
    """
    tokens = line.split()
    if order is not None:
        expected = order * order
        if len(tokens) != expected:
            raise ValueError(
                f"expected {expected} values for order {order}, got {len(tokens)}"
            )
        n = order
    else:
        n = int(round(len(tokens) ** 0.5))
        if n * n != len(tokens) or n < 3:
            raise ValueError(
                f"token count {len(tokens)} is not the square of an order >= 3"
            )
    try:
        cells = tuple(int(t) for t in tokens)
    except ValueError:
        bad = next(t for t in tokens if not _is_int(t))
        raise ValueError(f"non-integer token {bad!r}") from None
    return Square(n, cells)


def _is_int(token: str) -> bool:
    try:
        int(token)
        return True
    except ValueError:
        return False


# ---------------------------------------------------------------------------
# Structural measurements
# ---------------------------------------------------------------------------

def is_normal_magic(square: Square) -> bool:
    """True iff all rows, columns, and both main diagonals sum to the constant."""
    return _is_magic_grid(square.cells, square.order)


def _is_magic_grid(cells, n: int) -> bool:
    # Shared with the enumerator's re-checks; assumes cells is a permutation.
    mu = magic_constant(n)
    for r in range(n):
        if sum(cells[r * n : (r + 1) * n]) != mu:
            return False
    for c in range(n):
        if sum(cells[c::n]) != mu:
            return False
    if sum(cells[i * n + i] for i in range(n)) != mu:
        return False
    return sum(cells[i * n + (n - 1 - i)] for i in range(n)) == mu


def broken_diagonal_sums(square: Square) -> tuple[int, ...]:
    """Sums of the 2(n-1) wraparound diagonals other than the two main traces.

    Order of results: down-right diagonals {(i, (i+k) mod n)} for k = 1..n-1
    ascending, then down-left diagonals {(i, (k-i) mod n)} for k = 0..n-2
    ascending.  k = 0 down-right and k = n-1 down-left are the main traces
    and are excluded.
    """
    n = square.order
    cells = square.cells
    sums = []
    for k in range(1, n):
        sums.append(sum(cells[i * n + (i + k) % n] for i in range(n)))
    for k in range(n - 1):
        sums.append(sum(cells[i * n + (k - i) % n] for i in range(n)))
    return tuple(sums)


def complement_pairs(square: Square) -> frozenset[frozenset[tuple[int, int]]]:
    """Positions of the n^2/2 value pairs {v, n^2+1-v}.

    Each pair is the unordered pair of (row, col) positions holding v and
    its complement.  Only even orders pair every value; odd orders are
    rejected (the middle value n^2+1-v = v would self-pair).
    """
    n = square.order
    if n % 2:
        raise ValueError(f"complement pairing needs an even order, got {n}")
    n2 = n * n
    where = {v: divmod(idx, n) for idx, v in enumerate(square.cells)}
    return frozenset(
        frozenset((where[v], where[n2 + 1 - v])) for v in range(1, n2 // 2 + 1)
    )


def determinant(square: Square) -> int:
    """Exact integer determinant via fraction-free (Bareiss) elimination."""
    n = square.order
    m = [list(square.row(r)) for r in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Transformations
# ---------------------------------------------------------------------------

def _invert_perm(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def _compose_perm(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # (p o q)(i) = p(q(i))
    return tuple(p[q[i]] for i in range(len(p)))


@dataclass(frozen=True, slots=True)
class Transformation:
    """Optional transpose, then a row permutation, then a column permutation.

    Acting on a square A: let B = A^T if `transposed` else A; the result
    holds B(row_perm^-1(r), col_perm^-1(c)) at position (r, c).  In other
    words row i of B moves to row row_perm(i) and column j to col_perm(j).
    """

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    transposed: bool = False

    def __post_init__(self) -> None:
        n = len(self.row_perm)
        if len(self.col_perm) != n:
            raise ValueError("row and column permutations must have equal length")
        for name, p in (("row_perm", self.row_perm), ("col_perm", self.col_perm)):
            if sorted(p) != list(range(n)):
                raise ValueError(f"{name} {p} is not a permutation of 0..{n - 1}")

    @property
    def order(self) -> int:
        return len(self.row_perm)

    def cell_map(self) -> tuple[int, ...]:
        """Index map: applying this transformation reads cell i from cell_map[i]."""
        n = self.order
        rinv = _invert_perm(self.row_perm)
        cinv = _invert_perm(self.col_perm)
        if self.transposed:
            return tuple(
                cinv[c] * n + rinv[r] for r in range(n) for c in range(n)
            )
        return tuple(rinv[r] * n + cinv[c] for r in range(n) for c in range(n))

    def apply(self, square: Square) -> Square:
        if square.order != self.order:
            raise ValueError(
                f"transformation acts on order {self.order}, square has order {square.order}"
            )
        src = square.cells
        return Square(self.order, tuple(src[i] for i in self.cell_map()))

    def after(self, first: "Transformation") -> "Transformation":
        """Composite transformation: first `first`, then self."""
        if first.order != self.order:
            raise ValueError("cannot compose transformations of different orders")
        if self.transposed:
            # Transposing swaps the roles of the earlier row and column perms.
            rp = _compose_perm(self.row_perm, first.col_perm)
            cp = _compose_perm(self.col_perm, first.row_perm)
        else:
            rp = _compose_perm(self.row_perm, first.row_perm)
            cp = _compose_perm(self.col_perm, first.col_perm)
        return Transformation(rp, cp, self.transposed != first.transposed)

    def inverse(self) -> "Transformation":
        if self.transposed:
            return Transformation(
                _invert_perm(self.col_perm), _invert_perm(self.row_perm), True
            )
        return Transformation(
            _invert_perm(self.row_perm), _invert_perm(self.col_perm), False
        )


def identity_transformation(n: int) -> Transformation:
    ident = tuple(range(n))
    return Transformation(ident, ident, False)


def grid_symmetries(n: int) -> tuple[Transformation, ...]:
    """The 8 dihedral symmetries of the n x n grid as transformations."""
    ident = tuple(range(n))
    rev = tuple(range(n - 1, -1, -1))
    return (
        Transformation(ident, ident, False),  # identity
        Transformation(ident, rev, True),     # rotate 90 clockwise
        Transformation(rev, rev, False),      # rotate 180
        Transformation(rev, ident, True),     # rotate 270
        Transformation(rev, ident, False),    # flip top-bottom
        Transformation(ident, rev, False),    # flip left-right
        Transformation(ident, ident, True),   # transpose
        Transformation(rev, rev, True),       # anti-transpose
    )
