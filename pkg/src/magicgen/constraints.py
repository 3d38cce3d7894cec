"""The linear system behind the magic-sum conditions.

An order-n square has 2n+2 line constraints (n rows, n columns, the two
main traces), each summing to the magic constant.  Solving that system
exactly shows most cells are determined by a small independent basis:
2 of 9 cells for order 3, 7 of 16 for order 4, 13 of 25 for order 5.

Elimination runs over exact rationals.  Pivot columns are chosen scanning
cells in *reverse* reading order, so the cells that stay free are the
earliest ones in reading order; for order 4 this makes the basis the
cells named a, b, c, e, f, g, i (indices 0, 1, 2, 4, 5, 6, 8).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .squares import magic_constant


def cell_name(idx: int, n: int) -> str:
    """Letter name of a cell in reading order (a..y covers orders up to 5)."""
    if n * n <= 26:
        return chr(ord("a") + idx)
    return f"c{idx}"


@dataclass(frozen=True)
class Dependency:
    """One dependent cell as an affine expression over the free cells.

    value = const + sum(coeff * value_of(cell) for cell, coeff in terms)

    Coefficients are exact rationals; the constant already folds in the
    magic constant (e.g. "34 - a - b - c" has const = 34).
    """

    cell: int
    const: Fraction
    terms: tuple[tuple[int, Fraction], ...]

    def evaluate(self, values: dict[int, int]) -> Fraction:
        total = self.const
        for cell, coeff in self.terms:
            total += coeff * values[cell]
        return total

    def integer_form(self) -> tuple[int, int, tuple[tuple[int, int], ...]]:
        """Rescale to (denominator, const_numerator, ((cell, numerator), ...)).

        value = (const_numerator + sum(num * cell_value)) / denominator,
        exact; non-divisible numerators mean no integer solution.
        """
        denoms = [self.const.denominator] + [c.denominator for _, c in self.terms]
        lcm = 1
        for d in denoms:
            g = _gcd(lcm, d)
            lcm = lcm // g * d
        const_num = int(self.const * lcm)
        terms = tuple((cell, int(coeff * lcm)) for cell, coeff in self.terms)
        return lcm, const_num, terms

    def render(self, n: int) -> str:
        """Stable text form, e.g. "d = 34 - a - b - c"."""
        parts: list[str] = []
        if self.const != 0 or not self.terms:
            parts.append(_fmt_frac(self.const))
        for cell, coeff in self.terms:
            name = cell_name(cell, n)
            mag = abs(coeff)
            body = name if mag == 1 else f"{_fmt_frac(mag)}*{name}"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return f"{cell_name(self.cell, n)} = " + " ".join(parts)


def _fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class ConstraintSystem:
    """The 2n+2 magic-sum equations with their exact solution structure."""

    order: int
    equations: tuple[tuple[tuple[int, ...], int], ...]  # (coefficients, rhs)
    rank: int
    free_cells: tuple[int, ...]
    dependencies: tuple[Dependency, ...]

    def solve(self, basis: Sequence[int]) -> tuple[Fraction, ...]:
        """Full grid from free-cell values, dependent cells by substitution."""
        if len(basis) != len(self.free_cells):
            raise ValueError(
                f"expected {len(self.free_cells)} basis values, got {len(basis)}"
            )
        values = dict(zip(self.free_cells, basis))
        grid: list[Fraction] = [Fraction(0)] * (self.order * self.order)
        for cell, v in values.items():
            grid[cell] = Fraction(v)
        for dep in self.dependencies:
            grid[dep.cell] = dep.evaluate(values)
        return tuple(grid)


def build_system(n: int) -> ConstraintSystem:
    """Construct and exactly solve the magic-sum system for order n."""
    if n < 3:
        raise ValueError(f"order must be >= 3, got {n}")
    n2 = n * n
    mu = magic_constant(n)

    equations: list[tuple[tuple[int, ...], int]] = []
    for r in range(n):
        coeffs = [0] * n2
        for c in range(n):
            coeffs[r * n + c] = 1
        equations.append((tuple(coeffs), mu))
    for c in range(n):
        coeffs = [0] * n2
        for r in range(n):
            coeffs[r * n + c] = 1
        equations.append((tuple(coeffs), mu))
    major = [0] * n2
    minor = [0] * n2
    for i in range(n):
        major[i * n + i] = 1
        minor[i * n + (n - 1 - i)] = 1
    equations.append((tuple(major), mu))
    equations.append((tuple(minor), mu))

    # Reduced row echelon form, pivoting on the highest-index cell available.
    rows = [[Fraction(v) for v in coeffs] + [Fraction(rhs)] for coeffs, rhs in equations]
    pivot_cols: list[int] = []
    rank = 0
    for col in range(n2 - 1, -1, -1):
        pivot_row = None
        for i in range(rank, len(rows)):
            if rows[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        pivot = rows[rank][col]
        rows[rank] = [x / pivot for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[rank])]
        pivot_cols.append(col)
        rank += 1

    for i in range(rank, len(rows)):
        if rows[i][n2] != 0:
            raise ValueError("inconsistent constraint system")  # unreachable

    free = tuple(sorted(set(range(n2)) - set(pivot_cols)))
    deps: list[Dependency] = []
    for row, col in zip(rows[:rank], pivot_cols):
        terms = tuple(
            (c, -row[c]) for c in free if row[c] != 0
        )
        deps.append(Dependency(cell=col, const=row[n2], terms=terms))
    deps.sort(key=lambda d: d.cell)

    return ConstraintSystem(
        order=n,
        equations=tuple(equations),
        rank=rank,
        free_cells=free,
        dependencies=tuple(deps),
    )


def dependent_cells_order4(basis: Sequence[int]) -> tuple[int, ...]:
    """Full 16-cell grid from the order-4 basis (a, b, c, e, f, g, i).

    Uses the closed-form solution of the ten line constraints; the result
    always satisfies every line sum, but its values may fall outside 1..16
    or collide -- validity is a separate check (validate_grid).
    """
    if len(basis) != 7:
        raise ValueError(f"expected 7 basis values, got {len(basis)}")
    a, b, c, e, f, g, i = basis
    mu = magic_constant(4)
    d = mu - a - b - c
    h = mu - e - f - g
    j = 2 * a + b + c + e - g + i - mu
    k = 2 * mu - 2 * a - b - c - e - f - i
    l = f + g - i
    m = mu - a - e - i
    n = 2 * mu - 2 * a - 2 * b - c - e - f + g - i
    o = 2 * a + b + e + f - g + i - mu
    p = a + b + c + e + i - mu
    return (a, b, c, d, e, f, g, h, i, j, k, l, m, n, o, p)


@dataclass(frozen=True)
class GridCheck:
    """Verdict from validate_grid; `cell` is the first offender in reading order."""

    ok: bool
    cell: int | None = None
    reason: str | None = None


def validate_grid(grid: Sequence[int]) -> GridCheck:
    """Accept iff all values lie in 1..len(grid) and are pairwise distinct.

    Also accepts exact rationals from ConstraintSystem.solve, rejecting
    any that are not whole numbers.
    """
    n2 = len(grid)
    seen: set[int] = set()
    for idx, v in enumerate(grid):
        if v != int(v):
            return GridCheck(False, idx, f"non-integer value {v}")
        v = int(v)
        if not 1 <= v <= n2:
            return GridCheck(False, idx, f"value {v} outside 1..{n2}")
        if v in seen:
            return GridCheck(False, idx, f"duplicate value {v}")
        seen.add(v)
    return GridCheck(True)
