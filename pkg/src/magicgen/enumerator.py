"""Backtracking enumeration of normal magic squares over the free-cell basis.

Only the independent cells of the magic-sum system are searched; every
other cell is forced through its affine dependency the moment all of its
supporting free cells are assigned, and a forced value that is out of
range, fractional, or already used prunes the branch immediately.

Trial cells are assigned in a fixed order chosen greedily: at each step
take the free cell that completes the most dependencies (ties broken by
reading order), so dependent-cell validation happens as early as
possible.  For order 4 this yields a, b, c, e, i, f, g -- cell c forces
d, cell i forces m and p, cell f forces k, and cell g forces the rest.
Trial values are always attempted in ascending order, which makes the
emission order deterministic: two runs produce identical streams, and
shard outputs concatenated in prefix order reproduce the full run
byte for byte.

A Shard fixes the values of the first k trial cells, so shards with
distinct prefixes explore disjoint subtrees and the union over all
prefixes covers the whole space; this is the unit of parallel and
resumable work.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .constraints import build_system
from .squares import Square, magic_constant

SUPPORTED_ORDERS = (3, 4, 5)


@dataclass(frozen=True)
class Shard:
    """Prefix constraint: value i of `prefix` pins trial cell i."""

    prefix: tuple[int, ...]


@lru_cache(maxsize=None)
def trial_cells(n: int) -> tuple[int, ...]:
    """Assignment order of the free cells (greedy earliest-forcing order)."""
    system = build_system(n)
    supports = {
        dep.cell: frozenset(c for c, _ in dep.terms)
        for dep in system.dependencies
        if dep.terms
    }
    chosen: list[int] = []
    chosen_set: set[int] = set()
    fired: set[int] = set()
    remaining = list(system.free_cells)
    while remaining:
        def readiness(x: int) -> int:
            have = chosen_set | {x}
            return sum(
                1 for cell, sup in supports.items() if cell not in fired and sup <= have
            )

        best = max(remaining, key=lambda x: (readiness(x), -x))
        chosen.append(best)
        chosen_set.add(best)
        remaining.remove(best)
        for cell, sup in supports.items():
            if cell not in fired and sup <= chosen_set:
                fired.add(cell)
    return tuple(chosen)


@dataclass(frozen=True)
class _Plan:
    n: int
    trials: tuple[int, ...]
    # Cells whose dependency has no free-cell term: fixed for every square.
    constants: tuple[tuple[int, int], ...]
    # forced[level]: dependents completed by trial `level`, as
    # (cell, denominator, const_numerator, ((earlier_trial_pos, numerator), ...),
    #  numerator_of_this_level's_trial); the dependent's scaled value is
    # const + sum(earlier terms) + m * trial_value.
    forced: tuple[
        tuple[tuple[int, int, int, tuple[tuple[int, int], ...], int], ...], ...
    ]
    # lines_of[cell]: ids of the rows/columns/traces through the cell.
    lines_of: tuple[tuple[int, ...], ...]
    # Distinct-value completion bounds: min_fill[r]/max_fill[r] bracket the
    # sum of r distinct values from 1..n^2.
    min_fill: tuple[int, ...]
    max_fill: tuple[int, ...]


@lru_cache(maxsize=None)
def _plan(n: int) -> _Plan:
    system = build_system(n)
    trials = trial_cells(n)
    pos = {cell: i for i, cell in enumerate(trials)}
    constants: list[tuple[int, int]] = []
    per_level: list[list] = [[] for _ in trials]
    for dep in system.dependencies:
        den, cnum, terms = dep.integer_form()
        if not terms:
            if cnum % den:
                raise ValueError(f"order {n} forces a non-integer cell")  # unreachable
            constants.append((dep.cell, cnum // den))
        else:
            level = max(pos[c] for c, _ in terms)
            earlier = tuple((pos[c], num) for c, num in terms if pos[c] != level)
            m = next(num for c, num in terms if pos[c] == level)
            per_level[level].append((dep.cell, den, cnum, earlier, m))

    n2 = n * n
    lines: list[tuple[int, ...]] = []
    for r in range(n):
        lines.append(tuple(r * n + c for c in range(n)))
    for c in range(n):
        lines.append(tuple(r * n + c for r in range(n)))
    lines.append(tuple(i * n + i for i in range(n)))
    lines.append(tuple(i * n + (n - 1 - i) for i in range(n)))
    lines_of = [[] for _ in range(n2)]
    for lid, line in enumerate(lines):
        for cell in line:
            lines_of[cell].append(lid)
    min_fill = tuple(r * (r + 1) // 2 for r in range(n + 1))
    max_fill = tuple(r * (2 * n2 + 1 - r) // 2 for r in range(n + 1))

    return _Plan(
        n,
        trials,
        tuple(constants),
        tuple(tuple(lv) for lv in per_level),
        tuple(tuple(ls) for ls in lines_of),
        min_fill,
        max_fill,
    )


def _checked_prefix(n: int, shard: Shard | None) -> tuple[int, ...]:
    if shard is None:
        return ()
    prefix = tuple(shard.prefix)
    n2 = n * n
    if len(prefix) > len(trial_cells(n)):
        raise ValueError(f"shard prefix longer than the {len(trial_cells(n))}-cell basis")
    if len(set(prefix)) != len(prefix):
        raise ValueError(f"shard prefix {prefix} repeats a value")
    for v in prefix:
        if not 1 <= v <= n2:
            raise ValueError(f"shard prefix value {v} outside 1..{n2}")
    return prefix


def _iter_generic(n: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Propagating backtracker over the free-cell basis.

    Iterative depth-first search, one stack level per trial cell.  Two
    pruning devices run on top of the exact dependency forcing:

    * every row/column/trace keeps a running (cells-left, partial-sum)
      pair, and the amount still needed must stay between the smallest
      and largest sums reachable with that many distinct values;
    * each dependent cell firing at a level is (base + m*v)/den in the
      level's trial value v, so before scanning candidates the v-window
      keeping every dependent inside 1..n^2 is intersected, and for
      den=2 the scan steps only over the parity of v that divides.

    The candidate scan is ascending, so the emission order is the plain
    lexicographic order of trial assignments.
    """
    plan = _plan(n)
    n2 = n * n
    mu = magic_constant(n)
    trials = plan.trials
    forced = plan.forced
    lines_of = plan.lines_of
    min_fill = plan.min_fill
    max_fill = plan.max_fill
    last = len(trials)
    plen = len(prefix)

    grid = [0] * n2
    rem = [n] * (2 * n + 2)
    acc = [0] * (2 * n + 2)
    used0 = 0
    for cell, v in plan.constants:
        if not 1 <= v <= n2 or used0 >> v & 1:
            return
        grid[cell] = v
        used0 |= 1 << v
        for line in lines_of[cell]:
            rem[line] -= 1
            acc[line] += v

    tvals = [0] * last
    trial_lines = [lines_of[trials[lv]] for lv in range(last)]
    dep_lines = [tuple(lines_of[f[0]] for f in forced[lv]) for lv in range(last)]
    # Per-level scan state: next value, upper bound, step, entry used-mask,
    # and the level's dependents as a flat [fcell, den, base, m, ...] list.
    # Placements are undone by recomputation: dependent values are re-derived
    # from the flat list and the trial value, so no undo log is kept.
    cand_v = [0] * last
    cand_hi = [0] * last
    cand_step = [1] * last
    used_at = [0] * (last + 1)
    deps_at: list[list[int]] = [[] for _ in range(last)]

    def _undo(level: int, upto: int, nlines: int) -> None:
        # Reverse the line bookkeeping of the placement holding `level`:
        # all trial lines, dependents before `upto` fully, and the first
        # `nlines` lines of dependent `upto`.
        v = tvals[level]
        for line in trial_lines[level]:
            rem[line] += 1
            acc[line] -= v
        deps = deps_at[level]
        dlines = dep_lines[level]
        for di in range(0, upto * 4, 4):
            val = deps[di + 2] + deps[di + 3] * v
            den = deps[di + 1]
            if den != 1:
                val //= den
            for line in dlines[di >> 2]:
                rem[line] += 1
                acc[line] -= val
        if nlines:
            val = deps[upto * 4 + 2] + deps[upto * 4 + 3] * v
            den = deps[upto * 4 + 1]
            if den != 1:
                val //= den
            dl = dlines[upto]
            for li in range(nlines):
                line = dl[li]
                rem[line] += 1
                acc[line] -= val

    used_at[0] = used0
    level = 0
    entering = True
    while True:
        if entering:
            # Compute the candidate window for `level`.
            lo, hi = 1, n2
            for line in trial_lines[level]:
                r = rem[line] - 1
                base = mu - acc[line]
                b = base - min_fill[r]
                if b < hi:
                    hi = b
                b = base - max_fill[r]
                if b > lo:
                    lo = b
            deps = deps_at[level]
            del deps[:]
            parity = -1
            for fcell, den, base, terms, m in forced[level]:
                for tpos, num in terms:
                    base += num * tvals[tpos]
                if m > 0:
                    vlo = -((base - den) // m)
                    vhi = (n2 * den - base) // m
                else:
                    vlo = -((base - n2 * den) // m)
                    vhi = (den - base) // m
                if vlo > lo:
                    lo = vlo
                if vhi < hi:
                    hi = vhi
                if den == 2:
                    if m & 1:
                        p = base & 1
                        if parity < 0:
                            parity = p
                        elif parity != p:
                            lo = hi + 1
                            break
                    elif base & 1:
                        lo = hi + 1
                        break
                deps.append(fcell)
                deps.append(den)
                deps.append(base)
                deps.append(m)
            step = 1
            if level < plen:
                pv = prefix[level]
                if lo <= pv <= hi and (parity < 0 or pv & 1 == parity):
                    lo = hi = pv
                else:
                    lo, hi = 1, 0
            elif parity >= 0:
                if lo & 1 != parity:
                    lo += 1
                step = 2
            cand_v[level] = lo
            cand_hi[level] = hi
            cand_step[level] = step
            entering = False
            continue

        # Advance the scan at `level`.
        v = cand_v[level]
        hi = cand_hi[level]
        step = cand_step[level]
        used = used_at[level]
        deps = deps_at[level]
        tlines = trial_lines[level]
        dlines = dep_lines[level]
        ndeps = len(deps)
        placed = False
        while v <= hi:
            if not used >> v & 1:
                tvals[level] = v
                u = used | 1 << v
                for line in tlines:
                    rem[line] -= 1
                    acc[line] += v
                ok = True
                di = 0
                while di < ndeps:
                    den = deps[di + 1]
                    val = deps[di + 2] + deps[di + 3] * v
                    if den != 1:
                        if val % den:
                            _undo(level, di >> 2, 0)
                            ok = False
                            break
                        val //= den
                    if val < 1 or val > n2 or u >> val & 1:
                        _undo(level, di >> 2, 0)
                        ok = False
                        break
                    u |= 1 << val
                    nli = 0
                    bad = False
                    for line in dlines[di >> 2]:
                        r = rem[line] - 1
                        s = acc[line] + val
                        rem[line] = r
                        acc[line] = s
                        nli += 1
                        need = mu - s
                        # For a line with one open cell the exact needed
                        # value must still be unused.
                        if need < min_fill[r] or need > max_fill[r] or (
                            r == 1 and u >> need & 1
                        ):
                            _undo(level, di >> 2, nli)
                            bad = True
                            break
                    if bad:
                        ok = False
                        break
                    di += 4
                if ok:
                    placed = True
                    break
            v += step
        if not placed:
            # Level exhausted: pop, undoing the placement that entered it.
            level -= 1
            if level < 0:
                return
            _undo(level, len(deps_at[level]) >> 2, 0)
            continue
        cand_v[level] = v + step
        if level == last - 1:
            for lv in range(last):
                grid[trials[lv]] = tvals[lv]
            for lv in range(last):
                dlv = deps_at[lv]
                tv = tvals[lv]
                for di in range(0, len(dlv), 4):
                    val = dlv[di + 2] + dlv[di + 3] * tv
                    if dlv[di + 1] != 1:
                        val //= dlv[di + 1]
                    grid[dlv[di]] = val
            yield tuple(grid)
            _undo(level, len(deps) >> 2, 0)
            continue
        used_at[level + 1] = u
        level += 1
        entering = True


def _iter_order4(prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Hand-unrolled order-4 search; same tree as the generic engine.

    The dependent-cell formulas are inlined with their g-independent parts
    hoisted out of each loop, and a bitmask over values 1..16 replaces the
    used-value set.  Emits cells in the order a,b,c,d,...,p (reading order).
    """
    if len(prefix) > 2:
        yield from _iter_generic(4, prefix)
        return
    a_vals: Sequence[int] = (prefix[0],) if len(prefix) >= 1 else range(1, 17)
    b_fixed = prefix[1] if len(prefix) >= 2 else None
    for a in a_vals:
        ua = 1 << a
        a2 = 2 * a
        for b in ((b_fixed,) if b_fixed is not None else range(1, 17)):
            if ua >> b & 1:
                continue
            ub = ua | 1 << b
            sab = a + b
            for c in range(1, 17):
                if ub >> c & 1:
                    continue
                d = 34 - sab - c
                if d < 1 or d > 16:
                    continue
                ud = ub | 1 << c
                if ud >> d & 1 or d == c:
                    continue
                ud |= 1 << d
                sabc = sab + c
                sbc = b + c
                for e in range(1, 17):
                    if ud >> e & 1:
                        continue
                    ue = ud | 1 << e
                    base_m = 34 - a - e
                    base_p = sabc + e - 34
                    for i in range(1, 17):
                        if ue >> i & 1:
                            continue
                        m = base_m - i
                        if m < 1 or m > 16:
                            continue
                        p = base_p + i
                        if p < 1 or p > 16 or p == m:
                            continue
                        ui = ue | 1 << i
                        if ui >> m & 1:
                            continue
                        ui |= 1 << m
                        if ui >> p & 1:
                            continue
                        ui |= 1 << p
                        base_k = 68 - a2 - sbc - e - i
                        j0 = a2 + sbc + e + i - 34
                        n0 = 68 - a2 - b - sbc - e - i
                        o0 = a2 + b + e + i - 34
                        for f in range(1, 17):
                            if ui >> f & 1:
                                continue
                            k = base_k - f
                            if k < 1 or k > 16:
                                continue
                            uf = ui | 1 << f
                            if uf >> k & 1:
                                continue
                            uf |= 1 << k
                            h0 = 34 - e - f
                            l0 = f - i
                            nf = n0 - f
                            of = o0 + f
                            glo = h0 - 16
                            if j0 - 16 > glo:
                                glo = j0 - 16
                            if of - 16 > glo:
                                glo = of - 16
                            if 1 - l0 > glo:
                                glo = 1 - l0
                            if 1 - nf > glo:
                                glo = 1 - nf
                            if glo < 1:
                                glo = 1
                            ghi = h0 - 1
                            if j0 - 1 < ghi:
                                ghi = j0 - 1
                            if of - 1 < ghi:
                                ghi = of - 1
                            if 16 - l0 < ghi:
                                ghi = 16 - l0
                            if 16 - nf < ghi:
                                ghi = 16 - nf
                            if ghi > 16:
                                ghi = 16
                            for g in range(glo, ghi + 1):
                                if uf >> g & 1:
                                    continue
                                mask = uf | 1 << g
                                h = h0 - g
                                if mask >> h & 1:
                                    continue
                                mask |= 1 << h
                                j = j0 - g
                                if mask >> j & 1:
                                    continue
                                mask |= 1 << j
                                l = l0 + g
                                if mask >> l & 1:
                                    continue
                                mask |= 1 << l
                                nn = nf + g
                                if mask >> nn & 1:
                                    continue
                                mask |= 1 << nn
                                o = of - g
                                if mask >> o & 1:
                                    continue
                                yield (a, b, c, d, e, f, g, h, i, j, k, l, m, nn, o, p)


def _raw_iter(n: int, shard: Shard | None) -> Iterator[tuple[int, ...]]:
    if n not in SUPPORTED_ORDERS:
        raise ValueError(
            f"unsupported order {n}; supported orders are {SUPPORTED_ORDERS}"
        )
    prefix = _checked_prefix(n, shard)
    if n == 4:
        return _iter_order4(prefix)
    return _iter_generic(n, prefix)


def iter_squares(n: int, shard: Shard | None = None) -> Iterator[Square]:
    """Stream every normal magic square of order n exactly once.

    With a shard, streams exactly the squares whose leading trial cells
    carry the shard's values.
    """
    for cells in _raw_iter(n, shard):
        yield Square(n, cells)


def enumerate_squares(
    n: int, sink: Callable[[Square], None], shard: Shard | None = None
) -> int:
    """Feed every square to `sink`; returns the number emitted."""
    count = 0
    for square in iter_squares(n, shard):
        sink(square)
        count += 1
    return count


def count_squares(n: int, shard: Shard | None = None) -> int:
    """Count without materializing Square objects."""
    return sum(1 for _ in _raw_iter(n, shard))


def single_cell_shards(n: int) -> tuple[Shard, ...]:
    """The n^2 disjoint shards fixing the first trial cell to each value."""
    return tuple(Shard((v,)) for v in range(1, n * n + 1))


def shard_for(n: int, cells: Sequence[int], values: Sequence[int]) -> Shard:
    """Build a shard, insisting `cells` matches the engine's trial order."""
    if len(cells) != len(values):
        raise ValueError("shard cells and values differ in length")
    expected = trial_cells(n)[: len(cells)]
    if tuple(cells) != expected:
        raise ValueError(
            f"shard cells {tuple(cells)} must be the leading trial cells {expected}"
        )
    return Shard(tuple(values))


def _shard_worker(args: tuple[int, tuple[int, ...], int | None]) -> list[tuple[int, ...]]:
    n, prefix, limit = args
    gen = _raw_iter(n, Shard(prefix))
    if limit is not None:
        out = []
        for cells in gen:
            out.append(cells)
            if len(out) >= limit:
                break
        return out
    return list(gen)


def enumerate_shards_parallel(
    n: int,
    shards: Sequence[Shard],
    max_workers: int | None = None,
    limit_per_shard: int | None = None,
) -> Iterator[Square]:
    """Run shards on worker processes, yielding in shard order.

    Each worker owns one shard's search exclusively; results are buffered
    per shard and concatenated in the order the shards were given, so the
    stream is byte-identical to running the same shards serially.
    """
    from concurrent.futures import ProcessPoolExecutor

    args = [(n, tuple(s.prefix), limit_per_shard) for s in shards]
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        for cells_list in pool.map(_shard_worker, args):
            for cells in cells_list:
                yield Square(n, cells)
