"""End-to-end runs: enumerate -> classify -> group -> generators -> report.

Orders 3 and 4 run to completion on a desk.  Order 5 is a long-running
job: the pipeline only lays out a resumable shard plan and executes
count-only shard jobs, skipping any shard whose result file already
exists (files are written atomically, so existence means complete).

All outputs are deterministic -- no timestamps, no seeds -- so repeated
runs are byte-identical.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .catalog import (
    CatalogRecord,
    classification_text,
    catalog_text,
    group_text,
    write_atomic,
)
from .classifier import DudeneyCensus, count_magic_broken_diagonals
from .enumerator import Shard, count_squares, iter_squares, trial_cells
from .generators import GeneratorCensus, census as generator_census
from .groups import symmetry_group
from .squares import Square, encode_square
from .constraints import cell_name

SUMMARY_NAME = "summary.txt"
REPORT_JSON = "report.json"


def classify_catalog(
    squares: Sequence[Square], dudeney: DudeneyCensus
) -> list[CatalogRecord]:
    records = []
    for i, sq in enumerate(squares):
        label = dudeney.label_of(sq)
        records.append(
            CatalogRecord(
                line=i,
                encoding=encode_square(sq),
                dudeney=label.dudeney,
                trigg=label.trigg,
                vi_split=label.vi_split,
                broken_diagonals=count_magic_broken_diagonals(sq),
            )
        )
    return records


def attach_orbits(
    records: Iterable[CatalogRecord], gens: GeneratorCensus
) -> list[CatalogRecord]:
    """Fill orbit_id/is_generator from the closure partitions."""
    orbit_of: dict[str, tuple[int, bool]] = {}
    oid = 0
    for cls in gens.classes:
        for orb in cls.closure_partition.orbits:
            gen_enc = encode_square(orb.generator)
            for m in orb.members:
                enc = encode_square(m)
                orbit_of[enc] = (oid, enc == gen_enc)
            oid += 1
    out = []
    for r in records:
        oid_flag = orbit_of[r.encoding]
        out.append(
            CatalogRecord(
                line=r.line,
                encoding=r.encoding,
                dudeney=r.dudeney,
                trigg=r.trigg,
                vi_split=r.vi_split,
                broken_diagonals=r.broken_diagonals,
                orbit_id=oid_flag[0],
                is_generator=oid_flag[1],
            )
        )
    return out


def _histogram_str(hist: dict[int, int]) -> str:
    return ",".join(f"{size}:{count}" for size, count in hist.items()) or "-"


def generators_text(gens: GeneratorCensus) -> str:
    lines = ["# format=1", f"# kind=generators total={gens.total_generators}"]
    for cls in gens.classes:
        lines.append(f"[class {cls.letter}]")
        lines.append(f"population={cls.population}")
        lines.append(f"group_order={cls.group_order}")
        lines.append(f"pair_view_order={cls.pair_view_order}")
        lines.append(
            f"group_orbits={len(cls.group_partition.orbits)} "
            f"histogram={_histogram_str(cls.group_partition.size_histogram)}"
        )
        lines.append(
            f"closure_orbits={len(cls.closure_partition.orbits)} "
            f"histogram={_histogram_str(cls.closure_partition.size_histogram)}"
        )
        split = cls.subgroup_split()
        if split:
            lines.append(
                "split=" + ",".join(f"{name}:{size}x{count}" for name, size, count in split)
            )
        for orb in sorted(
            cls.closure_partition.orbits, key=lambda o: encode_square(o.generator)
        ):
            lines.append(f"generator size={orb.size} square={encode_square(orb.generator)}")
    lines.append("")
    return "\n".join(lines)


def report_data(
    order: int,
    count: int,
    dudeney: DudeneyCensus | None,
    gens: GeneratorCensus | None,
) -> dict:
    data: dict = {"format": 1, "order": order, "square_count": count}
    if dudeney is not None:
        data["dudeney_populations"] = {
            dudeney.labels[c.signature].dudeney: c.population for c in dudeney.classes
        }
        data["trigg_populations"] = dudeney.trigg_populations()
    if gens is not None:
        data["total_generators"] = gens.total_generators
        data["classes"] = {
            cls.letter: {
                "population": cls.population,
                "group_order": cls.group_order,
                "pair_view_order": cls.pair_view_order,
                "group_orbit_histogram": cls.group_partition.size_histogram,
                "closure_orbit_histogram": cls.closure_partition.size_histogram,
                "subgroup_split": [
                    {"name": name, "orbit_size": size, "generators": cnt}
                    for name, size, cnt in cls.subgroup_split()
                ],
                "generators": [
                    encode_square(g) for g in cls.closure_partition.generators()
                ],
            }
            for cls in gens.classes
        }
        data["discrepancies"] = [d.as_dict() for d in gens.discrepancies]
    return data


def _as_hist(raw: dict) -> dict[int, int]:
    # JSON round-trips turn int keys into strings; normalize either form.
    return {int(k): v for k, v in raw.items()}


def emit_report(data: dict) -> str:
    """Human-readable summary from the machine-readable report data."""
    order = data["order"]
    lines = [
        f"normal magic squares, order {order}",
        f"  squares enumerated: {data['square_count']}",
    ]
    if "dudeney_populations" in data:
        pops = data["dudeney_populations"]
        lines.append("  dudeney classes (population):")
        lines.append(
            "    " + "  ".join(f"{k}={v}" for k, v in pops.items())
        )
        tr = data["trigg_populations"]
        total = sum(tr.values())
        lines.append(
            "  trigg classes: "
            + "  ".join(f"{k}={tr[k]}" for k in sorted(tr))
            + f"  (total {total})"
        )
    if "classes" in data:
        lines.append(f"  generators (symmetric-closure orbits): {data['total_generators']}")
        for letter, cls in data["classes"].items():
            hist = ", ".join(
                f"{cnt} of size {size}"
                for size, cnt in _as_hist(cls["closure_orbit_histogram"]).items()
            )
            lines.append(
                f"    class {letter}: population {cls['population']}, "
                f"{len(cls['generators'])} generators ({hist})"
            )
            if cls["subgroup_split"]:
                split = ", ".join(
                    f"{s['name']}: {s['generators']} generators of orbit size {s['orbit_size']}"
                    for s in cls["subgroup_split"]
                )
                lines.append(f"      subsets: {split}")
            group_hist = _histogram_str(_as_hist(cls["group_orbit_histogram"]))
            lines.append(
                f"      class symmetry group: {cls['group_order']} triples "
                f"({cls['pair_view_order']} full pairs), "
                f"group-orbit histogram {group_hist}"
            )
        disc = data.get("discrepancies", [])
        if disc:
            lines.append("  DISCREPANCIES versus published census:")
            for d in disc:
                lines.append(
                    f"    {d['subject']}.{d['field']}: expected {d['expected']}, "
                    f"computed {d['computed']}"
                )
        else:
            lines.append("  discrepancies versus published census: none")
    lines.append("")
    return "\n".join(lines)


@dataclass(frozen=True)
class PipelineSummary:
    order: int
    square_count: int
    generator_count: int | None
    out_dir: Path
    discrepancies: int = 0


def run_pipeline(
    order: int,
    out_dir: str | Path,
    long_run: bool = False,
    shards: Sequence[Shard] | None = None,
    fmt: str = "tsv",
    log=None,
) -> PipelineSummary:
    """Run every stage for the given order and persist all artifacts.

    Orders 3 and 4 write catalog, classification (order 4), group
    listings, generator report, report.json, and summary.txt.  Order 5
    requires long_run=True and executes a resumable count-only shard
    plan (default: one shard per value of the first trial cell).
    """
    out = Path(out_dir)
    log = log or (lambda msg: print(msg, file=sys.stderr))
    if order in (3, 4):
        return _run_small(order, out, fmt, log)
    if order == 5:
        if not long_run:
            raise ValueError(
                "order-5 pipeline is a long-running job; pass long_run=True "
                "and optionally an explicit shard plan"
            )
        return _run_order5(out, shards, log)
    raise ValueError(f"unsupported order {order}")


def _run_small(order: int, out: Path, fmt: str, log) -> PipelineSummary:
    squares = list(iter_squares(order))
    log(f"# stage=enumerate count={len(squares)}")
    write_atomic(out / "catalog.txt", catalog_text(squares, order))

    if order == 3:
        group = symmetry_group(squares)
        write_atomic(out / "group.txt", group_text("order3", group))
        from .generators import decompose, symmetric_closure_partition

        part = decompose(squares, group, "order3")
        closure = symmetric_closure_partition(squares, "order3")
        data = {
            "format": 1,
            "order": 3,
            "square_count": len(squares),
            "group_order": len(group),
            "orbit_histogram": part.size_histogram,
            "closure_histogram": closure.size_histogram,
            "total_generators": len(closure.orbits),
            "generators": [encode_square(o.generator) for o in closure.orbits],
        }
        write_atomic(out / REPORT_JSON, json.dumps(data, indent=2) + "\n")
        summary = (
            f"normal magic squares, order 3\n"
            f"  squares enumerated: {len(squares)}\n"
            f"  symmetry group: {len(group)} triples (dihedral)\n"
            f"  generators: {len(closure.orbits)} "
            f"(orbit sizes {part.size_histogram})\n"
        )
        write_atomic(out / SUMMARY_NAME, summary)
        log(f"# stage=report generators={len(closure.orbits)}")
        return PipelineSummary(3, len(squares), len(closure.orbits), out)

    dudeney = DudeneyCensus.from_catalog(squares)
    log("# stage=classify classes=12")
    gens = generator_census(dudeney)
    log(f"# stage=generators total={gens.total_generators}")

    records = attach_orbits(classify_catalog(squares, dudeney), gens)
    write_atomic(out / "classes.tsv", classification_text(records, fmt))
    for cls in gens.classes:
        write_atomic(
            out / "groups" / f"trigg_{cls.letter}.txt",
            group_text(f"trigg_{cls.letter}", cls.group),
        )
    write_atomic(out / "generators.txt", generators_text(gens))
    data = report_data(4, len(squares), dudeney, gens)
    write_atomic(out / REPORT_JSON, json.dumps(data, indent=2) + "\n")
    write_atomic(
        out / "discrepancies.json",
        json.dumps([d.as_dict() for d in gens.discrepancies], indent=2) + "\n",
    )
    write_atomic(out / SUMMARY_NAME, emit_report(data))
    log(f"# stage=report discrepancies={len(gens.discrepancies)}")
    return PipelineSummary(
        4, len(squares), gens.total_generators, out, len(gens.discrepancies)
    )


def _shard_tag(shard: Shard) -> str:
    return "_".join(f"{v:02d}" for v in shard.prefix)


def _run_order5(out: Path, shards: Sequence[Shard] | None, log) -> PipelineSummary:
    if shards is None:
        shards = [Shard((v,)) for v in range(1, 26)]
    shard_dir = out / "shards"
    manifest = [
        "# format=1",
        "# kind=shard-plan order=5 cells="
        + ",".join(cell_name(c, 5) for c in trial_cells(5)[: len(shards[0].prefix)]),
    ]
    manifest.extend(f"shard {_shard_tag(s)}" for s in shards)
    write_atomic(out / "manifest.txt", "\n".join(manifest) + "\n")

    total = 0
    done = 0
    for shard in shards:
        path = shard_dir / f"shard_{_shard_tag(shard)}.count"
        if path.exists():
            total += int(path.read_text().split()[-1])
            done += 1
            log(f"# stage=shard {_shard_tag(shard)} status=resumed")
            continue
        count = count_squares(5, shard)
        write_atomic(path, f"# format=1\ncount {count}\n")
        total += count
        done += 1
        log(f"# stage=shard {_shard_tag(shard)} status=done count={count}")
    summary = (
        f"normal magic squares, order 5 (sharded long run)\n"
        f"  shards completed: {done} of {len(shards)}\n"
        f"  squares counted so far: {total}\n"
        f"  full-space reference count: 2202441792\n"
    )
    write_atomic(out / SUMMARY_NAME, summary)
    return PipelineSummary(5, total, None, out)
