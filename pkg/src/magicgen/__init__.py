"""Enumeration, classification, and generator extraction for small normal
magic squares."""

from .squares import (
    MagicSquare,
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
from .constraints import (
    ConstraintSystem,
    Dependency,
    GridCheck,
    build_system,
    dependent_cells_order4,
    validate_grid,
)
from .enumerator import (
    Shard,
    count_squares,
    enumerate_shards_parallel,
    enumerate_squares,
    iter_squares,
    shard_for,
    single_cell_shards,
    trial_cells,
)
from .classifier import (
    ClassLabel,
    DudeneyCensus,
    FastClassifier,
    SignatureClass,
    assign_labels,
    count_magic_broken_diagonals,
    discover_classes,
    is_pandiagonal,
    signature,
    split_type_vi,
)
from .groups import (
    GroupClosureError,
    Orbit,
    TransformationGroup,
    are_symmetric,
    candidate_universe,
    orbit,
    symmetry_group,
)
from .generators import (
    ClassCensus,
    Discrepancy,
    GeneratorCensus,
    OrbitPartition,
    PartitionVerdict,
    census,
    decompose,
    symmetric_closure_partition,
    verify_partition,
)
from .pipeline import PipelineSummary, emit_report, run_pipeline

__all__ = [
    "ClassCensus",
    "ClassLabel",
    "ConstraintSystem",
    "Dependency",
    "Discrepancy",
    "DudeneyCensus",
    "FastClassifier",
    "GeneratorCensus",
    "GridCheck",
    "GroupClosureError",
    "MagicSquare",
    "Orbit",
    "OrbitPartition",
    "PartitionVerdict",
    "PipelineSummary",
    "Shard",
    "SignatureClass",
    "Square",
    "Transformation",
    "TransformationGroup",
    "are_symmetric",
    "assign_labels",
    "broken_diagonal_sums",
    "build_system",
    "candidate_universe",
    "census",
    "complement_pairs",
    "count_magic_broken_diagonals",
    "count_squares",
    "decompose",
    "dependent_cells_order4",
    "determinant",
    "discover_classes",
    "emit_report",
    "encode_square",
    "enumerate_shards_parallel",
    "enumerate_squares",
    "grid_symmetries",
    "identity_transformation",
    "is_normal_magic",
    "is_pandiagonal",
    "iter_squares",
    "magic_constant",
    "orbit",
    "parse_square",
    "run_pipeline",
    "shard_for",
    "signature",
    "single_cell_shards",
    "split_type_vi",
    "symmetric_closure_partition",
    "symmetry_group",
    "trial_cells",
    "validate_grid",
    "verify_partition",
]

__version__ = "0.1.0"
