"""Modularity-matrix analysis: validation, criteria, block structure and design comparison."""
from .criteria import CriteriaReport, composition_score, criteria, diagonality, offdiag, sparsity, trace
from .lab import (
    DesignComparison,
    GeneratorSpec,
    StandardAssessment,
    assess_standard,
    compare_designs,
    generate_system,
    sparsity_trend,
)
from .matrix import (
    CountVector,
    DependencyReport,
    MatrixError,
    ModularityMatrix,
    ValidationReport,
    add_vectors,
    build_matrix,
    coalesce_duplicates,
    dependency_report,
    is_well_composed,
    rank,
    validate,
)
from .structure import (
    BlockPartition,
    HierarchyNode,
    collapse_block,
    connected_components,
    cross_block_coupling,
    detect_blocks,
    diagnose_outliers,
    expand_block,
    make_partition,
    partition_from_labels,
    reorder,
    shared_functional_flags,
    single_responsibility_check,
    suggest_partitions,
)

__version__ = "0.1.0"
