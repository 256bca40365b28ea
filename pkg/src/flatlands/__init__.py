"""flatlands: targets from nested flat sequences in finite geometries.

Colorings of PG(r-1,q) / AG(r-1,q) point sets, a certificate-producing
recognizer for the colorings induced by nested flat sequences, the
forbidden induced-restriction catalogs, and exhaustive/sampled sweeps
verifying that the two characterizations agree.
"""

from .fields import (
    FiniteField,
    field_make,
    NotPrimePower,
    OrderTooLarge,
    MAX_ORDER,
)
from .geometry import (
    Geometry,
    Flat,
    PartitionGrid,
    Embedding,
    PROJECTIVE,
    AFFINE,
    build_geometry,
    closure,
    rank_of,
    hyperplanes,
    ag_parallel_partition,
    grid_make,
    embed_affine,
    quotient_by_point,
    TooLarge,
    NotHyperplane,
    ParallelFamilies,
)
from .coloring import (
    Coloring,
    NestedSequence,
    TargetDecision,
    GREEN,
    RED,
    HALF_HALF,
    MIXED,
    target_from_sequence,
    canonicalize,
    recognize_target,
    verify_sequence,
    induced_restriction,
    contract_point,
    flat_color,
    NotAFlat,
    NotNested,
    RedContraction,
)
from .catalog import (
    SmallMatroid,
    ForbiddenWitness,
    make_uniform,
    make_direct_sum,
    make_two_sum,
    make_parallel_connection,
    make_whirl3,
    matroids_isomorphic,
    rank_tables_isomorphic,
    subset_rank_table,
    catalog,
    find_forbidden,
    line_profile_forbidden,
    UnsupportedOrder,
    WrongRegime,
)
from .harness import (
    VerificationReport,
    CompatibilityInstance,
    verify_theorem,
    sample_verify,
    has_forbidden,
    find_minimal_non_targets,
    disjoint_hyperplane_scan,
    check_compatibility_direct,
    check_compatibility_conditions,
    enumerate_compatibility_instances,
    random_target,
    random_nested_sequence,
    sequence_with_rank_profile,
    green_matroids_isomorphic,
    BudgetExceeded,
)

__version__ = "0.1.0"
