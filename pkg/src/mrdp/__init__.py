"""Relative divergence of grading functions on finite posets, and its maximizers."""

from .divergence import (
    PartitionModel,
    RDResult,
    rd_blocks_serial,
    rd_bundle_separable,
    rd_chain,
    rd_even_sided,
    rd_on_chain,
    rd_partition,
)
from .errors import (
    ComonotonicityError,
    ConstraintError,
    DivergenceUndefinedError,
    EnumerationLimitError,
    InputError,
    MRDPError,
    NotEvenSidedError,
    PosetError,
)
from .grading import (
    GradingFunction,
    IncrementSequence,
    additive_gf,
    increments_along,
    natural_gf,
    normalize,
    separable_gf,
    validate_grading,
)
from .poset import (
    Chain,
    ChainBundle,
    Poset,
    PosetClassification,
    VectorIndex,
    bundle_poset,
    classify,
    enumerate_maximal_chains,
    lg_enclosure,
    power_set_poset,
)
from .solvers import (
    KnotConstraints,
    PiecewiseLinearGF,
    QueueTypeParams,
    TypeDistribution,
    align_components,
    solve_cardinality_dependent,
    solve_conditional,
    solve_height_dependent,
    solve_independence,
    solve_interpolation,
    solve_type_distribution,
    solve_uniform,
)

__version__ = "0.1.0"

__all__ = [
    "additive_gf",
    "align_components",
    "bundle_poset",
    "Chain",
    "ChainBundle",
    "classify",
    "ComonotonicityError",
    "ConstraintError",
    "DivergenceUndefinedError",
    "enumerate_maximal_chains",
    "EnumerationLimitError",
    "GradingFunction",
    "increments_along",
    "IncrementSequence",
    "InputError",
    "KnotConstraints",
    "lg_enclosure",
    "MRDPError",
    "natural_gf",
    "normalize",
    "NotEvenSidedError",
    "PartitionModel",
    "PiecewiseLinearGF",
    "Poset",
    "PosetClassification",
    "PosetError",
    "power_set_poset",
    "QueueTypeParams",
    "rd_blocks_serial",
    "rd_bundle_separable",
    "rd_chain",
    "rd_even_sided",
    "rd_on_chain",
    "rd_partition",
    "RDResult",
    "separable_gf",
    "solve_cardinality_dependent",
    "solve_conditional",
    "solve_height_dependent",
    "solve_independence",
    "solve_interpolation",
    "solve_type_distribution",
    "solve_uniform",
    "TypeDistribution",
    "validate_grading",
    "VectorIndex",
]
