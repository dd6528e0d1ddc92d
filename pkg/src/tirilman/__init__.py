"""Tirilman norm toolkit: exact primal norm, dual norm, inequality suites."""

from .blocks import BlockBasis, canonical_basis
from .checks import (
    DominationReport,
    check_domination,
    check_invariance,
    check_lemma4,
    check_lemma7,
    check_oracle_dual,
    check_oracle_norm,
    check_prop1,
    check_prop2,
    check_prop3,
    domination_suite,
    symmetry_witness_search,
)
from .config import RunConfig
from .dual import DualNormResult, dual_norm, singleton_family_tree
from .dual_oracle import enumerate_facets, oracle_dual_norm
from .lp import LinearProgram, solve_small_lp
from .norm import NormResult, norming_tree, separation, ti_norm, ti_norm_level
from .norm_oracle import oracle_norm
from .params import REL_TOL, SpaceParams, make_space_params
from .prop9 import (
    ChunkDecomposition,
    Prop9Params,
    asymptotic_lq_profile,
    chunk_decompose,
    flat_dual_block,
    prop9_parameters,
)
from .reports import CheckReport
from .sampling import random_block_basis, random_vector, rng_from, sample_coefficients
from .trees import (
    Certificate,
    FlatMax,
    Leaf,
    Node,
    PartitionTree,
    evaluate_functional,
    functional_coefficients,
    make_node,
)
from .vectors import DUAL, PRIMAL, FiniteVector, IntervalPartition, combine, restrict, spread

__version__ = "0.1.0"

__all__ = [
    "BlockBasis", "canonical_basis",
    "DominationReport", "check_domination", "check_invariance", "check_lemma4",
    "check_lemma7", "check_oracle_dual", "check_oracle_norm", "check_prop1",
    "check_prop2", "check_prop3", "domination_suite", "symmetry_witness_search",
    "RunConfig",
    "DualNormResult", "dual_norm", "singleton_family_tree",
    "enumerate_facets", "oracle_dual_norm",
    "LinearProgram", "solve_small_lp",
    "NormResult", "norming_tree", "separation", "ti_norm", "ti_norm_level",
    "oracle_norm",
    "REL_TOL", "SpaceParams", "make_space_params",
    "ChunkDecomposition", "Prop9Params", "asymptotic_lq_profile",
    "chunk_decompose", "flat_dual_block", "prop9_parameters",
    "CheckReport",
    "random_block_basis", "random_vector", "rng_from", "sample_coefficients",
    "Certificate", "FlatMax", "Leaf", "Node", "PartitionTree",
    "evaluate_functional", "functional_coefficients", "make_node",
    "DUAL", "PRIMAL", "FiniteVector", "IntervalPartition", "combine",
    "restrict", "spread",
]
