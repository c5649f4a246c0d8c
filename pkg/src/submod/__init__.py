"""Monotone submodular maximization under a matroid constraint.

A deterministic split-and-grow solver with a worst-case guarantee
strictly above one half (0.5008 at the default mixing point), its
randomized counterpart, baseline greedies, the bipartite matching engine
behind the derandomization, concrete instance families, and a
brute-force toolkit that verifies every guarantee on small instances.
"""

from .core import (
    ElementSet,
    InternalInvariantError,
    Matroid,
    OracleCounts,
    SetFunction,
    canonical,
    contract,
    is_base,
    marginal_function,
)
from .instances import (
    FUNCTION_KINDS,
    MATROID_KINDS,
    FunctionSpec,
    Instance,
    InstanceFormatError,
    MatroidSpec,
    build,
    enumerate_small_instances,
    load,
    random_instance,
    save,
)
from .matching import (
    InfeasibleMatchingError,
    Matching,
    WeightedBipartiteGraph,
    max_weight_perfect_matching,
)
from .algorithms import (
    ALGORITHMS,
    DEFAULT_X,
    Parameters,
    RunReport,
    SplitResult,
    classical_greedy,
    gain_curve,
    marginal_table,
    max_weight_base,
    parameters,
    rp_greedy,
    rr_greedy,
    solve,
    split,
    split_and_grow,
    split_and_grow_deterministic,
)
from .testkit import (
    TOLERANCE,
    BijectionWitness,
    BudgetExceededError,
    ExpectationLeaf,
    ExpectationNode,
    ExpectationTree,
    ValidationReport,
    bases_within,
    brute_force_opt,
    brute_force_perfect_matching,
    exchange_bijection,
    iter_bases,
    rr_greedy_exact_expectation,
    split_partition_witness,
    validate_matroid_axioms,
    validate_monotone_submodular,
    verify_exchange_bijection,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "DEFAULT_X",
    "FUNCTION_KINDS",
    "MATROID_KINDS",
    "TOLERANCE",
    "BijectionWitness",
    "BudgetExceededError",
    "ElementSet",
    "ExpectationLeaf",
    "ExpectationNode",
    "ExpectationTree",
    "FunctionSpec",
    "InfeasibleMatchingError",
    "Instance",
    "InstanceFormatError",
    "InternalInvariantError",
    "Matching",
    "Matroid",
    "MatroidSpec",
    "OracleCounts",
    "Parameters",
    "RunReport",
    "SetFunction",
    "SplitResult",
    "ValidationReport",
    "WeightedBipartiteGraph",
    "bases_within",
    "brute_force_opt",
    "brute_force_perfect_matching",
    "build",
    "canonical",
    "classical_greedy",
    "contract",
    "enumerate_small_instances",
    "exchange_bijection",
    "gain_curve",
    "is_base",
    "iter_bases",
    "load",
    "marginal_function",
    "marginal_table",
    "max_weight_base",
    "max_weight_perfect_matching",
    "parameters",
    "random_instance",
    "rp_greedy",
    "rr_greedy",
    "rr_greedy_exact_expectation",
    "save",
    "solve",
    "split",
    "split_and_grow",
    "split_and_grow_deterministic",
    "split_partition_witness",
    "validate_matroid_axioms",
    "validate_monotone_submodular",
    "verify_exchange_bijection",
]
