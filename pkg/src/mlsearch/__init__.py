"""Budgeted search and enumeration over implicit set systems.

The library turns an extension oracle (decide whether a partial pick
grows into a member using at most a given number of additions) into
full searches: randomized guessing with calibrated repetition counts, a
derandomized sweep over subset-cover families, minimization, and
enumeration of all minimal members.  Three backends ship: hitting sets
of bounded width, minimum-ones CNF models, and feedback vertex sets in
tournaments.

Environment knobs: MLS_KERNELS selects the compiled or pure-Python
kernels (auto, numba, python); MLS_CACHE_DIR persists built families.
"""

from .core import (
    EMPTY_SET,
    MAX_UNIVERSE,
    BranchStats,
    BudgetExceedsUniverse,
    DuplicateArc,
    ElementOutOfRange,
    ElementSet,
    ExtensionOutcome,
    ExtensionQuery,
    ImplicitSetSystem,
    IncompleteTournament,
    InvalidParams,
    MlsError,
    Mode,
    NoSolution,
    NotUniform,
    ParseError,
    SystemContract,
    TooLarge,
    UniverseInfo,
)
from .driver import (
    MinimizeResult,
    SearchResult,
    deterministic_search,
    free_elements,
    minimize,
    randomized_search,
    uniform_t_subset,
)
from .enumeration import (
    FamilyCensus,
    UniformityReport,
    UniformSlice,
    check_counting_bound,
    check_uniformity,
    enumerate_all,
    enumerate_slice,
    iter_all_minimal,
)
from .family import (
    BucketHashFamily,
    CoveringReport,
    FamilyCache,
    SetInclusionFamily,
    build_bucketed,
    build_greedy,
    default_cache,
    kappa,
    load_family,
    pairwise_family,
    save_family,
    verify_covering,
)
from .generators import random_hitting_set, random_min_ones_cnf, random_tournament
from .oracle import (
    BruteForceReport,
    brute_enumerate_minimal,
    brute_minimum_size,
    brute_subset_search,
)
from .problems import (
    PROBLEM_NAMES,
    CnfInstance,
    HittingSetInstance,
    TournamentInstance,
    extend_hitting_set,
    extend_min_ones_cnf,
    extend_tournament_fvs,
    parse_dimacs_cnf,
    parse_hitting_set,
    parse_instance,
    parse_tournament,
    to_min_ones_cnf,
)
from .schedule import (
    SearchSchedule,
    SplitPlan,
    analytic_split,
    build_schedule,
    choose_split,
    split_objective,
    success_probability,
)

__version__ = "0.1.0"

__all__ = [
    "EMPTY_SET",
    "MAX_UNIVERSE",
    "PROBLEM_NAMES",
    "BranchStats",
    "BruteForceReport",
    "BucketHashFamily",
    "BudgetExceedsUniverse",
    "CnfInstance",
    "CoveringReport",
    "DuplicateArc",
    "ElementOutOfRange",
    "ElementSet",
    "ExtensionOutcome",
    "ExtensionQuery",
    "FamilyCache",
    "FamilyCensus",
    "HittingSetInstance",
    "ImplicitSetSystem",
    "IncompleteTournament",
    "InvalidParams",
    "MinimizeResult",
    "MlsError",
    "Mode",
    "NoSolution",
    "NotUniform",
    "ParseError",
    "SearchResult",
    "SearchSchedule",
    "SetInclusionFamily",
    "SplitPlan",
    "SystemContract",
    "TooLarge",
    "TournamentInstance",
    "UniformSlice",
    "UniformityReport",
    "UniverseInfo",
    "analytic_split",
    "brute_enumerate_minimal",
    "brute_minimum_size",
    "brute_subset_search",
    "build_bucketed",
    "build_greedy",
    "build_schedule",
    "check_counting_bound",
    "check_uniformity",
    "choose_split",
    "default_cache",
    "deterministic_search",
    "enumerate_all",
    "enumerate_slice",
    "extend_hitting_set",
    "extend_min_ones_cnf",
    "extend_tournament_fvs",
    "free_elements",
    "iter_all_minimal",
    "kappa",
    "load_family",
    "minimize",
    "parse_dimacs_cnf",
    "pairwise_family",
    "parse_hitting_set",
    "parse_instance",
    "parse_tournament",
    "random_hitting_set",
    "random_min_ones_cnf",
    "random_tournament",
    "randomized_search",
    "save_family",
    "split_objective",
    "success_probability",
    "uniform_t_subset",
    "verify_covering",
]
