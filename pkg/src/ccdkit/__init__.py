"""Conservative continuous collision detection for linearly moving primitives.

The package answers, with zero false negatives, whether a vertex hits a
triangle or an edge hits an edge during one linear motion step, optionally
keeping a minimum separation.  The main solver bisects the (t, u, v)
domain with an exact range hull of the gap function at the eight box
corners, plus floating-point filters that make every classification safe
in plain binary64.

Layout:

- core:       query and result types, scalar gap-function evaluation
- inclusion:  corner range hulls, filter constants, box classification
- solver:     the bisection solver (numba-compiled kernel underneath)
- baselines:  interval-arithmetic bisection and the cubic-root method
- oracle:     exact rational certificates for testing and ground truth
- dataset:    rational CSV query format, handcrafted and random corpora
- bench:      timing and verdict-accounting harness (CLI: ccd-bench)
- scene:      mesh broad phase, active sets, line-search step bounds
"""

from .baselines import (
    IntervalScalar,
    UnivariateResult,
    UnivariateVerdict,
    cubic_roots,
    irf_solve,
    univariate_solve,
)
from .core import (
    CCDResult,
    DomainBox,
    Query,
    QueryKind,
    SolverConfig,
    Vec3,
    coplanarity_cubic,
    eval_F,
    eval_F_ee,
    eval_F_vf,
)
from .dataset import (
    DatasetError,
    LabeledQuery,
    Profile,
    Provenance,
    gen_handcrafted,
    gen_random,
    parse_queries,
    write_queries,
)
from .inclusion import (
    BoxClass,
    FilterEps,
    InclusionBox,
    box_inclusion,
    classify_box,
    compute_filters,
    compute_gamma,
    kappas,
)
from .oracle import (
    NoRoot,
    Root,
    Undetermined,
    certify_no_root,
    isolate_cubic_roots,
    rational_eval_F,
    refine_root_interval,
    to_rat,
)
from .scene import (
    CandidateBound,
    ContactCandidate,
    InfeasibleStepError,
    LineSearchResult,
    TriMeshPair,
    broad_phase,
    construct_active_set,
    edges_from_triangles,
    line_search_step,
    load_obj,
    primitive_distance_lb,
)
from .solver import solve, warm_up
from .bench import BenchReport, MethodStats, run_benchmark

__version__ = "0.1.0"

__all__ = [
    "BenchReport",
    "BoxClass",
    "CCDResult",
    "CandidateBound",
    "ContactCandidate",
    "DatasetError",
    "DomainBox",
    "FilterEps",
    "InclusionBox",
    "InfeasibleStepError",
    "IntervalScalar",
    "LabeledQuery",
    "LineSearchResult",
    "MethodStats",
    "NoRoot",
    "Profile",
    "Provenance",
    "Query",
    "QueryKind",
    "Root",
    "SolverConfig",
    "TriMeshPair",
    "Undetermined",
    "UnivariateResult",
    "UnivariateVerdict",
    "Vec3",
    "box_inclusion",
    "broad_phase",
    "certify_no_root",
    "classify_box",
    "compute_filters",
    "compute_gamma",
    "construct_active_set",
    "coplanarity_cubic",
    "cubic_roots",
    "edges_from_triangles",
    "eval_F",
    "eval_F_ee",
    "eval_F_vf",
    "gen_handcrafted",
    "gen_random",
    "irf_solve",
    "isolate_cubic_roots",
    "kappas",
    "line_search_step",
    "load_obj",
    "parse_queries",
    "primitive_distance_lb",
    "rational_eval_F",
    "refine_root_interval",
    "run_benchmark",
    "solve",
    "to_rat",
    "univariate_solve",
    "warm_up",
    "write_queries",
]
