"""Plant cliques/dense subgraphs in random graphs and recover them.

The package generates seeded planted instances over a bit-packed adjacency
matrix, recovers the hidden set with a three-phase iterative degree
thresholding pipeline (plus refined, dense-model, top-degree-baseline, and
amplified variants), evaluates the closed-form rate mathematics behind the
tuning knobs, and ships a Monte Carlo harness with a CLI.
"""

from .analytics import (
    CliqueParams,
    DenseParams,
    OptimizeBudget,
    Rates,
    Schedule,
    ScheduleLevel,
    SchedulePolicy,
    StopReason,
    build_schedule,
    critical_c,
    normal_sf,
    optimize_params,
    rates_basic,
    rates_dense,
    rates_variant,
)
from .errors import (
    AmplificationExhausted,
    CoreExtractionFailed,
    DegenerateRates,
    EmptySample,
    FormatError,
    HiddenCliqueError,
    InvalidParams,
    IterationCollapse,
    NoCrossing,
    NoFeasibleParams,
    SeedTooWeak,
    SubcriticalParams,
)
from .formats import (
    load_graph,
    load_instance,
    read_bit_matrix,
    read_edges_text,
    save_instance,
    write_bit_matrix,
    write_edges_text,
)
from .graph import Graph, PlantedInstance, VertexSet, generate_planted
from .harness import (
    ExperimentConfig,
    TrialRecord,
    calibrate_constants,
    run_experiment,
    success_curve,
    tune_params,
    wilson_interval,
)
from .rng import SplitMix64, derive_seed, mix64
from .solver import (
    IterationOutcome,
    RecoveryResult,
    SolveMode,
    TraceRow,
    amplify,
    dense_recover_from_seed,
    extract_core,
    iterate_once,
    iterate_once_dense,
    iterate_once_variant,
    kucera_topk,
    recover_from_seed,
    run_phase1,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "AmplificationExhausted",
    "CliqueParams",
    "CoreExtractionFailed",
    "DegenerateRates",
    "DenseParams",
    "EmptySample",
    "ExperimentConfig",
    "FormatError",
    "Graph",
    "HiddenCliqueError",
    "InvalidParams",
    "IterationCollapse",
    "IterationOutcome",
    "NoCrossing",
    "NoFeasibleParams",
    "OptimizeBudget",
    "PlantedInstance",
    "Rates",
    "RecoveryResult",
    "Schedule",
    "ScheduleLevel",
    "SchedulePolicy",
    "SeedTooWeak",
    "SolveMode",
    "SplitMix64",
    "StopReason",
    "SubcriticalParams",
    "TraceRow",
    "TrialRecord",
    "VertexSet",
    "amplify",
    "build_schedule",
    "calibrate_constants",
    "critical_c",
    "dense_recover_from_seed",
    "derive_seed",
    "extract_core",
    "generate_planted",
    "iterate_once",
    "iterate_once_dense",
    "iterate_once_variant",
    "kucera_topk",
    "load_graph",
    "load_instance",
    "mix64",
    "normal_sf",
    "optimize_params",
    "rates_basic",
    "rates_dense",
    "rates_variant",
    "read_bit_matrix",
    "read_edges_text",
    "recover_from_seed",
    "run_experiment",
    "run_phase1",
    "save_instance",
    "solve",
    "success_curve",
    "tune_params",
    "wilson_interval",
    "write_bit_matrix",
    "write_edges_text",
]
