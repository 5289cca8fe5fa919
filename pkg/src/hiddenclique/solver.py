"""Three-phase recovery of a planted clique or dense subgraph.

Phase 1 repeatedly shrinks the graph: sample a reference set, keep the
unsampled vertices whose degree into the sample clears a threshold, and
recurse on the survivors. The planted vertices clear the threshold more
often, so their fraction grows. Phase 2 reads the planted core out of the
shrunken graph by top-degree filtering; phase 3 expands that core back to
the full hidden set through common neighborhoods on the original graph.

Variants swap the phase-1 filter: the refined mode thresholds the sample
against itself first (a stronger signal per standard deviation), and the
dense mode recenters the threshold at the background edge probability.
Phase 1 never reads edges among the unsampled vertices, which keeps every
shrunken graph distributed like a fresh planted instance.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .analytics import (
    CliqueParams,
    DenseParams,
    Rates,
    Schedule,
    SchedulePolicy,
    rates_basic,
    rates_dense,
    rates_variant,
    build_schedule,
)
from .errors import (
    CoreExtractionFailed,
    EmptySample,
    HiddenCliqueError,
    InvalidParams,
    IterationCollapse,
    SeedTooWeak,
)
from .graph import Graph, VertexSet, _pack_bool
from .rng import SplitMix64, derive_seed

#: when set, every phase-1 filter is recomputed on a copy of the graph with
#: all edges among the candidate survivors masked out, and the two survivor
#: sets are asserted identical: the filter must only read sample edges.
DEBUG_CLOSURE_CHECK = False


class SolveMode(str, Enum):
    BASIC = "basic"
    VARIANT = "variant"
    DENSE = "dense"
    KUCERA = "kucera"
    SEEDED = "seeded"


@dataclass(frozen=True)
class IterationOutcome:
    """One shrink step: the sample drawn, who survived, and the next graph."""

    sample: VertexSet
    survivors: VertexSet
    next_graph: Graph
    index_map: np.ndarray
    n_next: int
    k_next: int | None = None


@dataclass(frozen=True)
class TraceRow:
    """Observed sizes entering one level; sample_size is None on the last row."""

    level: int
    n_alive: int
    k_alive: int | None
    sample_size: int | None


@dataclass(frozen=True)
class RecoveryResult:
    """Outcome of a recovery attempt; failures are data, not exceptions."""

    mode: SolveMode
    candidate: VertexSet | None
    core: VertexSet | None
    trace: tuple[TraceRow, ...]
    timings_ms: dict[str, float]
    success: bool | None
    failure: str | None = None
    trials: int = 1

    @property
    def ok(self) -> bool:
        return self.failure is None


def _survivor_degrees(
    graph: Graph, rest: np.ndarray, ref_words: np.ndarray
) -> np.ndarray:
    degs = graph._degrees_into(rest, ref_words)
    if DEBUG_CLOSURE_CHECK:
        masked = graph.words & ref_words[None, :]
        check = (
            np.bitwise_count(masked[rest]).sum(axis=1).astype(np.int64)
            if rest.size
            else np.zeros(0, dtype=np.int64)
        )
        assert np.array_equal(degs, check), "filter read edges outside the sample"
    return degs


def _filter_alive(
    graph: Graph,
    alive: np.ndarray,
    rng: SplitMix64,
    alpha: float,
    beta: float,
    eta: float | None,
    dense: DenseParams | None,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw the sample over the alive ids and return (sample_ids, survivor_ids).

    One uniform per alive vertex in ascending id order decides sample
    membership; survivors are the unsampled vertices whose degree into the
    reference set clears the mode's threshold. Raises EmptySample or
    IterationCollapse (level filled in by the caller).
    """
    if alive.size < 2:
        raise InvalidParams(f"iteration needs at least 2 vertices, have {alive.size}")
    if alpha * alive.size < 1.0:
        raise InvalidParams(
            f"expected sample size {alpha * alive.size:.3f} < 1; alpha too small"
        )
    us = rng.floats(alive.size)
    in_sample = us < alpha
    sample = alive[in_sample]
    rest = alive[~in_sample]
    if sample.size == 0:
        raise EmptySample("the reference sample came up empty")

    n = graph.n
    sample_bool = np.zeros(n, dtype=bool)
    sample_bool[sample] = True
    sample_words = _pack_bool(sample_bool, n)
    ref = sample
    ref_words = sample_words
    if eta is not None:
        s = sample.size
        d_in_sample = graph._degrees_into(sample, sample_words)
        keep = d_in_sample >= s / 2.0 + eta * math.sqrt(s) / 2.0
        ref = sample[keep]
        if ref.size == 0:
            raise EmptySample("the refined sample came up empty")
        ref_bool = np.zeros(n, dtype=bool)
        ref_bool[ref] = True
        ref_words = _pack_bool(ref_bool, n)

    degs = _survivor_degrees(graph, rest, ref_words)
    m = ref.size
    if dense is not None:
        threshold = dense.p * m + beta * math.sqrt(dense.p * (1.0 - dense.p) * m)
    else:
        threshold = m / 2.0 + beta * math.sqrt(m) / 2.0
    survivors = rest[degs >= threshold]
    if survivors.size == 0:
        raise IterationCollapse("no vertex cleared the survivor threshold")
    return sample, survivors


def _outcome(
    graph: Graph,
    sample: np.ndarray,
    survivors: np.ndarray,
    planted: VertexSet | None,
) -> IterationOutcome:
    survivor_set = VertexSet.from_indices(graph.n, survivors)
    next_graph, index_map = graph.induced_subgraph(survivor_set)
    k_next = None
    if planted is not None:
        k_next = len(survivor_set.intersection(planted))
    return IterationOutcome(
        sample=VertexSet.from_indices(graph.n, sample),
        survivors=survivor_set,
        next_graph=next_graph,
        index_map=index_map,
        n_next=survivors.size,
        k_next=k_next,
    )


def iterate_once(
    graph: Graph,
    alpha: float,
    beta: float,
    rng: SplitMix64,
    planted: VertexSet | None = None,
) -> IterationOutcome:
    """One shrink step of the plain algorithm.

    Samples each vertex independently with probability alpha, then keeps
    every unsampled vertex with at least |S|/2 + beta*sqrt(|S|)/2 neighbors
    in the sample S (integer degree against the real threshold, no
    rounding).
    """
    alive = np.arange(graph.n, dtype=np.int64)
    sample, survivors = _filter_alive(graph, alive, rng, alpha, beta, None, None)
    return _outcome(graph, sample, survivors, planted)


def iterate_once_variant(
    graph: Graph,
    alpha: float,
    beta: float,
    eta: float,
    rng: SplitMix64,
    planted: VertexSet | None = None,
) -> IterationOutcome:
    """One shrink step with the refined reference sample.

    The sample S is first filtered to S~ = members with at least
    |S|/2 + eta*sqrt(|S|)/2 neighbors inside S; survivors then need
    |S~|/2 + beta*sqrt(|S~|)/2 neighbors in S~.
    """
    alive = np.arange(graph.n, dtype=np.int64)
    sample, survivors = _filter_alive(graph, alive, rng, alpha, beta, eta, None)
    return _outcome(graph, sample, survivors, planted)


def iterate_once_dense(
    graph: Graph,
    alpha: float,
    beta: float,
    dense: DenseParams,
    rng: SplitMix64,
    planted: VertexSet | None = None,
) -> IterationOutcome:
    """One shrink step in the dense model: threshold recentered at p|S|."""
    alive = np.arange(graph.n, dtype=np.int64)
    sample, survivors = _filter_alive(graph, alive, rng, alpha, beta, None, dense)
    return _outcome(graph, sample, survivors, planted)


def _phase1_masked(
    graph: Graph,
    schedule: Schedule,
    params: CliqueParams,
    rng: SplitMix64,
    mode: SolveMode,
    dense: DenseParams | None,
    planted: VertexSet | None,
) -> tuple[np.ndarray, list[TraceRow]]:
    """Run the shrink iterations tracking alive ids in the original universe.

    Equivalent to composing iterate_once on materialized subgraphs (the
    uniform draws align because local ids enumerate alive ids in sorted
    order), but skips building the intermediate graphs.
    """
    alive = np.arange(graph.n, dtype=np.int64)
    planted_bool = planted.to_bool() if planted is not None else None
    trace: list[TraceRow] = []
    eta = params.eta if mode is SolveMode.VARIANT else None
    for level in range(schedule.t):
        k_alive = int(planted_bool[alive].sum()) if planted_bool is not None else None
        try:
            sample, survivors = _filter_alive(
                graph, alive, rng, params.alpha, params.beta, eta, dense
            )
        except IterationCollapse as exc:
            raise IterationCollapse(f"{exc} (level {level})", level=level) from None
        trace.append(TraceRow(level, alive.size, k_alive, sample.size))
        alive = survivors
    k_alive = int(planted_bool[alive].sum()) if planted_bool is not None else None
    trace.append(TraceRow(schedule.t, alive.size, k_alive, None))
    return alive, trace


def run_phase1(
    graph: Graph,
    k: int,
    params: CliqueParams,
    schedule: Schedule,
    rng: SplitMix64,
    mode: SolveMode | str = SolveMode.BASIC,
    dense: DenseParams | None = None,
    planted: VertexSet | None = None,
) -> tuple[Graph, list[TraceRow], np.ndarray]:
    """Apply the shrink step schedule.t times.

    Returns the final graph, the per-level trace, and the cumulative index
    map (new id -> original id). Collapse surfaces as IterationCollapse
    carrying the level index.
    """
    mode = SolveMode(mode)
    if mode not in (SolveMode.BASIC, SolveMode.VARIANT, SolveMode.DENSE):
        raise InvalidParams(f"run_phase1 does not apply to mode {mode.value!r}")
    if mode is SolveMode.VARIANT and params.eta is None:
        raise InvalidParams("variant mode needs params.eta")
    if mode is SolveMode.DENSE and dense is None:
        raise InvalidParams("dense mode needs DenseParams")
    if k < 0 or k > graph.n:
        raise InvalidParams(f"k={k} out of range for n={graph.n}")
    dense_arg = dense if mode is SolveMode.DENSE else None
    alive, trace = _phase1_masked(graph, schedule, params, rng, mode, dense_arg, planted)
    final_graph, index_map = graph.induced_subgraph(
        VertexSet.from_indices(graph.n, alive)
    )
    return final_graph, trace, index_map


def extract_core(g_t: Graph, k_t: int, dense: DenseParams | None = None) -> VertexSet:
    """Read the planted core out of the shrunken graph.

    Takes the k_t largest-degree vertices as a reference block, then keeps
    every vertex with at least 3/4 * k_t neighbors in it (dense model:
    (p+q)/2 * k_t). The result is a subset of g_t's universe.
    """
    if k_t < 1 or k_t > g_t.n:
        raise InvalidParams(f"k_t={k_t} out of range for n={g_t.n}")
    block = g_t.top_k_by_degree(VertexSet.full(g_t.n), k_t)
    threshold = (0.5 * (dense.p + dense.q) if dense is not None else 0.75) * k_t
    all_ids = np.arange(g_t.n, dtype=np.int64)
    degs = g_t._degrees_into(all_ids, block.words)
    core = all_ids[degs >= threshold]
    if core.size == 0:
        raise CoreExtractionFailed("no vertex had enough neighbors in the top-degree block")
    return VertexSet.from_indices(g_t.n, core)


def recover_from_seed(graph: Graph, seed_set: VertexSet, k: int) -> VertexSet:
    """Expand a subset of the hidden clique to a full k-candidate.

    Restricts to the seed plus its common neighbors and returns the k
    largest-degree vertices there, mapped back to original ids.
    """
    if len(seed_set) == 0:
        raise InvalidParams("seed set must be nonempty")
    if k > graph.n:
        raise InvalidParams(f"k={k} exceeds n={graph.n}")
    neighborhood = graph.common_neighborhood(seed_set)
    restricted = seed_set.union(neighborhood)
    sub, index_map = graph.induced_subgraph(restricted)
    if sub.n < k:
        raise SeedTooWeak(
            f"seed plus common neighbors has {sub.n} vertices, need {k}"
        )
    top = sub.top_k_by_degree(VertexSet.full(sub.n), k)
    return VertexSet.from_indices(graph.n, index_map[top.indices()])


def dense_recover_from_seed(
    graph: Graph, seed_set: VertexSet, k: int, dense: DenseParams
) -> VertexSet:
    """Expand a dense-model core by midpoint-threshold degree tests."""
    if len(seed_set) == 0:
        raise InvalidParams("seed set must be nonempty")
    if k > graph.n:
        raise InvalidParams(f"k={k} exceeds n={graph.n}")
    mid = 0.5 * (dense.p + dense.q)
    all_ids = np.arange(graph.n, dtype=np.int64)
    d_seed = graph._degrees_into(all_ids, seed_set.words)
    block = VertexSet.from_indices(
        graph.n, all_ids[d_seed >= mid * len(seed_set)]
    ).union(seed_set)
    d_block = graph._degrees_into(all_ids, block.words)
    candidate = all_ids[d_block >= mid * k]
    if candidate.size == 0:
        raise SeedTooWeak("no vertex cleared the midpoint threshold against the block")
    return VertexSet.from_indices(graph.n, candidate)


def kucera_topk(graph: Graph, k: int) -> VertexSet:
    """Baseline: the k highest-degree vertices of the whole graph."""
    if k > graph.n:
        raise InvalidParams(f"k={k} exceeds n={graph.n}")
    return graph.top_k_by_degree(VertexSet.full(graph.n), k)


def _rates_for(params: CliqueParams, mode: SolveMode, dense: DenseParams | None) -> Rates:
    if mode is SolveMode.VARIANT:
        if params.eta is None:
            raise InvalidParams("variant mode needs params.eta")
        return rates_variant(params.alpha, params.beta, params.eta, params.c)
    if mode is SolveMode.DENSE:
        if dense is None:
            raise InvalidParams("dense mode needs DenseParams")
        return rates_dense(params.alpha, params.beta, params.c, dense)
    return rates_basic(params.alpha, params.beta, params.c)


def solve(
    graph: Graph,
    k: int,
    params: CliqueParams | None,
    mode: SolveMode | str = SolveMode.BASIC,
    seed: int = 0,
    planted: VertexSet | None = None,
    dense: DenseParams | None = None,
    policy: SchedulePolicy | None = None,
) -> RecoveryResult:
    """Run the full recovery pipeline and report the outcome as data.

    Builds the schedule from the rates (raising SubcriticalParams before
    any graph work if growth <= 1), runs phase 1, extracts the core with
    the scheduled size estimate, and expands it on the original graph.
    Phase errors do not raise: the result carries the failing phase tag.
    success is filled only when the planted set is supplied.

    The kucera mode skips all three phases and just takes the k top-degree
    vertices.
    """
    mode = SolveMode(mode)
    if k < 0 or k > graph.n:
        raise InvalidParams(f"k={k} out of range for n={graph.n}")

    t_start = time.perf_counter()
    timings = {"phase1_ms": 0.0, "phase2_ms": 0.0, "phase3_ms": 0.0, "total_ms": 0.0}

    def finish(
        candidate: VertexSet | None,
        core: VertexSet | None,
        trace: list[TraceRow],
        failure: str | None,
    ) -> RecoveryResult:
        timings["total_ms"] = (time.perf_counter() - t_start) * 1e3
        success: bool | None = None
        if planted is not None:
            success = failure is None and candidate == planted
        return RecoveryResult(
            mode=mode,
            candidate=candidate,
            core=core,
            trace=tuple(trace),
            timings_ms=timings,
            success=success,
            failure=failure,
        )

    if mode is SolveMode.KUCERA:
        candidate = kucera_topk(graph, k)
        k0 = len(planted) if planted is not None else None
        trace = [TraceRow(0, graph.n, k0, None)]
        return finish(candidate, None, trace, None)
    if mode is SolveMode.SEEDED:
        raise InvalidParams("seeded recovery goes through recover_from_seed")
    if params is None:
        raise InvalidParams(f"mode {mode.value!r} needs CliqueParams")

    rates = _rates_for(params, mode, dense)
    schedule = build_schedule(graph.n, k, rates, policy)  # may raise SubcriticalParams
    rng = SplitMix64(seed)
    dense_arg = dense if mode is SolveMode.DENSE else None

    trace: list[TraceRow] = []
    p1 = time.perf_counter()
    try:
        alive, trace = _phase1_masked(
            graph, schedule, params, rng, mode, dense_arg, planted
        )
    except HiddenCliqueError as exc:
        timings["phase1_ms"] = (time.perf_counter() - p1) * 1e3
        return finish(None, None, trace, f"phase1:{type(exc).__name__}:{exc}")
    timings["phase1_ms"] = (time.perf_counter() - p1) * 1e3

    p2 = time.perf_counter()
    try:
        g_t, index_map = graph.induced_subgraph(
            VertexSet.from_indices(graph.n, alive)
        )
        core_local = extract_core(g_t, schedule.k_final, dense_arg)
        core = VertexSet.from_indices(graph.n, index_map[core_local.indices()])
        if len(core) < 2:
            raise CoreExtractionFailed(f"core has {len(core)} < 2 vertices")
    except HiddenCliqueError as exc:
        timings["phase2_ms"] = (time.perf_counter() - p2) * 1e3
        return finish(None, None, trace, f"phase2:{type(exc).__name__}:{exc}")
    timings["phase2_ms"] = (time.perf_counter() - p2) * 1e3

    p3 = time.perf_counter()
    try:
        if len(core) <= math.log2(graph.n) + 1.0:
            raise SeedTooWeak(
                f"core of {len(core)} vertices is not above log2(n)+1"
            )
        if mode is SolveMode.DENSE:
            candidate = dense_recover_from_seed(graph, core, k, dense)
        else:
            candidate = recover_from_seed(graph, core, k)
    except HiddenCliqueError as exc:
        timings["phase3_ms"] = (time.perf_counter() - p3) * 1e3
        return finish(None, core, trace, f"phase3:{type(exc).__name__}:{exc}")
    timings["phase3_ms"] = (time.perf_counter() - p3) * 1e3

    return finish(candidate, core, trace, None)


def amplify(
    graph: Graph,
    k: int,
    r: int,
    params: CliqueParams,
    seed: int = 0,
    max_trials: int = 100,
    mode: SolveMode | str = SolveMode.BASIC,
    planted: VertexSet | None = None,
    dense: DenseParams | None = None,
    policy: SchedulePolicy | None = None,
) -> RecoveryResult:
    """Boost the effective clique constant by common-neighborhood restriction.

    Each trial samples r distinct vertices, restricts the graph to them
    plus their common neighborhood, and runs the full pipeline there with
    the same clique size k. A candidate counts only if it has exactly k
    vertices and is a clique in the original graph; the first verified
    candidate wins. When the r sampled vertices all land in the hidden
    clique the restriction keeps roughly n/2^r vertices but the whole
    clique, raising the effective constant by about 2^(r/2).
    """
    mode = SolveMode(mode)
    if r < 1:
        raise InvalidParams(f"r={r} must be at least 1")
    if k < r:
        raise InvalidParams(f"k={k} must be at least r={r}")
    if max_trials < 1:
        raise InvalidParams("max_trials must be at least 1")

    t_start = time.perf_counter()
    rng = SplitMix64(seed)
    last_trace: tuple[TraceRow, ...] = ()
    for trial in range(1, max_trials + 1):
        picks: list[int] = []
        while len(picks) < r:
            v = rng.next_below(graph.n)
            if v not in picks:
                picks.append(v)
        anchor = VertexSet.from_indices(graph.n, picks)
        restricted = anchor.union(graph.common_neighborhood(anchor))
        if len(restricted) < max(2, k):
            continue
        sub, index_map = graph.induced_subgraph(restricted)
        try:
            inner = solve(
                sub,
                k,
                params,
                mode=mode,
                seed=derive_seed(seed, trial),
                dense=dense,
                policy=policy,
            )
        except HiddenCliqueError:
            continue
        if not inner.ok or inner.candidate is None:
            last_trace = inner.trace
            continue
        candidate = VertexSet.from_indices(
            graph.n, index_map[inner.candidate.indices()]
        )
        if len(candidate) == k and graph.is_clique(candidate):
            timings = dict(inner.timings_ms)
            timings["total_ms"] = (time.perf_counter() - t_start) * 1e3
            success = candidate == planted if planted is not None else None
            core = None
            if inner.core is not None:
                core = VertexSet.from_indices(graph.n, index_map[inner.core.indices()])
            return RecoveryResult(
                mode=mode,
                candidate=candidate,
                core=core,
                trace=inner.trace,
                timings_ms=timings,
                success=success,
                trials=trial,
            )
    total = (time.perf_counter() - t_start) * 1e3
    return RecoveryResult(
        mode=mode,
        candidate=None,
        core=None,
        trace=last_trace,
        timings_ms={"phase1_ms": 0.0, "phase2_ms": 0.0, "phase3_ms": 0.0, "total_ms": total},
        success=False if planted is not None else None,
        failure="AmplificationExhausted",
        trials=max_trials,
    )
