"""Seeded Monte Carlo experiments over planted instances, plus calibration.

Trials are pure functions of their derived seed, so any (cell, trial) pair
can be replayed in isolation and the output is identical no matter how many
workers ran it. Result rows are canonicalized by (cell, trial) before
writing. Wall-clock timings ride along in the rows but carry no determinism
guarantee; runs that need byte-identical files disable them.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .analytics import (
    CliqueParams,
    DenseParams,
    OptimizeBudget,
    Rates,
    SchedulePolicy,
    critical_c,
    optimize_params,
    rates_basic,
    rates_variant,
)
from .errors import HiddenCliqueError, InvalidParams, NoFeasibleParams
from .graph import generate_planted
from .rng import derive_seed
from .solver import RecoveryResult, SolveMode, amplify, solve

CSV_VERSION = "hcl-v1"

#: column order is versioned; timing columns stay last so deterministic
#: prefixes survive timing churn
CSV_COLUMNS = (
    "cell",
    "trial",
    "n",
    "k",
    "c",
    "p",
    "q",
    "alpha",
    "beta",
    "eta",
    "t",
    "seed",
    "success",
    "overlap",
    "failure",
    "phase1_ms",
    "phase2_ms",
    "phase3_ms",
    "total_ms",
)
_TIMING_COLUMNS = ("phase1_ms", "phase2_ms", "phase3_ms", "total_ms")

#: published operating points used to cross-check calibration output
REFERENCE_POINTS = {
    "basic": {"alpha": 0.3728, "beta": 0.72, "c": 1.65},
    "variant": {"alpha": 0.8, "beta": 2.3, "eta": 1.2, "c": 1.261},
}

_Z95 = 1.959963984540054


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (95% by default)."""
    if trials <= 0:
        raise InvalidParams("trials must be positive")
    if not 0 <= successes <= trials:
        raise InvalidParams("successes must lie in [0, trials]")
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class Cell:
    """One grid point of an experiment."""

    index: int
    n: int
    k: int
    c: float | None
    p: float
    q: float
    params: CliqueParams | None
    tune_failure: str | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    """Grid, trial count, seeding, and output for one experiment run.

    Exactly one of c_values / k_values sets the planted size per n. With
    params=None every cell auto-tunes (growth-maximizing knobs constrained
    so at least one iteration fits above the schedule floor).
    """

    mode: str = "basic"
    n_values: tuple[int, ...] = (1000,)
    c_values: tuple[float, ...] | None = (3.0,)
    k_values: tuple[int, ...] | None = None
    p_values: tuple[float, ...] = (0.5,)
    q_values: tuple[float, ...] = (1.0,)
    params: CliqueParams | None = None
    trials: int = 100
    master_seed: int = 0
    workers: int = 1
    output: str | None = None
    fmt: str = "csv"
    r: int = 2
    max_trials: int = 100
    include_timings: bool = True
    policy: SchedulePolicy = field(default_factory=SchedulePolicy)

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidParams("trials must be at least 1")
        if self.workers < 1:
            raise InvalidParams("workers must be at least 1")
        if (self.c_values is None) == (self.k_values is None):
            raise InvalidParams("exactly one of c_values / k_values must be given")
        if not self.n_values:
            raise InvalidParams("grid must contain at least one n")
        if self.fmt not in ("csv", "json"):
            raise InvalidParams(f"unknown output format {self.fmt!r}")
        if self.mode not in ("basic", "variant", "dense", "kucera", "amplify"):
            raise InvalidParams(f"unknown experiment mode {self.mode!r}")

    @classmethod
    def from_json(cls, text: str) -> ExperimentConfig:
        raw = json.loads(text)
        if "params" in raw and raw["params"] is not None:
            raw["params"] = CliqueParams(**raw["params"])
        if "policy" in raw and raw["policy"] is not None:
            raw["policy"] = SchedulePolicy(**raw["policy"])
        for key in ("n_values", "c_values", "k_values", "p_values", "q_values"):
            if raw.get(key) is not None:
                raw[key] = tuple(raw[key])
        return cls(**raw)


@dataclass(frozen=True)
class TrialRecord:
    """One row of experiment output."""

    cell: int
    trial: int
    n: int
    k: int
    c: float | None
    p: float
    q: float
    alpha: float | None
    beta: float | None
    eta: float | None
    t: int
    seed: int
    success: bool
    overlap: int
    failure: str | None
    phase1_ms: float
    phase2_ms: float
    phase3_ms: float
    total_ms: float


def trial_seed(master_seed: int, cell_index: int, trial_index: int) -> int:
    """Instance seed for one (cell, trial); the solver seed is its successor."""
    return derive_seed(master_seed, cell_index, trial_index)


def tune_params(
    mode: str,
    c: float,
    n: int | None = None,
    dense: DenseParams | None = None,
    policy: SchedulePolicy | None = None,
    budget: OptimizeBudget | None = None,
) -> tuple[CliqueParams, Rates]:
    """Growth-maximizing knobs for a clique constant, floor-aware when n is known.

    Unconstrained growth maximization can shrink the graph below the
    schedule floor in one step at desk scale; when n is given the grid is
    restricted to tau * n >= n_floor so phase 1 actually iterates, falling
    back to the unconstrained optimum when nothing satisfies the floor.
    """
    policy = policy or SchedulePolicy()
    min_tau = policy.n_floor / n if n else 0.0
    try:
        return optimize_params(c, mode=mode, budget=budget, dense=dense, min_tau=min_tau)
    except NoFeasibleParams:
        if min_tau == 0.0:
            raise
        return optimize_params(c, mode=mode, budget=budget, dense=dense, min_tau=0.0)


def _build_cells(config: ExperimentConfig) -> list[Cell]:
    cells = []
    index = 0
    sizes = config.c_values if config.c_values is not None else config.k_values
    for n in config.n_values:
        for size in sizes:
            for p in config.p_values:
                for q in config.q_values:
                    if config.c_values is not None:
                        c = float(size)
                        k = int(round(c * math.sqrt(n)))
                    else:
                        c, k = None, int(size)
                    cells.append(
                        Cell(index=index, n=n, k=k, c=c, p=p, q=q, params=config.params)
                    )
                    index += 1
    if not cells:
        raise InvalidParams("experiment grid is empty")
    return cells


def _tuned_cell(cell: Cell, config: ExperimentConfig) -> Cell:
    if cell.params is not None or config.mode == "kucera":
        return cell
    c_eff = cell.c if cell.c is not None else cell.k / math.sqrt(cell.n)
    n_eff = cell.n
    mode = config.mode
    if mode == "amplify":
        # the inner pipeline sees the restricted graph: roughly n/2^r
        # vertices with the clique intact, so the constant gains 2^(r/2);
        # restricted instances are small, let the schedule caps govern
        mode = "basic"
        c_eff *= 2.0 ** (config.r / 2.0)
        n_eff = None
    dense = DenseParams(cell.p, cell.q) if mode == "dense" else None
    try:
        params, _ = tune_params(mode, c_eff, n=n_eff, dense=dense, policy=config.policy)
    except NoFeasibleParams:
        # subcritical constant: the cell stays in the grid, its trials fail
        return replace(cell, tune_failure="NoFeasibleParams")
    return replace(cell, params=params)


def _failed_record(cell: Cell, trial_index: int, seed: int, failure: str) -> TrialRecord:
    params = cell.params
    return TrialRecord(
        cell=cell.index,
        trial=trial_index,
        n=cell.n,
        k=cell.k,
        c=cell.c,
        p=cell.p,
        q=cell.q,
        alpha=params.alpha if params else None,
        beta=params.beta if params else None,
        eta=params.eta if params else None,
        t=0,
        seed=seed,
        success=False,
        overlap=0,
        failure=failure,
        phase1_ms=0.0,
        phase2_ms=0.0,
        phase3_ms=0.0,
        total_ms=0.0,
    )


def run_trial(cell: Cell, trial_index: int, config: ExperimentConfig) -> TrialRecord:
    """Execute one (cell, trial): regenerate the instance and recover.

    Errors raised by the pipeline (subcritical or untunable parameters,
    out-of-range sizes) become failure rows so a sweep over a regime
    boundary keeps running.
    """
    seed = trial_seed(config.master_seed, cell.index, trial_index)
    if cell.params is None and config.mode != "kucera":
        return _failed_record(cell, trial_index, seed, cell.tune_failure or "NoParams")
    inst = generate_planted(cell.n, cell.k, cell.p, cell.q, seed)
    solver_seed = derive_seed(seed, 1)
    dense = DenseParams(cell.p, cell.q) if config.mode == "dense" else None

    result: RecoveryResult
    try:
        if config.mode == "amplify":
            result = amplify(
                inst.graph,
                cell.k,
                config.r,
                cell.params,
                seed=solver_seed,
                max_trials=config.max_trials,
                planted=inst.planted,
                policy=config.policy,
            )
        else:
            result = solve(
                inst.graph,
                cell.k,
                cell.params,
                mode=config.mode,
                seed=solver_seed,
                planted=inst.planted,
                dense=dense,
                policy=config.policy,
            )
    except HiddenCliqueError as exc:
        return _failed_record(cell, trial_index, seed, type(exc).__name__)

    overlap = 0
    if result.candidate is not None:
        overlap = len(result.candidate.intersection(inst.planted))
    t_iter = max(0, len(result.trace) - 1)
    params = cell.params
    timings = result.timings_ms if config.include_timings else {}
    return TrialRecord(
        cell=cell.index,
        trial=trial_index,
        n=cell.n,
        k=cell.k,
        c=cell.c,
        p=cell.p,
        q=cell.q,
        alpha=params.alpha if params else None,
        beta=params.beta if params else None,
        eta=params.eta if params else None,
        t=t_iter,
        seed=seed,
        success=bool(result.success),
        overlap=overlap,
        failure=result.failure,
        phase1_ms=timings.get("phase1_ms", 0.0),
        phase2_ms=timings.get("phase2_ms", 0.0),
        phase3_ms=timings.get("phase3_ms", 0.0),
        total_ms=timings.get("total_ms", 0.0),
    )


def _run_trial_packed(args: tuple[Cell, int, ExperimentConfig]) -> TrialRecord:
    return run_trial(*args)


def run_experiment(config: ExperimentConfig) -> list[TrialRecord]:
    """Run every cell x trial exactly once; rows come back in canonical order.

    Output rows depend only on the master seed and the grid. When
    config.output is set the rows (plus a per-cell summary block) are
    written as CSV or JSON.
    """
    cells = [_tuned_cell(cell, config) for cell in _build_cells(config)]
    tasks = [(cell, t, config) for cell in cells for t in range(config.trials)]
    if config.workers == 1:
        records = [_run_trial_packed(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_run_trial_packed, tasks, chunksize=8))
    records.sort(key=lambda r: (r.cell, r.trial))
    if config.output is not None:
        write_records(records, cells, config)
    return records


def summarize(records: list[TrialRecord], cells: list[Cell]) -> list[dict]:
    """Per-cell success rate with its Wilson 95% interval."""
    out = []
    for cell in cells:
        rows = [r for r in records if r.cell == cell.index]
        if not rows:
            continue
        wins = sum(r.success for r in rows)
        lo, hi = wilson_interval(wins, len(rows))
        out.append(
            {
                "cell": cell.index,
                "n": cell.n,
                "k": cell.k,
                "c": cell.c,
                "p": cell.p,
                "q": cell.q,
                "trials": len(rows),
                "successes": int(wins),
                "rate": wins / len(rows),
                "wilson_lo": lo,
                "wilson_hi": hi,
            }
        )
    return out


def _format_field(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def records_to_csv(records: list[TrialRecord], summary: list[dict]) -> str:
    lines = [f"# {CSV_VERSION}", ",".join(CSV_COLUMNS)]
    for r in records:
        lines.append(",".join(_format_field(getattr(r, col)) for col in CSV_COLUMNS))
    for s in summary:
        body = " ".join(f"{k}={_format_field(v)}" for k, v in s.items())
        lines.append(f"# summary {body}")
    return "\n".join(lines) + "\n"


def records_to_json(records: list[TrialRecord], summary: list[dict]) -> str:
    payload = {
        "version": CSV_VERSION,
        "columns": list(CSV_COLUMNS),
        "rows": [[getattr(r, col) for col in CSV_COLUMNS] for r in records],
        "summary": summary,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_records(
    records: list[TrialRecord], cells: list[Cell], config: ExperimentConfig
) -> Path:
    path = Path(config.output)
    summary = summarize(records, cells)
    text = (
        records_to_csv(records, summary)
        if config.fmt == "csv"
        else records_to_json(records, summary)
    )
    path.write_text(text)
    return path


def strip_timing_columns(csv_text: str) -> str:
    """Project the timing columns out of a results CSV (summary lines pass through)."""
    kept = [i for i, col in enumerate(CSV_COLUMNS) if col not in _TIMING_COLUMNS]
    out = []
    for line in csv_text.splitlines():
        if line.startswith("#") or not line:
            out.append(line)
        else:
            parts = line.split(",")
            out.append(",".join(parts[i] for i in kept))
    return "\n".join(out) + "\n"


def calibrate_constants(
    mode: str = "basic", budget: OptimizeBudget | None = None
) -> dict:
    """Reproduce the critical constant for a mode and cross-check reference rates.

    Minimizes the critical constant over the knob grid and reports the
    minimizer, plus the rates and critical constant at the published
    operating point for that mode.
    """
    if mode not in ("basic", "variant"):
        raise InvalidParams(f"calibration supports basic|variant, got {mode!r}")
    params, rates = optimize_params(None, mode=mode, budget=budget)
    ref = REFERENCE_POINTS[mode]
    if mode == "basic":
        ref_rates = rates_basic(ref["alpha"], ref["beta"], ref["c"])
        ref_ct = critical_c(ref["alpha"], ref["beta"])
    else:
        ref_rates = rates_variant(ref["alpha"], ref["beta"], ref["eta"], ref["c"])
        ref_ct = critical_c(ref["alpha"], ref["beta"], eta=ref["eta"])
    return {
        "mode": mode,
        "c_min": params.c,
        "argmin": {"alpha": params.alpha, "beta": params.beta, "eta": params.eta},
        "rates_at_argmin": {"tau": rates.tau, "rho": rates.rho, "growth": rates.growth},
        "reference_point": dict(ref),
        "reference_rates": {
            "tau": ref_rates.tau,
            "rho": ref_rates.rho,
            "growth": ref_rates.growth,
            "critical_c": ref_ct,
        },
    }


def success_curve(axis: str, config: ExperimentConfig) -> list[dict]:
    """Success rate along one grid axis (c or n) with confidence intervals."""
    if axis not in ("c", "n"):
        raise InvalidParams(f"axis must be 'c' or 'n', got {axis!r}")
    values = config.n_values if axis == "n" else (config.c_values or ())
    if len(values) < 3:
        raise InvalidParams(f"curve needs at least 3 points on axis {axis!r}")
    records = run_experiment(replace(config, output=None))
    cells = _build_cells(config)
    summary = summarize(records, cells)
    table = []
    for s in summary:
        table.append(
            {
                "axis": axis,
                "value": s["n"] if axis == "n" else s["c"],
                "rate": s["rate"],
                "wilson_lo": s["wilson_lo"],
                "wilson_hi": s["wilson_hi"],
                "trials": s["trials"],
            }
        )
    return table
