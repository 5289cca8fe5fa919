"""Closed-form parameter mathematics for the thresholding recovery algorithm.

Everything here is pure: Gaussian tails, the per-iteration survival rates of
clique and non-clique vertices, the critical clique-size constant where the
clique fraction stops shrinking, grid search over the tuning knobs, and the
iteration schedule derived from the rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import erfc as _erfc_vec

from .errors import (
    DegenerateRates,
    InvalidParams,
    NoCrossing,
    NoFeasibleParams,
    SubcriticalParams,
)

_SQRT2 = math.sqrt(2.0)
_GOLDEN_RATIO = (math.sqrt(5.0) - 1.0) / 2.0


def normal_sf(x: float) -> float:
    """Gaussian survival function: P(Z >= x) for a standard normal Z.

    Computed through the complementary error function, which the C library
    evaluates by rational/series approximation; absolute error is far below
    the 1e-12 contract on |x| <= 8.
    """
    if not math.isfinite(x):
        raise InvalidParams(f"normal_sf needs a finite argument, got {x}")
    return 0.5 * math.erfc(x / _SQRT2)


def _sf(x: np.ndarray) -> np.ndarray:
    return 0.5 * _erfc_vec(x / _SQRT2)


@dataclass(frozen=True)
class DenseParams:
    """Edge probabilities of the dense planted model: background p, planted q.

    The endpoints are admitted (the planted-clique model is the q=1 case);
    operations that standardize by the background deviation reject
    p(1-p) = 0 themselves.
    """

    p: float
    q: float

    def __post_init__(self):
        if not (0.0 <= self.p < self.q <= 1.0):
            raise InvalidParams(f"need 0 <= p < q <= 1, got p={self.p} q={self.q}")

    @property
    def signal(self) -> float:
        """Degree boost per planted neighbor in background standard deviations."""
        pq = self.p * (1.0 - self.p)
        if pq <= 0.0:
            raise InvalidParams(f"p(1-p) must be positive, got p={self.p}")
        return (self.q - self.p) / math.sqrt(pq)


@dataclass(frozen=True)
class CliqueParams:
    """Tuning knobs of the recovery algorithm.

    alpha is the sampling rate, beta the survivor threshold in standard
    deviations, eta the optional sample-refinement threshold (variant mode
    only), c the clique-size constant in k = c*sqrt(n), and epsilon4 the
    optional schedule exponent (must stay below 1/a for the failure bound
    to decay).
    """

    alpha: float
    beta: float
    c: float
    eta: float | None = None
    epsilon4: float | None = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise InvalidParams(f"alpha={self.alpha} outside (0, 1)")
        if not self.beta > 0.0:
            raise InvalidParams(f"beta={self.beta} must be positive")
        if not self.c > 0.0:
            raise InvalidParams(f"c={self.c} must be positive")
        if self.eta is not None and not self.eta > 0.0:
            raise InvalidParams(f"eta={self.eta} must be positive when present")
        if self.epsilon4 is not None and not self.epsilon4 > 0.0:
            raise InvalidParams("epsilon4 must be positive when present")


@dataclass(frozen=True)
class Rates:
    """Per-iteration survival rates and the derived growth factor.

    tau is the survival rate of ordinary vertices, rho of planted vertices
    (the dense-model analogue in dense mode). growth = rho/sqrt(tau) > 1
    means the planted fraction improves each iteration. gamma and delta are
    the refined-sample rates and appear only in variant mode.
    """

    tau: float
    rho: float
    growth: float
    gamma: float | None = None
    delta: float | None = None


def _check_rate_args(alpha: float, beta: float, c: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise InvalidParams(f"alpha={alpha} outside (0, 1)")
    if not (math.isfinite(beta) and beta >= 0.0):
        raise InvalidParams(f"beta={beta} must be finite and nonnegative")
    if not (math.isfinite(c) and c >= 0.0):
        raise InvalidParams(f"c={c} must be finite and nonnegative")


def rates_basic(alpha: float, beta: float, c: float) -> Rates:
    """Survival rates of the plain threshold iteration.

    tau = (1-alpha) * sf(beta); rho = (1-alpha) * sf(beta - c*sqrt(alpha)).
    """
    _check_rate_args(alpha, beta, c)
    tau = (1.0 - alpha) * normal_sf(beta)
    rho = (1.0 - alpha) * normal_sf(beta - c * math.sqrt(alpha))
    return Rates(tau=tau, rho=rho, growth=rho / math.sqrt(tau))


def rates_variant(alpha: float, beta: float, eta: float, c: float) -> Rates:
    """Survival rates when the reference sample is refined by its own degrees.

    The refined sample keeps the fraction gamma = alpha*sf(eta) of all
    vertices but delta = alpha*sf(eta - c*sqrt(alpha)) of planted ones, so
    the planted degree boost grows to c*delta/sqrt(gamma) standard
    deviations. eta may be any finite value here (nonpositive values reduce
    the refinement to the identity); the algorithm itself uses eta > 0.
    """
    _check_rate_args(alpha, beta, c)
    if not math.isfinite(eta):
        raise InvalidParams(f"eta={eta} must be finite")
    gamma = alpha * normal_sf(eta)
    if gamma <= 0.0:
        raise DegenerateRates(f"gamma underflowed to zero at eta={eta}")
    delta = alpha * normal_sf(eta - c * math.sqrt(alpha))
    tau = (1.0 - alpha) * normal_sf(beta)
    rho = (1.0 - alpha) * normal_sf(beta - c * delta / math.sqrt(gamma))
    return Rates(tau=tau, rho=rho, growth=rho / math.sqrt(tau), gamma=gamma, delta=delta)


def rates_dense(alpha: float, beta: float, c: float, dense: DenseParams) -> Rates:
    """Survival rates in the dense planted model.

    tau is as in the basic mode; the planted rate becomes
    (1-alpha) * sf(beta - c*sqrt(alpha)*(q-p)/sqrt(p(1-p))).
    """
    _check_rate_args(alpha, beta, c)
    pq = dense.p * (1.0 - dense.p)
    if pq <= 0.0:
        raise InvalidParams("p(1-p) must be positive")
    tau = (1.0 - alpha) * normal_sf(beta)
    rho = (1.0 - alpha) * normal_sf(beta - c * math.sqrt(alpha) * dense.signal)
    return Rates(tau=tau, rho=rho, growth=rho / math.sqrt(tau))


def _rates_for_mode(
    alpha: float, beta: float, c: float, mode: str, eta: float | None, dense: DenseParams | None
) -> Rates:
    if mode == "basic":
        return rates_basic(alpha, beta, c)
    if mode == "variant":
        if eta is None:
            raise InvalidParams("variant mode needs eta")
        return rates_variant(alpha, beta, eta, c)
    if mode == "dense":
        if dense is None:
            raise InvalidParams("dense mode needs DenseParams")
        return rates_dense(alpha, beta, c, dense)
    raise InvalidParams(f"unknown mode {mode!r}")


C_BRACKET = (1e-6, 100.0)
_BISECT_ITERS = 64  # narrows the bracket far below the 1e-6 tolerance on c


def critical_c(
    alpha: float,
    beta: float,
    eta: float | None = None,
    dense: DenseParams | None = None,
) -> float:
    """Smallest clique-size constant whose planted rate reaches sqrt(tau).

    The planted rate is strictly increasing in c while tau does not depend
    on it, so bisection on the bracket (1e-6, 100] finds the unique
    crossing; iteration continues well past the 1e-6 tolerance so the rate
    residual at the returned point is below 1e-9.
    """
    mode = "dense" if dense is not None else ("variant" if eta is not None else "basic")

    def rho_of(c: float) -> float:
        return _rates_for_mode(alpha, beta, c, mode, eta, dense).rho

    target = math.sqrt(_rates_for_mode(alpha, beta, C_BRACKET[0], mode, eta, dense).tau)
    lo, hi = C_BRACKET
    if rho_of(hi) < target:
        raise NoCrossing(
            f"rho never reaches sqrt(tau) for c in ({lo}, {hi}] at alpha={alpha} beta={beta}"
        )
    if rho_of(lo) >= target:
        return lo
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if rho_of(mid) < target:
            lo = mid
        else:
            hi = mid
    return hi


@dataclass(frozen=True)
class OptimizeBudget:
    """Search effort for optimize_params: grid pitch plus refinement rounds."""

    alpha_start: float = 0.02
    alpha_stop: float = 0.98
    alpha_step: float = 0.02
    beta_start: float = 0.05
    beta_stop: float = 4.0
    beta_step: float = 0.05
    eta_start: float = 0.05
    eta_stop: float = 4.0
    eta_step: float = 0.05
    refine_rounds: int = 3
    golden_iters: int = 30


def _grid(start: float, stop: float, step: float) -> np.ndarray:
    count = int(round((stop - start) / step)) + 1
    return start + step * np.arange(count)


def _growth_grid(
    A: np.ndarray, B: np.ndarray, E: np.ndarray | None, c: float, dense: DenseParams | None
) -> np.ndarray:
    tau = (1.0 - A) * _sf(B)
    if E is not None:
        gamma = A * _sf(E)
        delta = A * _sf(E - c * np.sqrt(A))
        with np.errstate(divide="ignore", invalid="ignore"):
            shift = c * delta / np.sqrt(gamma)
        rho = (1.0 - A) * _sf(B - shift)
        rho = np.where(gamma > 0.0, rho, 0.0)
    elif dense is not None:
        rho = (1.0 - A) * _sf(B - c * np.sqrt(A) * dense.signal)
    else:
        rho = (1.0 - A) * _sf(B - c * np.sqrt(A))
    return rho / np.sqrt(tau)


def _ctilde_grid(
    A: np.ndarray, B: np.ndarray, E: np.ndarray | None, dense: DenseParams | None
) -> np.ndarray:
    """Vectorized bisection for the critical constant over a parameter grid."""
    tau = (1.0 - A) * _sf(B)
    target = np.sqrt(tau)
    lo = np.full(A.shape, C_BRACKET[0])
    hi = np.full(A.shape, C_BRACKET[1])

    def rho(cv: np.ndarray) -> np.ndarray:
        if E is not None:
            gamma = A * _sf(E)
            delta = A * _sf(E - cv * np.sqrt(A))
            with np.errstate(divide="ignore", invalid="ignore"):
                shift = cv * delta / np.sqrt(gamma)
            r = (1.0 - A) * _sf(B - shift)
            return np.where(gamma > 0.0, r, 0.0)
        if dense is not None:
            return (1.0 - A) * _sf(B - cv * np.sqrt(A) * dense.signal)
        return (1.0 - A) * _sf(B - cv * np.sqrt(A))

    feasible = rho(hi) >= target
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        below = rho(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return np.where(feasible, hi, np.inf)


def _golden_section(fn, lo: float, hi: float, iters: int, maximize: bool) -> float:
    """Coordinate refinement helper; returns the best argument found."""
    sign = -1.0 if maximize else 1.0
    a, b = lo, hi
    c1 = b - _GOLDEN_RATIO * (b - a)
    c2 = a + _GOLDEN_RATIO * (b - a)
    f1, f2 = sign * fn(c1), sign * fn(c2)
    for _ in range(iters):
        if f1 < f2:
            b, c2, f2 = c2, c1, f1
            c1 = b - _GOLDEN_RATIO * (b - a)
            f1 = sign * fn(c1)
        else:
            a, c1, f1 = c1, c2, f2
            c2 = a + _GOLDEN_RATIO * (b - a)
            f2 = sign * fn(c2)
    return c1 if f1 < f2 else c2


def optimize_params(
    c: float | None,
    mode: str = "basic",
    budget: OptimizeBudget | None = None,
    dense: DenseParams | None = None,
    min_tau: float = 0.0,
) -> tuple[CliqueParams, Rates]:
    """Search the tuning knobs on a coarse grid, then refine coordinate-wise.

    With c given, maximizes the growth factor rho/sqrt(tau) and raises
    NoFeasibleParams if no grid point exceeds growth 1. With c=None
    (calibration), minimizes the critical constant instead, approximating
    the infimum over all knob settings. min_tau discards grid cells whose
    tau falls below it; desk-scale callers use it to keep at least one
    iteration above the schedule floor.

    Returns the best knob settings and their rates.
    """
    if mode not in ("basic", "variant", "dense"):
        raise InvalidParams(f"unknown mode {mode!r}")
    if mode == "dense" and dense is None:
        raise InvalidParams("dense mode needs DenseParams")
    budget = budget or OptimizeBudget()

    alphas = _grid(budget.alpha_start, budget.alpha_stop, budget.alpha_step)
    betas = _grid(budget.beta_start, budget.beta_stop, budget.beta_step)
    etas = _grid(budget.eta_start, budget.eta_stop, budget.eta_step) if mode == "variant" else None

    if etas is not None:
        A, B, E = (x.ravel() for x in np.meshgrid(alphas, betas, etas, indexing="ij"))
    else:
        A, B = (x.ravel() for x in np.meshgrid(alphas, betas, indexing="ij"))
        E = None

    tau = (1.0 - A) * _sf(B)
    allowed = tau >= min_tau

    calibrating = c is None
    if calibrating:
        score = _ctilde_grid(A, B, E, dense)
        score = np.where(allowed, score, np.inf)
        best = int(np.argmin(score))
        if not math.isfinite(score[best]):
            raise NoFeasibleParams("no grid cell admits a critical constant")
    else:
        score = _growth_grid(A, B, E, c, dense)
        score = np.where(allowed, score, -np.inf)
        best = int(np.argmax(score))
        if not score[best] > 1.0:
            raise NoFeasibleParams(
                f"no grid cell reaches growth > 1 at c={c} in mode {mode!r}"
            )

    alpha = float(A[best])
    beta = float(B[best])
    eta = float(E[best]) if E is not None else None

    def objective(a: float, b: float, e: float | None) -> float:
        try:
            if calibrating:
                return critical_c(a, b, eta=e, dense=dense)
            r = _rates_for_mode(a, b, c, mode, e, dense)
        except (NoCrossing, DegenerateRates):
            return math.inf if calibrating else -math.inf
        if r.tau < min_tau:
            return math.inf if calibrating else -math.inf
        return r.growth

    maximize = not calibrating
    for _ in range(budget.refine_rounds):
        alpha = _golden_section(
            lambda a: objective(a, beta, eta),
            max(1e-6, alpha - budget.alpha_step),
            min(1.0 - 1e-6, alpha + budget.alpha_step),
            budget.golden_iters,
            maximize,
        )
        beta = _golden_section(
            lambda b: objective(alpha, b, eta),
            max(1e-9, beta - budget.beta_step),
            beta + budget.beta_step,
            budget.golden_iters,
            maximize,
        )
        if eta is not None:
            eta = _golden_section(
                lambda e: objective(alpha, beta, e),
                max(1e-9, eta - budget.eta_step),
                eta + budget.eta_step,
                budget.golden_iters,
                maximize,
            )

    c_final = critical_c(alpha, beta, eta=eta, dense=dense) if calibrating else c
    rates = _rates_for_mode(alpha, beta, c_final, mode, eta, dense)
    params = CliqueParams(alpha=alpha, beta=beta, c=c_final, eta=eta)
    return params, rates


class StopReason(Enum):
    """Why the schedule stopped adding iterations."""

    TARGET_DENSITY_REACHED = "TargetDensityReached"
    FLOOR_REACHED = "FloorReached"
    MAX_ITERATIONS = "MaxIterations"


@dataclass(frozen=True)
class SchedulePolicy:
    """Practical stopping rules for the iteration schedule.

    theta_stop declares second-phase readiness once the predicted planted
    count reaches theta_stop * sqrt(n_i * log2(n_i)); n_floor keeps the
    predicted graph size from shrinking below a workable minimum. epsilon4,
    when set, also caps the iteration count at the failure-exponent formula
    epsilon4 * log2(n) / log2(rho^2/tau).
    """

    theta_stop: float = 4.0
    n_floor: float = 100.0
    epsilon4: float | None = None


@dataclass(frozen=True)
class ScheduleLevel:
    """Predicted sizes at one level: exact reals plus rounded estimates."""

    n_real: float
    k_real: float
    n_est: int
    k_est: int


@dataclass(frozen=True)
class Schedule:
    """Planned iteration count with per-level size predictions.

    a and b are the exponents -log(tau)/log(rho^2/tau) and
    -log(rho^2)/log(rho^2/tau); they always satisfy b = a - 1.
    """

    t: int
    levels: tuple[ScheduleLevel, ...]
    a: float
    b: float
    stop_reason: StopReason
    rates: Rates

    @property
    def k_final(self) -> int:
        return self.levels[-1].k_est


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def build_schedule(
    n: int, k: int, rates: Rates, policy: SchedulePolicy | None = None
) -> Schedule:
    """Plan the number of thresholding iterations from the survival rates.

    The iteration count is the smallest of three caps: second-phase
    readiness (policy.theta_stop), the size floor (policy.n_floor), and the
    failure-exponent formula when policy.epsilon4 is set. Level predictions
    follow n_i = tau^i * n and k_i = rho^i * k exactly; the final planted
    estimate is round-half-up of rho^t * k and must stay positive.
    """
    policy = policy or SchedulePolicy()
    if n < 1:
        raise InvalidParams(f"n={n} must be at least 1")
    if k < 0 or k > n:
        raise InvalidParams(f"k={k} must satisfy 0 <= k <= n={n}")
    if not rates.growth > 1.0:
        raise SubcriticalParams(
            f"growth {rates.growth} <= 1: the planted fraction never improves"
        )

    log_ratio = math.log2(rates.rho**2 / rates.tau)
    a = -math.log2(rates.tau) / log_ratio
    b = -math.log2(rates.rho**2) / log_ratio

    t_cap = math.inf
    if policy.epsilon4 is not None:
        if not 0.0 < policy.epsilon4 < 1.0 / a:
            raise InvalidParams(
                f"epsilon4={policy.epsilon4} outside (0, 1/a) with a={a}"
            )
        t_cap = math.floor(policy.epsilon4 * math.log2(n) / log_ratio)

    levels: list[ScheduleLevel] = []
    t = 0
    stop = StopReason.MAX_ITERATIONS
    n_i, k_i = float(n), float(k)
    while True:
        levels.append(
            ScheduleLevel(
                n_real=n_i,
                k_real=k_i,
                n_est=_round_half_up(n_i),
                k_est=_round_half_up(k_i),
            )
        )
        if n_i >= 2.0 and k_i >= policy.theta_stop * math.sqrt(n_i * math.log2(n_i)):
            stop = StopReason.TARGET_DENSITY_REACHED
            break
        if rates.tau * n_i < policy.n_floor:
            stop = StopReason.FLOOR_REACHED
            break
        if t >= t_cap:
            stop = StopReason.MAX_ITERATIONS
            break
        t += 1
        n_i *= rates.tau
        k_i *= rates.rho

    schedule = Schedule(
        t=t, levels=tuple(levels), a=a, b=b, stop_reason=stop, rates=rates
    )
    if schedule.k_final < 1:
        raise SubcriticalParams(
            f"predicted planted count rounds to {schedule.k_final} after {t} iterations"
        )
    return schedule
