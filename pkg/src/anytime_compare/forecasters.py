"""Reference forecasters and the simulation game used to exercise them.

The game is played one round at a time: two forecasters announce
probabilities for a binary outcome, reality draws the outcome from a
hidden probability r_t, and the scoring rule turns the pair of forecasts
into one differential.  The simulator here knows r_t, so tests can compare
confidence sequences against the true moving target; nothing in the
inference modules ever sees r_t.

Forecasters follow a two-call protocol: ``predict()`` for the current
round, then ``observe(y)`` with the realized outcome.  Predictions depend
only on strictly prior outcomes.

The K29 forecaster is Vovk-style defensive forecasting: it announces any
p with sum_i K(p, p_i)(y_i - p_i) = 0, which forces calibration under the
chosen kernel regardless of how outcomes are generated.  Root finding and
the per-kernel bookkeeping live in the kernels module.

Determinism contract: reality and outcomes are generated by Philox4x64-10
counter-based generators keyed by (seed, domain), so identical (T, seed)
reproduce bit-identical streams on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .scoring import ScoringRule, expected_diff, pointwise_diff

__all__ = [
    "Kernel",
    "poly_kernel",
    "rbf_kernel",
    "Forecaster",
    "Constant",
    "Laplace",
    "SeasonalLaplace",
    "K29",
    "forecaster_from_name",
    "FORECASTER_NAMES",
    "laplace_predict",
    "k29_predict",
    "seasonal_laplace_predict",
    "rescale_pair",
    "RealitySequence",
    "changepoint_reality",
    "sample_outcomes",
    "PairRun",
    "run_pair",
]

_REALITY_DOMAIN = 0
_OUTCOME_DOMAIN = 1


@dataclass(frozen=True)
class Kernel:
    """Similarity kernel on forecast space, either (1+pq)^degree or RBF."""

    kind: str
    degree: int = 0
    sigma: float = 0.0

    def __post_init__(self) -> None:
        if self.kind == "poly":
            if self.degree < 1 or self.degree != int(self.degree):
                raise ValueError(f"poly degree must be a positive integer, got {self.degree}")
        elif self.kind == "rbf":
            if not self.sigma > 0.0:
                raise ValueError(f"rbf sigma must be positive, got {self.sigma}")
        else:
            raise ValueError(f"kernel kind must be 'poly' or 'rbf', got {self.kind!r}")

    def value(self, a: float, b: float) -> float:
        if self.kind == "poly":
            return (1.0 + a * b) ** self.degree
        return math.exp(-((a - b) ** 2) / (2.0 * self.sigma**2))


def poly_kernel(degree: int) -> Kernel:
    return Kernel("poly", degree=degree)


def rbf_kernel(sigma: float) -> Kernel:
    return Kernel("rbf", sigma=sigma)


def laplace_predict(history) -> float:
    """Add-a-half smoothing: (ones + 0.5) / (rounds + 1)."""
    k = 0
    for y in history:
        k += 1 if y else 0
    return (k + 0.5) / (len(history) + 1)


def k29_predict(history, kernel: Kernel) -> float:
    """Defensive forecast against past (forecast, outcome) pairs.

    Returns a root of f(p) = sum_i K(p, p_i)(y_i - p_i) on [0, 1] when one
    exists; saturates to 1 or 0 when f keeps one sign, and opens at 1/2 on
    an empty history.
    """
    n = len(history)
    if n == 0:
        return 0.5
    if kernel.kind == "poly":
        d = kernel.degree
        moments = np.zeros(d + 1)
        for p, y in history:
            resid = y - p
            pk = 1.0
            for k in range(d + 1):
                moments[k] += pk * resid
                pk *= p
        coefs = np.empty(d + 1)
        binom = 1.0
        for k in range(d + 1):
            coefs[k] = binom * moments[k]
            binom = binom * (d - k) / (k + 1)
        return kernels.root_scan_poly(coefs)
    hp = np.fromiter((p for p, _ in history), dtype=float, count=n)
    hy = np.fromiter((float(y) for _, y in history), dtype=float, count=n)
    return kernels.root_scan_rbf(hp, hy, n, kernel.sigma)


def seasonal_laplace_predict(season_history, carryover: float) -> float:
    """Within-season add-carryover smoothing: (wins + carryover)/(games + 1)."""
    if not 0.0 <= carryover <= 1.0:
        raise ValueError(f"carryover must be a probability, got {carryover}")
    k = 0
    for y in season_history:
        k += 1 if y else 0
    return (k + carryover) / (len(season_history) + 1)


def rescale_pair(a: float, b: float):
    """Normalize two nonnegative ratings so they sum to one.

    A doubly-zero pair carries no information and maps to (0.5, 0.5).
    """
    if a < 0.0 or b < 0.0:
        raise ValueError(f"ratings must be nonnegative, got ({a}, {b})")
    total = a + b
    if total == 0.0:
        return 0.5, 0.5
    return a / total, b / total


class Forecaster:
    """Protocol: predict() for the current round, observe(y) after it."""

    def predict(self) -> float:
        raise NotImplementedError

    def observe(self, y: int) -> None:
        raise NotImplementedError


class Constant(Forecaster):
    def __init__(self, value: float):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"constant forecast must be a probability, got {value}")
        self.value = value

    def predict(self) -> float:
        return self.value

    def observe(self, y: int) -> None:
        pass


class Laplace(Forecaster):
    def __init__(self):
        self.ones = 0
        self.rounds = 0

    def predict(self) -> float:
        return (self.ones + 0.5) / (self.rounds + 1)

    def observe(self, y: int) -> None:
        self.ones += 1 if y else 0
        self.rounds += 1


class SeasonalLaplace(Forecaster):
    """Laplace smoothing that restarts each season from a carried rating.

    Closing a season replaces the carryover with the end-of-season rating
    reverted toward 1/2 by ``reversion``; the first season opens at 1/2.
    """

    def __init__(self, reversion: float = 1.0 / 3.0):
        if not 0.0 <= reversion <= 1.0:
            raise ValueError(f"reversion must lie in [0, 1], got {reversion}")
        self.reversion = reversion
        self.carryover = 0.5
        self.season: list[int] = []

    def predict(self) -> float:
        return seasonal_laplace_predict(self.season, self.carryover)

    def observe(self, y: int) -> None:
        self.season.append(1 if y else 0)

    def end_season(self) -> None:
        final = seasonal_laplace_predict(self.season, self.carryover)
        self.carryover = (1.0 - self.reversion) * final + self.reversion * 0.5
        self.season = []


class K29(Forecaster):
    """Streaming defensive forecasting.

    The polynomial kernel folds each round into degree+1 running moments,
    so a step is O(degree); the RBF kernel keeps the whole history and
    pays O(t) per step.  Arithmetic matches kernels.k29_poly_path /
    k29_rbf_path term for term, so replaying outcomes through this class
    reproduces those paths exactly.
    """

    def __init__(self, kernel: Kernel):
        self.kernel = kernel
        self.rounds = 0
        self._pending: float | None = None
        if kernel.kind == "poly":
            d = kernel.degree
            self._moments = np.zeros(d + 1)
            self._binom = np.ones(d + 1)
            for k in range(1, d + 1):
                self._binom[k] = self._binom[k - 1] * (d - k + 1) / k
        else:
            self._hp = np.empty(64)
            self._hy = np.empty(64)

    def predict(self) -> float:
        if self._pending is not None:
            return self._pending
        if self.rounds == 0:
            p = 0.5
        elif self.kernel.kind == "poly":
            p = kernels.root_scan_poly(self._binom * self._moments)
        else:
            p = kernels.root_scan_rbf(
                self._hp, self._hy, self.rounds, self.kernel.sigma
            )
        self._pending = p
        return p

    def observe(self, y: int) -> None:
        p = self.predict()
        yf = 1.0 if y else 0.0
        if self.kernel.kind == "poly":
            resid = yf - p
            pk = 1.0
            for k in range(self.kernel.degree + 1):
                self._moments[k] += pk * resid
                pk *= p
        else:
            if self.rounds == self._hp.shape[0]:
                self._hp = np.concatenate([self._hp, np.empty_like(self._hp)])
                self._hy = np.concatenate([self._hy, np.empty_like(self._hy)])
            self._hp[self.rounds] = p
            self._hy[self.rounds] = yf
        self.rounds += 1
        self._pending = None


FORECASTER_NAMES = (
    "always_0.5",
    "always_0",
    "always_1",
    "laplace",
    "k29_poly3",
    "k29_rbf0.01",
)


def forecaster_from_name(name: str) -> Forecaster:
    if name == "always_0.5":
        return Constant(0.5)
    if name == "always_0":
        return Constant(0.0)
    if name == "always_1":
        return Constant(1.0)
    if name == "laplace":
        return Laplace()
    if name == "k29_poly3":
        return K29(poly_kernel(3))
    if name == "k29_rbf0.01":
        return K29(rbf_kernel(0.01))
    raise ValueError(f"unknown forecaster {name!r}; choose from {FORECASTER_NAMES}")


@dataclass(frozen=True, eq=False)
class RealitySequence:
    """Hidden outcome probabilities r_t plus the seed that made them."""

    r: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        r = self.r
        if r.ndim != 1 or r.size == 0:
            raise ValueError("r must be a nonempty vector")
        if np.min(r) < 0.0 or np.max(r) > 1.0:
            raise ValueError("reality probabilities must lie in [0, 1]")

    def __len__(self) -> int:
        return self.r.size


def _theta(t: int) -> float:
    # regime schedule; rounds count from 1
    if t <= 100:
        return 0.5
    if t <= 500:
        return 0.0
    if t <= 5000:
        return 1.0
    return 0.0


def changepoint_reality(T: int, seed: int, noise: bool = True) -> RealitySequence:
    """Piecewise-regime reality: r_t = 0.8 theta_t + 0.2 (1 - theta_t) + noise.

    theta holds at 0.5 for the first hundred rounds, then jumps to 0, 1,
    and back to 0 at rounds 100, 500, and 5000.  Gaussian noise with sd
    0.1 is added and the result clamped to [0, 1]; clamping rather than
    resampling keeps the sequence a deterministic function of (T, seed).
    """
    if T < 1:
        raise ValueError(f"T must be at least 1, got {T}")
    theta = np.fromiter((_theta(t) for t in range(1, T + 1)), dtype=float, count=T)
    r = 0.8 * theta + 0.2 * (1.0 - theta)
    if noise:
        rng = np.random.Generator(np.random.Philox(key=[seed, _REALITY_DOMAIN]))
        r = np.clip(r + rng.normal(0.0, 0.1, size=T), 0.0, 1.0)
    return RealitySequence(r=r, seed=seed)


def sample_outcomes(reality: RealitySequence, seed: int) -> np.ndarray:
    """Draw y_t ~ Bernoulli(r_t), independent across t given the sequence."""
    rng = np.random.Generator(np.random.Philox(key=[seed, _OUTCOME_DOMAIN]))
    u = rng.uniform(0.0, 1.0, size=len(reality))
    return (u < reality.r).astype(np.int64)


@dataclass(frozen=True, eq=False)
class PairRun:
    """One full game between two forecasters, with the oracle's answers.

    ``diffs`` feeds the inference modules; ``true_diffs`` is the per-round
    conditional expected differential only the simulator can know.
    """

    forecasts_p: np.ndarray
    forecasts_q: np.ndarray
    outcomes: np.ndarray
    diffs: np.ndarray
    true_diffs: np.ndarray

    def true_average_path(self) -> np.ndarray:
        """The moving target: running mean of true differentials."""
        t = np.arange(1, self.true_diffs.size + 1, dtype=float)
        return np.cumsum(self.true_diffs) / t


def run_pair(
    p_forecaster: Forecaster,
    q_forecaster: Forecaster,
    reality: RealitySequence,
    outcomes: np.ndarray,
    rule: ScoringRule,
) -> PairRun:
    """Play the game to the end of ``outcomes`` and collect every stream."""
    T = len(outcomes)
    if T > len(reality):
        raise ValueError(f"{T} outcomes but only {len(reality)} reality rounds")
    p_arr = np.empty(T)
    q_arr = np.empty(T)
    diffs = np.empty(T)
    true_diffs = np.empty(T)
    for t in range(T):
        p = p_forecaster.predict()
        q = q_forecaster.predict()
        y = int(outcomes[t])
        p_arr[t] = p
        q_arr[t] = q
        diffs[t] = pointwise_diff(rule, p, q, y).value
        true_diffs[t] = expected_diff(rule, p, q, reality.r[t])
        p_forecaster.observe(y)
        q_forecaster.observe(y)
    return PairRun(
        forecasts_p=p_arr,
        forecasts_q=q_arr,
        outcomes=np.asarray(outcomes, dtype=np.int64).copy(),
        diffs=diffs,
        true_diffs=true_diffs,
    )
