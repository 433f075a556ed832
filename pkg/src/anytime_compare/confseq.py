"""Streaming confidence sequences for the average score differential.

A comparison between forecasters p and q is summarized by the running mean
Delta_hat_t of the per-round differentials dhat_i.  Time-uniform intervals
for the moving target (the average of conditional expected differentials)
come from supermartingale constructions in the style of Howard, Ramdas,
McAuliffe and Sekhon (2021): a uniform boundary u applied to an intrinsic
time process V gives radius u(V_t)/t around Delta_hat_t, valid
simultaneously over all t, so stopping and peeking cost nothing.

Two interval families:

* ``cs_hoeffding`` treats each differential as bound-sub-Gaussian; the
  intrinsic time is t * bound**2 no matter what the data look like.
* ``cs_eb`` is the empirical-Bernstein flavor; intrinsic time is the
  accumulated squared deviation from a predictable center, so the width
  adapts to the variance the stream actually shows.

Both take the boundary's ``alpha`` to be the per-side crossing
probability: a two-sided level-alpha interval wants a boundary built at
alpha/2.  Intervals are clipped to [-2*bound, +2*bound], which is the
whole feasible range of the target and therefore free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .boundaries import UniformBoundary, boundary_radius

__all__ = [
    "ComparisonState",
    "ConfInterval",
    "cs_hoeffding",
    "cs_eb",
    "decide",
    "running_intersection",
    "differential_path",
    "P_BETTER",
    "Q_BETTER",
    "UNDECIDED",
]

P_BETTER = "p_better"
Q_BETTER = "q_better"
UNDECIDED = "undecided"

_CENTERINGS = ("mean", "zero")


@dataclass(frozen=True)
class ComparisonState:
    """Sufficient statistics of a comparison stream after t rounds.

    ``bound`` is the largest |dhat_i| the scoring rule allows (half the
    sub-exponential scale c).  ``gamma_next`` is the predictable center the
    NEXT differential is compared against when growing ``vhat``; it starts
    at 0 and under "mean" centering tracks the running mean, which keeps
    vhat near the realized variance.  States are immutable; ``update``
    returns a fresh one.
    """

    bound: float
    t: int = 0
    sum_dhat: float = 0.0
    delta_hat: float = 0.0
    vhat: float = 0.0
    gamma_next: float = 0.0
    centering: str = "mean"

    def __post_init__(self) -> None:
        if not self.bound > 0.0:
            raise ValueError(f"bound must be positive, got {self.bound}")
        if self.centering not in _CENTERINGS:
            raise ValueError(
                f"centering must be one of {_CENTERINGS}, got {self.centering!r}"
            )

    def update(self, dhat: float) -> "ComparisonState":
        """Absorb the differential for round t+1, returning the new state."""
        if not abs(dhat) <= self.bound + 1e-12:
            raise ValueError(
                f"time {self.t + 1}: |differential| = {abs(dhat)} exceeds the "
                f"scoring rule bound {self.bound}"
            )
        t = self.t + 1
        total = self.sum_dhat + dhat
        mean = total / t
        vhat = self.vhat + (dhat - self.gamma_next) ** 2
        gamma = mean if self.centering == "mean" else 0.0
        return replace(
            self, t=t, sum_dhat=total, delta_hat=mean, vhat=vhat, gamma_next=gamma
        )


def differential_path(diffs, bound: float, centering: str = "mean"):
    """Vectorized replay of a whole stream of updates.

    Returns arrays (sum_dhat, delta_hat, vhat), one entry per round,
    bit-identical to folding ComparisonState.update over ``diffs`` (cumsum
    adds in the same sequential order).
    """
    if centering not in _CENTERINGS:
        raise ValueError(f"centering must be one of {_CENTERINGS}, got {centering!r}")
    d = np.asarray(diffs, dtype=float)
    if d.ndim != 1:
        raise ValueError("diffs must be one-dimensional")
    bad = np.abs(d) > bound + 1e-12
    if bad.any():
        k = int(np.argmax(bad))
        raise ValueError(
            f"time {k + 1}: |differential| = {abs(d[k])} exceeds the scoring "
            f"rule bound {bound}"
        )
    s = np.cumsum(d)
    mean = s / np.arange(1, d.size + 1, dtype=float)
    if centering == "mean":
        gamma = np.concatenate(([0.0], mean[:-1]))
    else:
        gamma = np.zeros_like(d)
    vhat = np.cumsum((d - gamma) ** 2)
    return s, mean, vhat


@dataclass(frozen=True)
class ConfInterval:
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError(f"interval endpoints must be finite, got {self}")
        if self.lower > self.upper:
            raise ValueError(f"lower exceeds upper: {self}")

    @property
    def width(self) -> float:
        return self.upper - self.lower


def _clipped(state: ComparisonState, radius: float) -> ConfInterval:
    # the target always lies in [-2b, 2b], so clipping never loses coverage
    box = 2.0 * state.bound
    return ConfInterval(
        max(state.delta_hat - radius, -box), min(state.delta_hat + radius, box)
    )


def _need_data(state: ComparisonState) -> None:
    if state.t == 0:
        raise ValueError("confidence sequence undefined before any data")


def cs_hoeffding(state: ComparisonState, boundary: UniformBoundary) -> ConfInterval:
    """Sub-Gaussian interval ignoring realized variance.

    Differentials bounded by b are b-sub-Gaussian, so intrinsic time grows
    as t*b**2 on the raw scale.  The stitched boundary is stated for
    increments in [-2, 2] and is applied on that normalized scale, then
    multiplied back by b.
    """
    _need_data(state)
    b = state.bound
    if boundary.kind == "normal_mixture":
        radius = boundary_radius(boundary, state.t * b * b) / state.t
    elif boundary.kind == "stitched95":
        radius = b * boundary_radius(boundary, float(state.t)) / state.t
    else:
        raise ValueError(
            f"cs_hoeffding needs a sub-Gaussian boundary "
            f"(normal_mixture or stitched95), got {boundary.kind!r}"
        )
    return _clipped(state, radius)


def cs_eb(state: ComparisonState, boundary: UniformBoundary) -> ConfInterval:
    """Empirical-Bernstein interval; width tracks the realized variance.

    The gamma-exponential boundary works on the raw scale and must have
    been built with c = 2*bound, the almost-sure range of one centered
    increment.  The stitched boundary again works in [-2, 2] units.
    """
    _need_data(state)
    b = state.bound
    if boundary.kind == "gamma_exponential_mixture":
        if abs(boundary.c - 2.0 * b) > 1e-9 * max(1.0, 2.0 * b):
            raise ValueError(
                f"boundary scale c = {boundary.c} does not match "
                f"2*bound = {2.0 * b}"
            )
        radius = boundary_radius(boundary, state.vhat) / state.t
    elif boundary.kind == "stitched95":
        radius = b * boundary_radius(boundary, state.vhat / (b * b)) / state.t
    else:
        raise ValueError(
            f"cs_eb needs a sub-exponential boundary "
            f"(gamma_exponential_mixture or stitched95), got {boundary.kind!r}"
        )
    return _clipped(state, radius)


def decide(ci: ConfInterval) -> str:
    """Read off the one-sided call an interval certifies, if any.

    Positive differentials favor p, so an interval strictly above zero
    declares p the better forecaster; strictly below zero declares q.
    Time-uniform validity of the interval makes the first such call safe
    at any data-dependent stopping time.
    """
    if ci.lower > 0.0:
        return P_BETTER
    if ci.upper < 0.0:
        return Q_BETTER
    return UNDECIDED


def running_intersection(
    previous: ConfInterval | None, current: ConfInterval
) -> ConfInterval:
    """Intersect with everything seen so far; tightening is free for a CS.

    Raises if the intersection empties out, which a valid sequence does
    with probability at most alpha ever and usually signals a scale or
    centering misconfiguration.
    """
    if previous is None:
        return current
    lo = max(previous.lower, current.lower)
    hi = min(previous.upper, current.upper)
    if lo > hi:
        raise ValueError("running intersection is empty; intervals disagree")
    return ConfInterval(lo, hi)
