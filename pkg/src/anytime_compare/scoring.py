"""Proper scoring rules for probability forecasts of binary and categorical outcomes.

Each rule S(p, y) is oriented so that larger is better.  The quantity this
package ultimately tracks is the pointwise score differential

    dhat_i = S(p_i, y_i) - S(q_i, y_i)

between two forecasters p and q.  Every rule here has a *linear equivalent*
(Lai, Gross and Shen, 2011): a scoring function that is affine in the outcome
and assigns the same differential, which is what makes dhat_i a conditionally
unbiased estimate of the true differential S(p_i, r_i) - S(q_i, r_i) under
reality r_i.  The Winkler skill score (Winkler, 1994) is handled by
``winkler_score``; its conditional mean has the analogous closed form.

All binary scores accept scalars or numpy arrays for ``p`` and ``y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ScoringRule",
    "PointwiseDifferential",
    "KStepWeights",
    "brier",
    "spherical",
    "zero_one",
    "truncated_log",
    "winkler",
    "rule_from_name",
    "score",
    "expected_score",
    "pointwise_diff",
    "expected_diff",
    "winkler_score",
    "categorical_score",
    "kstep_score",
]


@dataclass(frozen=True)
class ScoringRule:
    """A scoring rule selector plus its parameters.

    ``diff_bound`` is the half-width b with |S(p,y) - S(q,y)| <= b for all
    valid inputs; downstream confidence sequences use scale c = 2*b.
    """

    kind: str
    eps: float = 0.0            # truncation for the log rule
    q0: float = 0.0             # baseline truncation for the winkler rule
    base: "ScoringRule | None" = None

    @property
    def diff_bound(self) -> float:
        if self.kind == "log":
            return math.log((1.0 - self.eps) / self.eps)
        if self.kind == "winkler":
            m = min(self.q0, 1.0 - self.q0)
            return max(1.0, 2.0 / m - 1.0)
        return 1.0


def brier() -> ScoringRule:
    """Quadratic score -(p - y)^2 (Brier, 1950)."""
    return ScoringRule("brier")


def spherical() -> ScoringRule:
    """Spherical score (p*y + (1-p)*(1-y)) / sqrt(p^2 + (1-p)^2)."""
    return ScoringRule("spherical")


def zero_one() -> ScoringRule:
    """Accuracy of the implied point prediction, ties at p = 0.5 go to 1."""
    return ScoringRule("zero_one")


def truncated_log(eps: float = 0.01) -> ScoringRule:
    """Log score with p clamped to [eps, 1-eps] so differentials stay bounded."""
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 0.5), got {eps}")
    return ScoringRule("log", eps=eps)


def winkler(base: ScoringRule, q0: float) -> ScoringRule:
    """Winkler's skill score relative to a baseline forecast in (q0, 1-q0).

    Only the quadratic base score is supported: its positive-part shape is
    what keeps the conditional-mean identity exact.
    """
    if base.kind != "brier":
        raise ValueError(f"winkler base must be brier, got {base.kind!r}")
    if not 0.0 < q0 < 0.5:
        raise ValueError(f"q0 must lie in (0, 0.5), got {q0}")
    return ScoringRule("winkler", q0=q0, base=base)


_CONSTRUCTORS = {
    "brier": brier,
    "spherical": spherical,
    "zero_one": zero_one,
    "log": truncated_log,
}


def rule_from_name(name: str, eps: float = 0.01) -> ScoringRule:
    """Look up a binary rule by CLI name.  Raises KeyError for unknown names."""
    try:
        ctor = _CONSTRUCTORS[name]
    except KeyError:
        raise KeyError(
            f"unknown scoring rule {name!r}; available: {sorted(_CONSTRUCTORS)}"
        ) from None
    if name == "log":
        return ctor(eps)
    return ctor()


def _check_prob(p, what: str = "p") -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p < 0.0) or np.any(p > 1.0) or not np.all(np.isfinite(p)):
        raise ValueError(f"{what} must lie in [0, 1]")
    return p


def _check_outcome(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if not np.all((y == 0.0) | (y == 1.0)):
        raise ValueError("y must be 0 or 1")
    return y


def _score_arrays(rule: ScoringRule, p: np.ndarray, y: np.ndarray) -> np.ndarray:
    if rule.kind == "brier":
        return -((p - y) ** 2)
    if rule.kind == "spherical":
        return (p * y + (1.0 - p) * (1.0 - y)) / np.sqrt(p**2 + (1.0 - p) ** 2)
    if rule.kind == "zero_one":
        up = (p >= 0.5).astype(float)
        return y * up + (1.0 - y) * (1.0 - up)
    if rule.kind == "log":
        pc = np.clip(p, rule.eps, 1.0 - rule.eps)
        return y * np.log(pc) + (1.0 - y) * np.log(1.0 - pc)
    raise ValueError(f"score undefined for rule kind {rule.kind!r}")


def score(rule: ScoringRule, p, y):
    """Evaluate a binary scoring rule; larger is better.

    The winkler rule is rejected here: it scores a forecast *pair*, see
    ``winkler_score``.
    """
    if rule.kind == "winkler":
        raise ValueError("winkler scores a (p, q) pair; use winkler_score")
    p = _check_prob(p)
    y = _check_outcome(y)
    out = _score_arrays(rule, p, y)
    if out.ndim == 0:
        return float(out)
    return out


def expected_score(rule: ScoringRule, p, r):
    """Mean score r*S(p,1) + (1-r)*S(p,0) under outcome probability r."""
    r = _check_prob(r, "r")
    ones = np.ones_like(np.asarray(p, dtype=float))
    return r * score(rule, p, ones) + (1.0 - r) * score(rule, p, 1.0 - ones)


@dataclass(frozen=True)
class PointwiseDifferential:
    """One step of the score differential together with its a.s. bound."""

    value: float
    bound: float


def pointwise_diff(rule: ScoringRule, p, q, y) -> PointwiseDifferential:
    """Score differential S(p,y) - S(q,y); for winkler, the skill score itself."""
    if rule.kind == "winkler":
        w = winkler_score(rule.base, p, q, y, rule.q0)
        return PointwiseDifferential(value=w, bound=rule.diff_bound)
    value = float(score(rule, p, y) - score(rule, q, y))
    return PointwiseDifferential(value=value, bound=rule.diff_bound)


def expected_diff(rule: ScoringRule, p, q, r) -> float:
    """Mean of pointwise_diff under y ~ Bernoulli(r); the per-step estimand."""
    d1 = pointwise_diff(rule, p, q, 1).value
    d0 = pointwise_diff(rule, p, q, 0).value
    r = float(_check_prob(r, "r"))
    return r * d1 + (1.0 - r) * d0


def winkler_score(base: ScoringRule, p, q, y, q0: float) -> float:
    """Skill of forecast p against baseline q under the quadratic score.

    The raw differential is normalized by T(p, q), the differential that
    would be earned if the more extreme of the two outcomes (relative to the
    baseline) occurred:

        T(p, q) = S(p,1) - S(q,1)   if p >= q
                  S(p,0) - S(q,0)   if p <  q

    with the 0/0 case (p == q) defined as 0.  The baseline must stay inside
    (q0, 1-q0) so the normalizer is bounded away from 0 whenever p != q.
    """
    if base.kind != "brier":
        raise ValueError(f"winkler base must be brier, got {base.kind!r}")
    p = float(_check_prob(p))
    q = float(_check_prob(q, "q"))
    if not q0 < q < 1.0 - q0:
        raise ValueError(f"baseline q={q} outside ({q0}, {1.0 - q0})")
    if p == q:
        return 0.0
    num = float(score(base, p, y) - score(base, q, y))
    if p >= q:
        t = float(score(base, p, 1) - score(base, q, 1))
    else:
        t = float(score(base, p, 0) - score(base, q, 0))
    return num / t


def categorical_score(rule: ScoringRule, p, y) -> float:
    """Score a full probability vector p against a one-hot outcome y.

    Restricting to K = 2 recovers the binary forms exactly for spherical and
    (away from the p = 0.5 tie) zero-one; the quadratic form picks up a
    factor of 2 because both components move.
    """
    p = np.asarray(p, dtype=float)
    y = np.asarray(y, dtype=float)
    if p.shape != y.shape or p.ndim != 1:
        raise ValueError("p and y must be 1-d vectors of equal length")
    if np.any(p < 0.0) or not math.isclose(float(p.sum()), 1.0, abs_tol=1e-9):
        raise ValueError("p must be a probability vector")
    if not (np.all((y == 0.0) | (y == 1.0)) and float(y.sum()) == 1.0):
        raise ValueError("y must be one-hot")
    if rule.kind == "brier":
        return float(-np.sum((p - y) ** 2))
    if rule.kind == "spherical":
        return float(p @ y / np.linalg.norm(p))
    if rule.kind == "log":
        return float(np.log(np.clip(p, rule.eps, 1.0 - rule.eps)) @ y)
    if rule.kind == "zero_one":
        return float((p >= 0.5).astype(float) @ y)
    raise ValueError(f"categorical score undefined for rule kind {rule.kind!r}")


@dataclass(frozen=True)
class KStepWeights:
    """Positive weights over forecast horizons 1..K, each in (0, 1]."""

    w: tuple = field(default_factory=tuple)

    def __post_init__(self):
        w = tuple(float(x) for x in self.w)
        if len(w) == 0:
            raise ValueError("need at least one horizon weight")
        if any(not 0.0 < x <= 1.0 for x in w):
            raise ValueError(f"weights must lie in (0, 1], got {w}")
        object.__setattr__(self, "w", w)


def kstep_score(rule: ScoringRule, weights: KStepWeights, forecasts, y) -> float:
    """Weighted sum of one rule applied to K forecasts of the same outcome.

    A positively weighted sum of proper scores is again proper, so
    multi-horizon comparisons inherit the single-step machinery unchanged.
    """
    forecasts = np.asarray(forecasts, dtype=float)
    if forecasts.shape != (len(weights.w),):
        raise ValueError(
            f"expected {len(weights.w)} forecasts, got shape {forecasts.shape}"
        )
    total = 0.0
    for wk, pk in zip(weights.w, forecasts):
        total += wk * float(score(rule, pk, y))
    return total
