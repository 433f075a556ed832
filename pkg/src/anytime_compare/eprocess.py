"""E-processes and anytime-valid p-values for one-sided forecast comparisons.

The null being tested is directional: "q scores at least as well as p on
average so far" (direction ``pq``), or the mirror image (``qp``).  Evidence
against it is a nonnegative process E_t whose expectation at any stopping
time is at most 1 under the null, so 1/E_t is a p-value that survives
optional stopping.  Two constructions are provided, both driven by the
same ComparisonState the confidence sequences use:

* ``e_fixed_lambda``: the one-parameter exponential supermartingale
  exp(lambda * S_t - psi_E(lambda) * Vhat_t), Fan-style, valid for any
  fixed lambda in [0, 1/c).
* ``e_mixture``: the gamma-exponential mixture of the above over lambda,
  which is exactly the conjugate-mixture value m(S_t, Vhat_t) and needs no
  tuning beyond (rho, c).

Running maxima are tracked in log space by EvidenceState; ``p_process``
converts them to the dual p-value min(1, 1/max_i E_i), nonincreasing in t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .boundaries import exponential_cgf, gamma_exponential_log_m, psi
from .confseq import ComparisonState

__all__ = [
    "EvidenceState",
    "e_mixture",
    "log_e_mixture",
    "e_fixed_lambda",
    "log_e_fixed_lambda",
    "p_process",
]

_DIRECTIONS = ("pq", "qp")

# smallest positive double; p-values stay in (0, 1] even when the evidence
# overflows the float range
_TINY = 5e-324


def _exp_or_inf(x: float) -> float:
    return math.exp(x) if x < 709.0 else math.inf


@dataclass(frozen=True)
class EvidenceState:
    """Log-space running record of an e-process in one direction.

    Starts at the trivial e-value 1 (log 0), so a fresh state reports
    p = 1.  ``record`` folds in the next e-value and keeps the running
    max, which is all the dual p-value needs.
    """

    direction: str
    log_e: float = 0.0
    log_e_max: float = 0.0

    def __post_init__(self) -> None:
        if self.direction not in _DIRECTIONS:
            raise ValueError(
                f"direction must be one of {_DIRECTIONS}, got {self.direction!r}"
            )

    @property
    def e_current(self) -> float:
        return _exp_or_inf(self.log_e)

    @property
    def e_running_max(self) -> float:
        return _exp_or_inf(self.log_e_max)

    def record(self, e_value: float) -> "EvidenceState":
        """Fold in the next e-value; nonpositive evidence is a hard error."""
        if not e_value > 0.0:
            raise ValueError(f"e-values must be positive, got {e_value}")
        return self.record_log(math.log(e_value))

    def record_log(self, log_e: float) -> "EvidenceState":
        if math.isnan(log_e):
            raise ValueError("e-value is NaN")
        return replace(self, log_e=log_e, log_e_max=max(self.log_e_max, log_e))


def _signed_sum(state: ComparisonState, direction: str) -> float:
    if direction == "pq":
        return state.sum_dhat
    if direction == "qp":
        return -state.sum_dhat
    raise ValueError(f"direction must be one of {_DIRECTIONS}, got {direction!r}")


def _check_scale(state: ComparisonState, c: float) -> None:
    if abs(c - 2.0 * state.bound) > 1e-9 * max(1.0, c):
        raise ValueError(
            f"scale c = {c} does not match 2*bound = {2.0 * state.bound}"
        )


def log_e_mixture(
    state: ComparisonState, rho: float, c: float, direction: str
) -> float:
    """Log of the mixture e-value: the conjugate-mixture m at (S_t, Vhat_t).

    Both directions share Vhat; only the sign of the sum flips.
    """
    _check_scale(state, c)
    s = _signed_sum(state, direction)
    return gamma_exponential_log_m(s, state.vhat, rho, c)


def e_mixture(state: ComparisonState, rho: float, c: float, direction: str) -> float:
    """Mixture e-value; saturates to inf past the float range."""
    return _exp_or_inf(log_e_mixture(state, rho, c, direction))


def log_e_fixed_lambda(
    state: ComparisonState, lam: float, c: float, direction: str
) -> float:
    """Log e-value for a single betting intensity lambda in [0, 1/c)."""
    _check_scale(state, c)
    if not 0.0 <= lam < 1.0 / c:
        raise ValueError(f"lambda must lie in [0, {1.0 / c}), got {lam}")
    s = _signed_sum(state, direction)
    return lam * s - psi(exponential_cgf(c), lam) * state.vhat


def e_fixed_lambda(
    state: ComparisonState, lam: float, c: float, direction: str
) -> float:
    return _exp_or_inf(log_e_fixed_lambda(state, lam, c, direction))


def p_process(ev: EvidenceState) -> float:
    """Anytime-valid p-value min(1, 1 / max_i E_i); never exactly zero."""
    if ev.log_e_max <= 0.0:
        return 1.0
    if ev.log_e_max == math.inf:
        return _TINY
    return max(math.exp(-ev.log_e_max), _TINY)
