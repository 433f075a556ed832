"""Time-uniform boundaries for centered sums with accumulating variance.

A uniform boundary u(v) at crossing probability alpha satisfies

    P(exists t >= 1 : S_t >= u(V_t)) <= alpha

whenever exp(lam*S_t - psi(lam)*V_t) is a supermartingale for the relevant
family of lam (Ville's inequality applied to a mixture or a stitched union;
see Howard, Ramdas, McAuliffe and Sekhon, 2021).  Three boundaries are
provided: a fixed 95% polynomial-stitched instance, the two-sided normal
mixture in closed form, and a gamma-exponential conjugate mixture whose
value function m(s, v) is computed in log space by the kernel layer.

Conventions: ``alpha`` on a UniformBoundary is the one-sided crossing
probability.  Mixture boundaries work on the raw sum scale (the
gamma-exponential scale c should match 2*bound of the differential stream);
the stitched instance is stated in units where increments lie in [-2, 2],
so its sum-scale radius carries a factor 2 and callers rescale by bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernels

__all__ = [
    "Cgf",
    "UniformBoundary",
    "normal_cgf",
    "exponential_cgf",
    "gamma_cgf",
    "psi",
    "stitched95_radius",
    "mixture_m_normal",
    "normal_mixture_bound",
    "gamma_exponential_m",
    "gamma_exponential_log_m",
    "gamma_exponential_bound",
    "rho_for_vopt",
    "stitched95_boundary",
    "normal_mixture_boundary",
    "gamma_exponential_boundary",
    "boundary_radius",
]

STITCHED95_ALPHA = 0.025  # per side; the printed constants bake in 95% two-sided


@dataclass(frozen=True)
class Cgf:
    """A cumulant generating function bound psi, identified by family.

    ``c`` is the scale for the exponential and gamma families and unused
    for the normal one.
    """

    kind: str
    c: float = 0.0

    @property
    def lambda_max(self) -> float:
        return math.inf if self.kind == "normal" else 1.0 / self.c


def normal_cgf() -> Cgf:
    return Cgf("normal")


def exponential_cgf(c: float) -> Cgf:
    if c <= 0.0:
        raise ValueError(f"scale c must be positive, got {c}")
    return Cgf("exponential", c=c)


def gamma_cgf(c: float) -> Cgf:
    if c <= 0.0:
        raise ValueError(f"scale c must be positive, got {c}")
    return Cgf("gamma", c=c)


def psi(cgf: Cgf, lam: float) -> float:
    """Evaluate the cgf bound at lam; domain is [0, lambda_max)."""
    if lam < 0.0 or lam >= cgf.lambda_max:
        raise ValueError(f"lam={lam} outside [0, {cgf.lambda_max})")
    if cgf.kind == "normal":
        return 0.5 * lam * lam
    c = cgf.c
    if cgf.kind == "exponential":
        return (-math.log1p(-c * lam) - c * lam) / (c * c)
    if cgf.kind == "gamma":
        return lam * lam / (2.0 * (1.0 - c * lam))
    raise ValueError(f"unknown cgf kind {cgf.kind!r}")


def stitched95_radius(vhat: float) -> float:
    """Fixed 95% polynomial-stitched radius in normalized units.

    Valid down to intrinsic time 1 via the (vhat v 1) floor; callers
    multiply by 2*bound/t to turn it into a confidence radius for a mean.
    """
    if vhat < 0.0:
        raise ValueError(f"vhat must be nonnegative, got {vhat}")
    vm = max(vhat, 1.0)
    ll = math.log(math.log(2.0 * vm))
    return 1.7 * math.sqrt(vm * (ll + 3.8)) + 3.4 * ll + 13.0


def _exp_or_inf(x: float) -> float:
    # math.exp raises on overflow; saturating is the right answer for an
    # evidence value that genuinely exceeds float range
    return math.exp(x) if x < 709.0 else math.inf


def _log_m_normal(s: float, v: float, rho: float) -> float:
    return 0.5 * (math.log(rho) - math.log(v + rho)) + s * s / (2.0 * (v + rho))


def mixture_m_normal(s: float, v: float, rho: float) -> float:
    """Two-sided normal mixture value: integral of exp(lam*s - lam^2 v/2)
    against a N(0, 1/rho) mixing density, in closed form."""
    _check_v_rho(v, rho)
    return _exp_or_inf(_log_m_normal(s, v, rho))


def normal_mixture_bound(v: float, rho: float, alpha: float) -> float:
    """Smallest s with mixture_m_normal(s, v) >= 1/alpha, in closed form."""
    _check_v_rho(v, rho)
    _check_alpha(alpha)
    ratio = (v + rho) / (alpha * alpha * rho)
    return math.sqrt((v + rho) * math.log(ratio))


def gamma_exponential_log_m(s: float, v: float, rho: float, c: float) -> float:
    """log of the gamma-exponential mixture value; finite for any s."""
    _check_v_rho(v, rho)
    _check_c(c)
    return kernels.gamma_exp_log_m(s, v, rho, c)


def gamma_exponential_m(s: float, v: float, rho: float, c: float) -> float:
    """Gamma-exponential mixture value m(s, v); saturates to inf for
    enormous s, use gamma_exponential_log_m when that matters."""
    return _exp_or_inf(gamma_exponential_log_m(s, v, rho, c))


def gamma_exponential_bound(
    v: float, rho: float, c: float, alpha: float, s_limit: float = 1e9
) -> float:
    """Crossing point sup{s : m(s, v) < 1/alpha} by bracketing and bisection.

    m is flat (and at most 1) left of the closed-form branch and strictly
    increasing through the threshold, so the root is unique; it is located
    to absolute tolerance 1e-9.
    """
    _check_v_rho(v, rho)
    _check_c(c)
    _check_alpha(alpha)
    target = -math.log(alpha)
    lo = 0.0  # log m(0, v) <= 0 < target
    hi = max(c, 1.0)
    while kernels.gamma_exp_log_m(hi, v, rho, c) < target:
        hi *= 2.0
        if hi > s_limit:
            raise RuntimeError(
                f"no crossing of 1/alpha below s={s_limit:g} (v={v}, rho={rho}, "
                f"c={c}, alpha={alpha})"
            )
    while hi - lo > 1e-9:
        mid = 0.5 * (lo + hi)
        if kernels.gamma_exp_log_m(mid, v, rho, c) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def rho_for_vopt(v_opt: float, cgf: Cgf, alpha: float) -> float:
    """Mixture weight rho that minimizes the boundary at intrinsic time v_opt.

    Golden-section search on log(rho) over [1e-6 * v_opt, 1e6 * v_opt] to
    relative tolerance 1e-6; the objective is unimodal since the boundary
    blows up as rho -> 0 or rho -> inf.
    """
    if v_opt <= 0.0:
        raise ValueError(f"v_opt must be positive, got {v_opt}")
    _check_alpha(alpha)
    if cgf.kind == "normal":
        objective = lambda rho: normal_mixture_bound(v_opt, rho, alpha)
    elif cgf.kind == "exponential":
        objective = lambda rho: gamma_exponential_bound(v_opt, rho, cgf.c, alpha)
    else:
        raise ValueError(f"no mixture boundary for cgf kind {cgf.kind!r}")
    lo = math.log(1e-6 * v_opt)
    hi = math.log(1e6 * v_opt)
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1 = objective(math.exp(x1))
    f2 = objective(math.exp(x2))
    while hi - lo > 1e-6:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = objective(math.exp(x1))
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = objective(math.exp(x2))
    return math.exp(0.5 * (lo + hi))


@dataclass(frozen=True)
class UniformBoundary:
    """A selected boundary with its one-sided crossing probability."""

    kind: str
    alpha: float
    rho: float = 0.0
    c: float = 0.0


def stitched95_boundary() -> UniformBoundary:
    return UniformBoundary("stitched95", alpha=STITCHED95_ALPHA)


def normal_mixture_boundary(alpha: float, rho: float) -> UniformBoundary:
    _check_alpha(alpha)
    _check_v_rho(0.0, rho)
    return UniformBoundary("normal_mixture", alpha=alpha, rho=rho)


def gamma_exponential_boundary(alpha: float, rho: float, c: float) -> UniformBoundary:
    _check_alpha(alpha)
    _check_v_rho(0.0, rho)
    _check_c(c)
    return UniformBoundary("gamma_exponential_mixture", alpha=alpha, rho=rho, c=c)


def boundary_radius(boundary: UniformBoundary, vhat: float) -> float:
    """Sum-scale radius u(vhat) of a boundary at its own crossing probability.

    For stitched95 the units are normalized (increments in [-2, 2], alpha
    pinned at 0.025 per side); the mixtures work on whatever scale their
    parameters were built for.
    """
    if boundary.kind == "stitched95":
        if boundary.alpha != STITCHED95_ALPHA:
            raise ValueError("stitched95 is only available at alpha=0.025 per side")
        return 2.0 * stitched95_radius(vhat)
    if boundary.kind == "normal_mixture":
        return normal_mixture_bound(vhat, boundary.rho, boundary.alpha)
    if boundary.kind == "gamma_exponential_mixture":
        return gamma_exponential_bound(vhat, boundary.rho, boundary.c, boundary.alpha)
    raise ValueError(f"unknown boundary kind {boundary.kind!r}")


def _check_v_rho(v: float, rho: float) -> None:
    if v < 0.0:
        raise ValueError(f"intrinsic time v must be nonnegative, got {v}")
    if rho <= 0.0:
        raise ValueError(f"mixture weight rho must be positive, got {rho}")


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def _check_c(c: float) -> None:
    if c <= 0.0:
        raise ValueError(f"scale c must be positive, got {c}")
