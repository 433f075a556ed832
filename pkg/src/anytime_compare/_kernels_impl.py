"""Hot numeric loops, written so the same source runs plain or numba-compiled.

Only scalar math and preallocated float64 arrays are used here.  No random
number generation happens inside kernels: callers draw all randomness up
front so results are bit-identical between the compiled and plain paths.
"""

import math

import numpy as np
from numpy.polynomial.legendre import leggauss

_TINY = 1e-300
_MAX_ITER = 10_000_000

# 64-point Gauss-Legendre rule mapped to [0, 1]
_GL_X, _GL_W = leggauss(64)
_GL_NODES = (_GL_X + 1.0) / 2.0
_GL_WEIGHTS = _GL_W / 2.0


def _log1pmx(u):
    """log(1+u) - u without cancellation near u = 0."""
    if abs(u) >= 0.15:
        return math.log1p(u) - u
    term = -0.5 * u * u
    total = term
    k = 2.0
    while abs(term) > 1e-18 * abs(total) and k < 300.0:
        term *= -u * k / (k + 1.0)
        total += term
        k += 1.0
    return total


def _log_prefactor(a, z):
    """log(z^a e^{-z} / Gamma(a)), stable for large a.

    The naive form cancels ~eps*a*log(z) of precision; rewriting around
    z = a with log1p(u)-u plus a Stirling tail keeps every piece O(1).
    """
    if a < 30.0:
        return a * math.log(z) - z - math.lgamma(a)
    u = (z - a) / a
    a2 = a * a
    stir = (
        1.0 / (12.0 * a)
        - 1.0 / (360.0 * a * a2)
        + 1.0 / (1260.0 * a2 * a2 * a)
        - 1.0 / (1680.0 * a2 * a2 * a2 * a)
    )
    return a * _log1pmx(u) + 0.5 * math.log(a / (2.0 * math.pi)) - stir


def _log_gammainc_upper_quad(a, z):
    """log Q(a, z) for a >= 100 and z >= a+1 by Gauss-Legendre on the tail.

    The integrand is a near-Gaussian bump of width sqrt(a); 64 nodes over
    the window [z, max(mode + 11.5 sd, z + 6 sd)] resolve it to machine
    precision near the mode, and far out only the absolute error of the
    (then negligible) Q matters to the caller.
    """
    a1 = a - 1.0
    sqrta1 = math.sqrt(a1)
    xu = a1 + 11.5 * sqrta1
    zu = z + 6.0 * sqrta1
    if zu > xu:
        xu = zu
    gs = np.empty(64)
    gmax = -math.inf
    for j in range(64):
        t = z + (xu - z) * _GL_NODES[j]
        g = a1 * _log1pmx((t - a1) / a1)
        gs[j] = g
        if g > gmax:
            gmax = g
    total = 0.0
    for j in range(64):
        total += _GL_WEIGHTS[j] * math.exp(gs[j] - gmax)
    a2 = a1 * a1
    stir = (
        1.0 / (12.0 * a1)
        - 1.0 / (360.0 * a1 * a2)
        + 1.0 / (1260.0 * a2 * a2 * a1)
        - 1.0 / (1680.0 * a2 * a2 * a2 * a1)
    )
    return (
        math.log(total)
        + gmax
        + math.log(xu - z)
        - 0.5 * math.log(2.0 * math.pi * a1)
        - stir
    )


def log_gammainc_lower(a, z):
    """log of the regularized lower incomplete gamma function P(a, z).

    Three regimes: the classic power series for z < a+1 (compensated
    summation, any a), a Lentz continued fraction for the upper tail at
    small a, and log-space Gauss-Legendre quadrature of the tail for
    a >= 100 where the continued fraction loses digits to cancellation.
    Stays finite for a up to ~1e6 where Gamma(a) itself overflows.
    """
    if z <= 0.0:
        return -math.inf
    if z < a + 1.0:
        term = 1.0 / a
        total = term
        comp = 0.0
        n = 1
        while n < _MAX_ITER:
            term *= z / (a + n)
            yk = term - comp
            tk = total + yk
            comp = (tk - total) - yk
            total = tk
            if term < total * 1e-17:
                break
            n += 1
        return _log_prefactor(a, z) + math.log(total)
    if a >= 100.0:
        log_q = _log_gammainc_upper_quad(a, z)
        return math.log1p(-math.exp(log_q))
    # Lentz continued fraction for Q; P = 1 - Q is safe to form because
    # z >= a + 1 keeps Q well below 1
    b = z + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    i = 1
    while i < _MAX_ITER:
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 3e-16:
            break
        i += 1
    log_q = _log_prefactor(a, z) + math.log(h)
    return math.log1p(-math.exp(log_q))


def gamma_exp_log_m(s, v, rho, c):
    """log of the gamma-exponential mixture value m(s, v) at scale c.

    m is the mixture of exp(lam*s - psi_E(lam; c)*v) over lam in [0, 1/c)
    under a gamma density truncated to the domain, normalized to m(0,0)=1.
    General c reduces to unit scale via (s, v, rho) -> (s/c, v/c^2, rho/c^2).
    For cs + v + rho <= 0 the closed upper bound for the integral is used;
    it is also the continuous limit of the main branch at zero.
    """
    c2 = c * c
    a = (v + rho) / c2
    r1 = rho / c2
    z = (c * s + v + rho) / c2
    log_norm = r1 * math.log(r1) - math.lgamma(r1) - log_gammainc_lower(r1, r1)
    if z <= 0.0:
        return log_norm - r1 - math.log(a)
    return (
        log_norm
        + math.lgamma(a)
        + log_gammainc_lower(a, z)
        - a * math.log(z)
        + (c * s + v) / c2
    )


def gamma_exp_log_m_path(s, v, rho, c):
    """Elementwise gamma_exp_log_m over aligned arrays."""
    out = np.empty(s.shape[0])
    for i in range(s.shape[0]):
        out[i] = gamma_exp_log_m(s[i], v[i], rho, c)
    return out


def gamma_exp_max_log_m(s, v, rho, c):
    """Largest log m(s_t, v_t) along a path; -inf for an empty path."""
    best = -math.inf
    for i in range(s.shape[0]):
        val = gamma_exp_log_m(s[i], v[i], rho, c)
        if val > best:
            best = val
    return best


def gamma_exp_two_sided_crossed(s, v, rho, c, log_threshold):
    """True if max(log m(s_t, v_t), log m(-s_t, v_t)) ever reaches the threshold."""
    for i in range(s.shape[0]):
        if gamma_exp_log_m(s[i], v[i], rho, c) >= log_threshold:
            return True
        if gamma_exp_log_m(-s[i], v[i], rho, c) >= log_threshold:
            return True
    return False


def _poly_eval(coefs, x):
    acc = 0.0
    for k in range(coefs.shape[0] - 1, -1, -1):
        acc = acc * x + coefs[k]
    return acc


def _root_scan_poly(coefs):
    """Root of a polynomial on [0, 1]: 64-interval scan, then bisection.

    Zeros (exact or by exponent underflow) are sign-neutral: a bracket
    needs two nonzero values of opposite sign, and is bisected to width
    1e-6.  With no bracket, a sign-constant scan saturates to 1 (positive)
    or 0 (negative), and an all-zero scan falls back to 1/2.
    """
    fvals = np.empty(65)
    for i in range(65):
        fvals[i] = _poly_eval(coefs, i / 64.0)
    prev_sign = 0
    prev_idx = 0
    for i in range(65):
        fi = fvals[i]
        si = 1 if fi > 0.0 else (-1 if fi < 0.0 else 0)
        if si == 0:
            continue
        if prev_sign == 0:
            prev_sign = si
            prev_idx = i
            continue
        if si != prev_sign:
            lo = prev_idx / 64.0
            hi = i / 64.0
            flo = fvals[prev_idx]
            while hi - lo > 1e-6:
                mid = 0.5 * (lo + hi)
                fm = _poly_eval(coefs, mid)
                if fm == 0.0:
                    return mid
                if (fm > 0.0) == (flo > 0.0):
                    lo = mid
                    flo = fm
                else:
                    hi = mid
            return 0.5 * (lo + hi)
        prev_idx = i
    if prev_sign > 0:
        return 1.0
    if prev_sign < 0:
        return 0.0
    return 0.5


def k29_poly_path(y, degree):
    """Defensive forecasts against outcomes y with kernel (1 + p*q)^degree.

    Expanding the kernel keeps only degree+1 running moments
    sum_i p_i^k (y_i - p_i), so each step costs O(degree) plus the root
    scan, independent of history length.
    """
    n = y.shape[0]
    out = np.empty(n)
    moments = np.zeros(degree + 1)
    coefs = np.zeros(degree + 1)
    binom = np.ones(degree + 1)
    for k in range(1, degree + 1):
        binom[k] = binom[k - 1] * (degree - k + 1) / k
    for t in range(n):
        if t == 0:
            p = 0.5
        else:
            for k in range(degree + 1):
                coefs[k] = binom[k] * moments[k]
            p = _root_scan_poly(coefs)
        out[t] = p
        resid = y[t] - p
        pk = 1.0
        for k in range(degree + 1):
            moments[k] += pk * resid
            pk *= p
    return out


def _rbf_f(hp, hy, n, sigma, x):
    inv = 1.0 / (2.0 * sigma * sigma)
    acc = 0.0
    for i in range(n):
        d = x - hp[i]
        acc += math.exp(-d * d * inv) * (hy[i] - hp[i])
    return acc


def _root_scan_rbf(hp, hy, n, sigma):
    """Same scan and bracket conventions as _root_scan_poly, RBF kernel sum."""
    fvals = np.empty(65)
    for i in range(65):
        fvals[i] = _rbf_f(hp, hy, n, sigma, i / 64.0)
    prev_sign = 0
    prev_idx = 0
    for i in range(65):
        fi = fvals[i]
        si = 1 if fi > 0.0 else (-1 if fi < 0.0 else 0)
        if si == 0:
            continue
        if prev_sign == 0:
            prev_sign = si
            prev_idx = i
            continue
        if si != prev_sign:
            lo = prev_idx / 64.0
            hi = i / 64.0
            flo = fvals[prev_idx]
            while hi - lo > 1e-6:
                mid = 0.5 * (lo + hi)
                fm = _rbf_f(hp, hy, n, sigma, mid)
                if fm == 0.0:
                    return mid
                if (fm > 0.0) == (flo > 0.0):
                    lo = mid
                    flo = fm
                else:
                    hi = mid
            return 0.5 * (lo + hi)
        prev_idx = i
    if prev_sign > 0:
        return 1.0
    if prev_sign < 0:
        return 0.0
    return 0.5


def k29_rbf_path(y, sigma):
    """Defensive forecasts with the RBF kernel; O(t) work per step."""
    n = y.shape[0]
    out = np.empty(n)
    hp = np.empty(n)
    for t in range(n):
        if t == 0:
            p = 0.5
        else:
            p = _root_scan_rbf(hp, y, t, sigma)
        out[t] = p
        hp[t] = p
    return out
