"""Uniform boundaries: frozen values, mixture identities, crossing Monte Carlo."""

import math

import numpy as np
import pytest
from scipy import special

from anytime_compare import boundaries as B
from anytime_compare import kernels

from oracles import log_gamma_exp_mixture_quad, mixture_normal_quad


class TestCgf:
    def test_frozen_values(self):
        assert B.psi(B.normal_cgf(), 0.0) == 0.0
        assert B.psi(B.normal_cgf(), 2.0) == 2.0
        # exponential at c=1, lam=1/2: -log(1/2) - 1/2
        assert B.psi(B.exponential_cgf(1.0), 0.5) == pytest.approx(
            0.19314718055994531, rel=1e-12
        )
        assert B.psi(B.gamma_cgf(1.0), 0.5) == pytest.approx(0.25, rel=1e-12)

    def test_domain(self):
        e = B.exponential_cgf(2.0)
        assert e.lambda_max == 0.5
        assert B.normal_cgf().lambda_max == math.inf
        B.psi(B.normal_cgf(), 100.0)  # unbounded domain
        with pytest.raises(ValueError):
            B.psi(e, 0.5)
        with pytest.raises(ValueError):
            B.psi(e, -0.01)
        with pytest.raises(ValueError):
            B.exponential_cgf(0.0)
        with pytest.raises(ValueError):
            B.gamma_cgf(-1.0)

    def test_convex_increasing_and_ordered(self):
        cgfs = [B.normal_cgf(), B.exponential_cgf(1.0), B.gamma_cgf(1.0)]
        grid = np.linspace(0.0, 0.999, 300)
        vals = np.array([[B.psi(c, l) for l in grid] for c in cgfs])
        d1 = np.diff(vals, axis=1)
        assert np.all(d1 >= 0.0)           # increasing
        assert np.all(np.diff(d1, axis=1) >= -1e-15)  # convex
        # normal <= exponential <= gamma on the shared domain
        assert np.all(vals[0] <= vals[1] + 1e-15)
        assert np.all(vals[1] <= vals[2] + 1e-15)

    def test_small_lambda_limit(self):
        # all three behave like lam^2/2 near zero
        lam = 1e-6
        base = B.psi(B.normal_cgf(), lam)
        for c in (B.exponential_cgf(1.0), B.gamma_cgf(1.0)):
            assert B.psi(c, lam) / base == pytest.approx(1.0, abs=1e-5)


class TestStitched95:
    def test_frozen_value(self):
        # 1.7*sqrt(loglog(2) + 3.8) + 3.4*loglog(2) + 13 with loglog(2) = -0.366513
        assert B.stitched95_radius(1.0) == pytest.approx(14.9039, abs=1e-3)
        assert B.stitched95_radius(1.0) == pytest.approx(14.903900142653546, rel=1e-12)

    def test_floor_below_one(self):
        r1 = B.stitched95_radius(1.0)
        assert B.stitched95_radius(0.0) == r1
        assert B.stitched95_radius(0.5) == r1

    def test_high_precision_reevaluation(self):
        mp = pytest.importorskip("mpmath")
        for v in (1.0, 37.5, 1e6):
            with mp.workdps(40):
                vm = mp.mpf(max(v, 1.0))
                ll = mp.log(mp.log(2 * vm))
                truth = float(1.7 * mp.sqrt(vm * (ll + mp.mpf("3.8"))) + mp.mpf("3.4") * ll + 13)
            assert B.stitched95_radius(v) == pytest.approx(truth, rel=1e-12)

    def test_monotone(self):
        grid = np.geomspace(1.0, 1e6, 200)
        vals = [B.stitched95_radius(v) for v in grid]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            B.stitched95_radius(-0.1)


class TestNormalMixture:
    def test_origin_is_one(self):
        for rho in (0.1, 1.0, 50.0):
            assert B.mixture_m_normal(0.0, 0.0, rho) == 1.0

    def test_closed_form_vs_quadrature(self):
        for s, v, rho in [
            (0.0, 0.0, 1.0), (1.0, 1.0, 1.0), (3.0, 2.0, 0.5),
            (10.0, 50.0, 10.0), (-4.0, 9.0, 2.0),
        ]:
            assert B.mixture_m_normal(s, v, rho) == pytest.approx(
                mixture_normal_quad(s, v, rho), rel=1e-12
            )

    def test_even_in_s(self):
        # full-Gaussian mixing makes m symmetric; only this variant satisfies
        # the closed-form crossing identity checked below
        for s, v, rho in [(1.0, 1.0, 1.0), (10.0, 3.0, 0.5)]:
            assert B.mixture_m_normal(-s, v, rho) == B.mixture_m_normal(s, v, rho)

    def test_bound_frozen(self):
        # sqrt(2 * log(800))
        u = B.normal_mixture_bound(1.0, 1.0, 0.05)
        assert u == pytest.approx(math.sqrt(2.0 * math.log(800.0)), rel=1e-14)
        assert u == pytest.approx(3.6563948713638483, rel=1e-12)

    def test_bound_collapse_point(self):
        # alpha = e^{-1/2}, v = 0: log term collapses to 1
        assert B.normal_mixture_bound(0.0, 1.0, math.exp(-0.5)) == pytest.approx(1.0, rel=1e-12)

    def test_crossing_identity(self):
        for v in (0.25, 1.0, 5.0, 100.0, 1e3):
            for rho in (0.5, 1.0, 10.0):
                for alpha in (0.025, 0.05, 0.1):
                    u = B.normal_mixture_bound(v, rho, alpha)
                    assert B.mixture_m_normal(u, v, rho) == pytest.approx(
                        1.0 / alpha, abs=1e-8 / alpha
                    )

    def test_bound_matches_bisection_root(self):
        v, rho, alpha = 1e3, 1.0, 0.05
        lo, hi = 0.0, 1e4
        while hi - lo > 1e-7:
            mid = 0.5 * (lo + hi)
            if B.mixture_m_normal(mid, v, rho) < 1.0 / alpha:
                lo = mid
            else:
                hi = mid
        assert B.normal_mixture_bound(v, rho, alpha) == pytest.approx(
            0.5 * (lo + hi), abs=1e-6
        )

    def test_validation(self):
        with pytest.raises(ValueError):
            B.mixture_m_normal(0.0, -1.0, 1.0)
        with pytest.raises(ValueError):
            B.mixture_m_normal(0.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            B.normal_mixture_bound(1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            B.normal_mixture_bound(1.0, 1.0, 0.0)


class TestGammaExponential:
    def test_exp_of_log(self):
        lm = B.gamma_exponential_log_m(5.0, 10.0, 1.0, 1.0)
        assert B.gamma_exponential_m(5.0, 10.0, 1.0, 1.0) == pytest.approx(
            math.exp(lm), rel=1e-15
        )

    def test_frozen_quadrature_point(self):
        truth = log_gamma_exp_mixture_quad(5.0, 10.0, 1.0, 1.0)
        assert B.gamma_exponential_log_m(5.0, 10.0, 1.0, 1.0) == pytest.approx(
            truth, abs=1e-9
        )

    def test_bound_self_consistency(self):
        for v, rho, c, alpha in [
            (1.0, 1.0, 1.0, 0.05),
            (10.0, 2.0, 0.2, 0.025),
            (100.0, 14.0, 2.0, 0.025),
            (1.0, 1.0, 1.0, 0.9),   # alpha near 1: crossing point still found
        ]:
            u = B.gamma_exponential_bound(v, rho, c, alpha)
            lm = B.gamma_exponential_log_m(u, v, rho, c)
            assert lm == pytest.approx(math.log(1.0 / alpha), abs=1e-6)

    def test_bound_monotone_in_v(self):
        us = [B.gamma_exponential_bound(v, 1.0, 1.0, 0.05) for v in (1.0, 10.0, 100.0)]
        assert us[0] <= us[1] <= us[2]

    def test_bracketing_failure_is_loud(self):
        with pytest.raises(RuntimeError):
            B.gamma_exponential_bound(1.0, 1.0, 1.0, 0.001, s_limit=5.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            B.gamma_exponential_m(0.0, 1.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            B.gamma_exponential_m(0.0, 1.0, -1.0, 1.0)
        with pytest.raises(ValueError):
            B.gamma_exponential_bound(1.0, 1.0, 1.0, 1.5)


class TestRhoForVopt:
    def test_normal_matches_lambert_w(self):
        # closed-form minimizer: rho* = v / (-W_{-1}(-alpha^2/e) - 1)
        for v_opt, alpha in [(10.0, 0.025), (1.0, 0.05), (100.0, 0.025)]:
            w = special.lambertw(-alpha * alpha / math.e, k=-1).real
            truth = v_opt / (-w - 1.0)
            got = B.rho_for_vopt(v_opt, B.normal_cgf(), alpha)
            assert got == pytest.approx(truth, rel=2e-6)

    def test_stationarity(self):
        rho = B.rho_for_vopt(10.0, B.normal_cgf(), 0.025)
        h = 1e-3
        up = B.normal_mixture_bound(10.0, rho * (1 + h), 0.025)
        dn = B.normal_mixture_bound(10.0, rho * (1 - h), 0.025)
        dlogu_dlogrho = (up - dn) / (2 * h) / up
        assert abs(dlogu_dlogrho) < 1e-4

    def test_scale_equivariance(self):
        for v in (1.0, 10.0):
            r1 = B.rho_for_vopt(v, B.normal_cgf(), 0.025)
            r2 = B.rho_for_vopt(2 * v, B.normal_cgf(), 0.025)
            assert r2 / r1 == pytest.approx(2.0, rel=1e-5)

    def test_minimizer_beats_neighbors(self):
        for cgf, u_of in [
            (B.normal_cgf(), lambda r: B.normal_mixture_bound(10.0, r, 0.025)),
            (B.exponential_cgf(1.0), lambda r: B.gamma_exponential_bound(10.0, r, 1.0, 0.025)),
        ]:
            rho = B.rho_for_vopt(10.0, cgf, 0.025)
            u0 = u_of(rho)
            assert u0 <= u_of(2.0 * rho) + 1e-7
            assert u0 <= u_of(0.5 * rho) + 1e-7

    def test_gamma_cgf_unsupported(self):
        with pytest.raises(ValueError):
            B.rho_for_vopt(10.0, B.gamma_cgf(1.0), 0.05)
        with pytest.raises(ValueError):
            B.rho_for_vopt(0.0, B.normal_cgf(), 0.05)


class TestUniformBoundary:
    def test_radius_dispatch(self):
        st = B.stitched95_boundary()
        assert B.boundary_radius(st, 3.0) == 2.0 * B.stitched95_radius(3.0)
        nm = B.normal_mixture_boundary(0.025, 2.0)
        assert B.boundary_radius(nm, 7.0) == B.normal_mixture_bound(7.0, 2.0, 0.025)
        ge = B.gamma_exponential_boundary(0.05, 1.0, 1.0)
        assert B.boundary_radius(ge, 7.0) == B.gamma_exponential_bound(7.0, 1.0, 1.0, 0.05)

    def test_stitched_alpha_is_pinned(self):
        rogue = B.UniformBoundary("stitched95", alpha=0.05)
        with pytest.raises(ValueError):
            B.boundary_radius(rogue, 1.0)
        with pytest.raises(ValueError):
            B.boundary_radius(B.UniformBoundary("nope", alpha=0.05), 1.0)

    def test_constructor_validation(self):
        with pytest.raises(ValueError):
            B.normal_mixture_boundary(0.0, 1.0)
        with pytest.raises(ValueError):
            B.gamma_exponential_boundary(0.05, -1.0, 1.0)

    def test_radius_monotone_and_finite(self):
        grid = np.geomspace(0.5, 1e5, 40)
        for bd in (
            B.stitched95_boundary(),
            B.normal_mixture_boundary(0.025, 1.0),
            B.gamma_exponential_boundary(0.025, 1.0, 1.0),
        ):
            vals = [B.boundary_radius(bd, v) for v in grid]
            assert all(math.isfinite(x) for x in vals)
            assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))


class TestFanKernel:
    def test_supermartingale_pointwise_bound(self):
        # exp(lam*xi - psi_E(lam) xi^2) <= 1 + lam*xi for xi >= -1
        lam = np.linspace(0.0, 0.999, 100)[:, None]
        xi = np.linspace(-1.0, 10.0, 100)[None, :]
        psi = -np.log1p(-lam) - lam
        lhs = np.exp(lam * xi - psi * xi * xi)
        assert np.all(lhs <= 1.0 + lam * xi + 1e-12)


class TestCrossingProbability:
    """One-sided boundary crossings on mean-zero uniform increments.

    P(exists t: S_t >= u(V_t)) <= alpha must hold path-uniformly; with 2000
    paths the binomial check has slack 2*sqrt(alpha(1-alpha)/2000).
    """

    N_PATHS = 2000
    T = 5000

    @pytest.fixture(scope="class")
    @staticmethod
    def paths():
        rng = np.random.Generator(np.random.Philox(key=90210))
        x = rng.uniform(
            -1.0, 1.0, size=(TestCrossingProbability.N_PATHS, TestCrossingProbability.T)
        )
        return np.cumsum(x, axis=1), np.cumsum(x * x, axis=1)

    def test_normal_mixture(self, paths):
        S, _ = paths
        rho = 1.0
        t = np.arange(1, self.T + 1, dtype=float)
        # bounded in [-1,1] means 1-sub-Gaussian, so intrinsic time is t
        logm = 0.5 * (math.log(rho) - np.log(t + rho)) + S**2 / (2.0 * (t + rho))
        mx = np.where(S > 0, logm, -np.inf).max(axis=1)
        for alpha in (0.025, 0.05):
            frac = float(np.mean(mx >= math.log(1.0 / alpha)))
            assert frac <= alpha + 2.0 * math.sqrt(alpha * (1 - alpha) / self.N_PATHS)

    def test_gamma_exponential(self, paths):
        S, V = paths
        rho, c = 1.0, 1.0
        thresh_min = math.log(1.0 / 0.05)
        # Chernoff envelope sup_lam(lam*s - psi_E(lam)v) = s - v*log1p(s/v)
        # dominates log m, so cells below the smaller threshold are pruned
        # before the exact (slower) mixture evaluation
        Sp = np.maximum(S, 0.0)
        envelope = Sp - V * np.log1p(Sp / V)
        rows, cols = np.nonzero(envelope >= thresh_min)
        exact = kernels.gamma_exp_log_m_path(S[rows, cols], V[rows, cols], rho, c)
        mx = np.full(self.N_PATHS, -np.inf)
        np.maximum.at(mx, rows, exact)
        for alpha in (0.025, 0.05):
            frac = float(np.mean(mx >= math.log(1.0 / alpha)))
            assert frac <= alpha + 2.0 * math.sqrt(alpha * (1 - alpha) / self.N_PATHS)


class TestAsymptoticRate:
    def test_u_scales_like_sqrt_v_log_v(self):
        for u_of in (
            lambda v: B.normal_mixture_bound(v, 1.0253, 0.025),
            lambda v: B.gamma_exponential_bound(v, 1.0, 1.0, 0.025),
            lambda v: B.gamma_exponential_bound(v, 1.0, 0.1, 0.025),
        ):
            for v in np.geomspace(1e2, 1e6, 9):
                ratio = u_of(v) / math.sqrt(v * math.log(v))
                assert 0.5 <= ratio <= 4.0
