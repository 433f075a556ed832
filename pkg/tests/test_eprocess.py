import math

import numpy as np
import pytest
from scipy import integrate

import anytime_compare.boundaries as B
import anytime_compare.confseq as C
import anytime_compare.eprocess as E
import anytime_compare.kernels as K
from oracles import log_gamma_exp_mixture_quad

RHO = B.rho_for_vopt(10.0, B.exponential_cgf(2.0), 0.025)


def state_with(s, v, bound, t=10):
    return C.ComparisonState(
        bound=bound, t=t, sum_dhat=s, delta_hat=s / t, vhat=v, gamma_next=0.0
    )


class TestEvidenceState:
    def test_fresh_state_is_trivial(self):
        ev = E.EvidenceState("pq")
        assert ev.e_current == 1.0
        assert ev.e_running_max == 1.0
        assert E.p_process(ev) == 1.0

    def test_direction_validated(self):
        with pytest.raises(ValueError, match="direction"):
            E.EvidenceState("pg")

    def test_record_tracks_running_max(self):
        ev = E.EvidenceState("pq").record(0.5).record(2.0).record(1.0)
        assert ev.e_current == 1.0
        assert ev.e_running_max == 2.0

    def test_nonpositive_evidence_rejected(self):
        ev = E.EvidenceState("qp")
        with pytest.raises(ValueError, match="positive"):
            ev.record(0.0)
        with pytest.raises(ValueError, match="positive"):
            ev.record(-3.0)
        with pytest.raises(ValueError, match="NaN"):
            ev.record_log(float("nan"))

    def test_overflow_saturates(self):
        ev = E.EvidenceState("pq").record_log(800.0)
        assert ev.e_current == math.inf
        assert E.p_process(ev) == 5e-324


class TestPProcess:
    def test_no_evidence(self):
        assert E.p_process(E.EvidenceState("pq").record(1.0)) == 1.0

    def test_running_max_drives_p(self):
        ev = E.EvidenceState("pq").record(0.5).record(2.0).record(1.0)
        assert E.p_process(ev) == 0.5

    def test_reciprocal(self):
        assert E.p_process(E.EvidenceState("pq").record(20.0)) == pytest.approx(
            0.05, rel=1e-15
        )

    def test_nonincreasing_and_in_unit_interval(self):
        rng = np.random.Generator(np.random.Philox(key=5))
        ev = E.EvidenceState("pq")
        prev = 1.0
        for x in rng.uniform(-2.0, 3.0, size=300):
            ev = ev.record_log(x)
            p = E.p_process(ev)
            assert 0.0 < p <= prev <= 1.0
            prev = p


class TestEMixture:
    def test_empty_stream(self):
        fresh = C.ComparisonState(bound=0.5)
        assert E.e_mixture(fresh, 1.0, 1.0, "pq") == 1.0
        assert E.e_mixture(fresh, 1.0, 1.0, "qp") == 1.0

    def test_matches_boundary_mixture_and_quadrature(self):
        st = state_with(5.0, 10.0, bound=0.5)
        got = E.e_mixture(st, 1.0, 1.0, "pq")
        assert got == B.gamma_exponential_m(5.0, 10.0, 1.0, 1.0)
        assert math.log(got) == pytest.approx(
            log_gamma_exp_mixture_quad(5.0, 10.0, 1.0, 1.0), abs=1e-9
        )

    def test_directions_negate_the_sum(self):
        st = state_with(3.0, 4.0, bound=0.5)
        assert E.log_e_mixture(st, 2.0, 1.0, "qp") == B.gamma_exponential_log_m(
            -3.0, 4.0, 2.0, 1.0
        )
        with pytest.raises(ValueError, match="direction"):
            E.log_e_mixture(st, 2.0, 1.0, "np")

    def test_scale_mismatch_rejected(self):
        st = state_with(1.0, 1.0, bound=1.0)
        with pytest.raises(ValueError, match="does not match"):
            E.e_mixture(st, 1.0, 1.0, "pq")

    def test_equals_lambda_mixture_of_fixed_lambda(self):
        # route-independent: integrates the fixed-lambda e-value against the
        # conjugate mixing density instead of using the incomplete gamma
        for rho, c, s, v in [(1.0, 1.0, 5.0, 10.0), (2.0, 1.0, 3.0, 4.0), (1.0, 0.5, 2.0, 6.0)]:
            st = state_with(s, v, bound=c / 2.0)
            rho1 = rho / (c * c)

            def f_un(lam):
                return (1.0 - c * lam) ** (rho1 - 1.0) * math.exp(lam * rho / c)

            z_norm, _ = integrate.quad(f_un, 0.0, 1.0 / c, limit=200)
            for direction in ("pq", "qp"):
                def g(lam):
                    return (
                        math.exp(E.log_e_fixed_lambda(st, lam, c, direction))
                        * f_un(lam)
                    )

                num, _ = integrate.quad(g, 0.0, 1.0 / c, limit=200)
                assert E.e_mixture(st, rho, c, direction) == pytest.approx(
                    num / z_norm, rel=1e-6
                )


class TestEFixedLambda:
    def test_lambda_zero_is_one(self):
        st = state_with(7.0, 3.0, bound=0.5)
        assert E.e_fixed_lambda(st, 0.0, 1.0, "pq") == 1.0
        assert E.e_fixed_lambda(st, 0.0, 1.0, "qp") == 1.0

    def test_zero_sum_never_exceeds_one(self):
        st = state_with(0.0, 5.0, bound=0.5)
        for lam in np.linspace(0.0, 0.999, 64):
            assert E.e_fixed_lambda(st, lam, 1.0, "pq") <= 1.0

    def test_domain_errors(self):
        st = state_with(1.0, 1.0, bound=0.5)
        for lam in (1.0, 1.5, -0.1):
            with pytest.raises(ValueError, match="lambda"):
                E.e_fixed_lambda(st, lam, 1.0, "pq")

    def test_explicit_exponent(self):
        st = state_with(2.0, 3.0, bound=0.5)
        lam = 0.4
        psi = (-math.log1p(-lam) - lam) / 1.0
        assert E.log_e_fixed_lambda(st, lam, 1.0, "pq") == pytest.approx(
            lam * 2.0 - psi * 3.0, rel=1e-15
        )


class TestConsistencyWithConfseq:
    def test_positive_lcb_iff_evidence_above_threshold(self):
        # lcb > 0 and m(S, Vhat) > 1/(alpha/2) are the same crossing event
        rng = np.random.Generator(np.random.Philox(key=42))
        d = np.clip(rng.normal(0.08, 0.2, size=3000), -1.0, 1.0)
        s_arr, m_arr, v_arr = C.differential_path(d, 1.0)
        bd = B.gamma_exponential_boundary(0.025, RHO, 2.0)
        log40 = math.log(2.0 / 0.05)
        n_pos = 0
        for t in range(1, 3001):
            st = C.ComparisonState(
                bound=1.0,
                t=t,
                sum_dhat=s_arr[t - 1],
                delta_hat=m_arr[t - 1],
                vhat=v_arr[t - 1],
            )
            lcb = C.cs_eb(st, bd).lower
            log_e = E.log_e_mixture(st, RHO, 2.0, "pq")
            if lcb > 0.0:
                n_pos += 1
                assert log_e > log40
            if log_e > log40 + 1e-6:
                assert lcb > 0.0
        assert n_pos > 1000  # the drift makes the event common, not vacuous


class TestValidityUnderNull:
    def test_false_rejection_rate(self):
        # iid mean-zero differentials: the mixture e-process is a supermartingale,
        # so P(max_t E_t >= 20) <= 0.05
        rng = np.random.Generator(np.random.Philox(key=777))
        log20 = math.log(20.0)
        rejections = 0
        n_runs = 300
        for _ in range(n_runs):
            d = rng.uniform(-1.0, 1.0, size=1000)
            s_arr, _, v_arr = C.differential_path(d, 1.0)
            if K.gamma_exp_max_log_m(s_arr, v_arr, RHO, 2.0) >= log20:
                rejections += 1
        limit = 0.05 + 2.0 * math.sqrt(0.05 * 0.95 / n_runs)
        assert rejections / n_runs <= limit
