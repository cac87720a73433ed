import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qthreat import attack
from qthreat.attack import (
    HashRateForm,
    MiningAttackParams,
    SignatureAttackParams,
    ecdlp_profile,
    effective_hash_rate,
    grover_oracle_calls,
    mining_overheads,
    mining_profile,
    network_rate_from_difficulty,
    optimistic_hash_rate,
    pool_attack_fraction,
    race_success_monte_carlo,
    race_success_probability,
    signature_crack_estimate,
)
from qthreat.qec import LogicalCircuitProfile, OverheadResult, DistillationSchedule

# pi * 2**14 * sqrt(10), evaluated with mpmath
ORACLE_CALLS_D1 = 162768.29414680332


def fixed_overhead(c_tau):
    return OverheadResult(c_tau, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, DistillationSchedule((c_tau / 10,)))


class TestGrover:
    def test_oracle_calls(self):
        assert grover_oracle_calls(1) == pytest.approx(ORACLE_CALLS_D1, rel=1e-14)
        assert grover_oracle_calls(100) == pytest.approx(10 * ORACLE_CALLS_D1, rel=1e-14)
        assert grover_oracle_calls(1e12) == pytest.approx(1.6276829414680332e11, rel=1e-14)

    def test_rejects_low_difficulty(self):
        with pytest.raises(ValueError):
            grover_oracle_calls(0.5)

    @pytest.mark.parametrize("D", [1, 1e6, 1e12])
    def test_profile(self, D):
        p = mining_profile(D)
        assert p.n_L == 2402
        assert p.n_T == pytest.approx(297784 * ORACLE_CALLS_D1 * math.sqrt(D), rel=1e-14)
        assert p.n_C == pytest.approx(29.4 * p.n_T, rel=1e-15)

    def test_profile_magnitudes(self):
        assert mining_profile(1e12).n_T == pytest.approx(4.85e16, rel=2e-3)
        assert mining_profile(1).n_T == pytest.approx(4.85e10, rel=2e-3)


class TestHashRate:
    def test_closed_form_value(self):
        est = effective_hash_rate(MiningAttackParams(1e12, 66.7e6, 5e-4), fixed_overhead(538.6),
                                  HashRateForm.CLOSED_FORM)
        assert est.h_qc == pytest.approx(0.28 * 66.7e6 * 1e6 / 538.6, rel=1e-14)
        assert est.h_qc == pytest.approx(3.47e10, rel=1e-3)

    def test_first_principles_matches_definition(self):
        params = MiningAttackParams(1e12, 66.7e6, 5e-4)
        est = effective_hash_rate(params, fixed_overhead(538.6))
        tau = ORACLE_CALLS_D1 * 1e6 * 297784 * 538.6 / 66.7e6
        assert est.tau == pytest.approx(tau, rel=1e-12)
        assert est.h_qc == pytest.approx(1e12 * 2**32 / tau, rel=1e-12)

    def test_forms_differ_by_known_ratio(self):
        # 2**32 / (pi 2**14 sqrt(10) 297784) against 0.28
        params = MiningAttackParams(1e12, 66.7e6, 5e-4)
        oh = fixed_overhead(400.0)
        a = effective_hash_rate(params, oh, HashRateForm.FIRST_PRINCIPLES).h_qc
        b = effective_hash_rate(params, oh, HashRateForm.CLOSED_FORM).h_qc
        assert b / a == pytest.approx(0.28 / (2**32 / (ORACLE_CALLS_D1 * 297784)), rel=1e-12)

    def test_parallel_fields(self):
        one = effective_hash_rate(MiningAttackParams(1e12, 1e9, 5e-4, machines=1), fixed_overhead(300))
        many = effective_hash_rate(MiningAttackParams(1e12, 1e9, 5e-4, machines=16), fixed_overhead(300))
        assert one.tau_parallel == pytest.approx(0.39 * one.tau)
        assert many.h_parallel == pytest.approx(10.24 * many.h_qc)

    def test_rejects_zero_c_tau(self):
        with pytest.raises(ValueError):
            effective_hash_rate(MiningAttackParams(1e12, 1e9, 5e-4), fixed_overhead(0.0))

    @pytest.mark.parametrize("kwargs", [{"D": 0.5}, {"s": 0.0}, {"machines": 0}])
    def test_param_validation(self, kwargs):
        base = {"D": 1e12, "s": 1e9, "p_g": 5e-4}
        base.update(kwargs)
        with pytest.raises(ValueError):
            MiningAttackParams(**base)

    @settings(max_examples=100, deadline=None)
    @given(D=st.floats(1, 1e20), s=st.floats(1e3, 1e12), c=st.floats(1, 1e4),
           form=st.sampled_from(list(HashRateForm)))
    def test_sqrt_d_scaling(self, D, s, c, form):
        oh = fixed_overhead(c)
        a = effective_hash_rate(MiningAttackParams(D, s, 5e-4), oh, form).h_qc
        b = effective_hash_rate(MiningAttackParams(4 * D, s, 5e-4), oh, form).h_qc
        assert b == pytest.approx(2 * a, rel=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(D=st.floats(1, 1e20), s=st.floats(1e3, 1e12), m=st.integers(1, 10_000))
    def test_estimates_positive(self, D, s, m):
        est = effective_hash_rate(MiningAttackParams(D, s, 5e-4, m), fixed_overhead(500))
        assert min(est.oracle_calls, est.tau, est.h_qc, est.tau_parallel, est.h_parallel) > 0
        assert est.h_parallel == pytest.approx(2.56 * est.h_qc * math.sqrt(m), rel=1e-12)


class TestOptimisticAndNetwork:
    def test_optimistic(self):
        assert optimistic_hash_rate(50e9, 1e12) == pytest.approx(2.0e15, rel=1e-12)
        assert optimistic_hash_rate(50e9, 1e13) == pytest.approx(6.3245553e15, rel=1e-7)
        assert optimistic_hash_rate(1e9, 0) == 0

    def test_network_rate(self):
        assert network_rate_from_difficulty(1e13) == pytest.approx(7.158278826666667e19, rel=1e-12)
        assert network_rate_from_difficulty(1) == pytest.approx(7158278.826666667, rel=1e-12)
        assert network_rate_from_difficulty(860e9) == pytest.approx(6.16e18, rel=1e-3)

    def test_difficulty_round_trip(self):
        assert attack.difficulty_from_network_rate(network_rate_from_difficulty(3.7e11)) == pytest.approx(3.7e11)

    def test_pool_fraction(self):
        assert pool_attack_fraction(20, 50e9, 1e13) == pytest.approx(1e-3, rel=0.1)
        assert pool_attack_fraction(80, 50e9, 1e13) == pytest.approx(2 * pool_attack_fraction(20, 50e9, 1e13))
        s, D = 3e9, 5e10
        assert pool_attack_fraction(1, s, D) == pytest.approx(2.56 * 0.04 * s * math.sqrt(D) * 600 / (D * 2**32))

    def test_pool_rejects_zero_machines(self):
        with pytest.raises(ValueError):
            pool_attack_fraction(0, 1e9, 1e12)

    @settings(max_examples=100, deadline=None)
    @given(m=st.integers(1, 1000), s=st.floats(1e6, 1e12), D=st.floats(1, 1e18))
    def test_pool_scaling(self, m, s, D):
        base = pool_attack_fraction(m, s, D)
        assert pool_attack_fraction(4 * m, s, D) == pytest.approx(2 * base, rel=1e-12)
        assert pool_attack_fraction(m, s, 4 * D) == pytest.approx(base / 2, rel=1e-12)


class TestEcdlp:
    @pytest.mark.invariant
    def test_256(self):
        p = ecdlp_profile(256)
        assert p.logical_qubits == 2334
        assert p.toffoli_count == (448 * 8 + 4090) * 256**3 == 128748355584
        assert float(f"{p.toffoli_count:.5g}") == 1.2875e11
        assert p.toffoli_depth == pytest.approx(p.toffoli_count * 1.16 / 1.28)

    def test_small_sizes(self):
        assert ecdlp_profile(4).toffoli_count == 319104
        assert ecdlp_profile(4).logical_qubits == 54
        assert ecdlp_profile(2).logical_qubits == 34
        assert ecdlp_profile(4).toffoli_depth == ecdlp_profile(4).toffoli_count

    def test_rejects_tiny_key(self):
        with pytest.raises(ValueError):
            ecdlp_profile(1)

    @given(n=st.integers(2, 4096))
    def test_invariants(self, n):
        p = ecdlp_profile(n)
        assert p.logical_qubits == 9 * n + 2 * math.ceil(math.log2(n)) + 14
        assert p.toffoli_depth <= p.toffoli_count


class TestSignature:
    def test_profile_handoff(self):
        est = signature_crack_estimate(SignatureAttackParams(256, 66.6e6, 5e-4))
        assert isinstance(est.profile, LogicalCircuitProfile)
        assert est.profile.n_C == 20 * est.profile.n_T
        assert est.profile.n_L == 2334
        assert est.tau == pytest.approx(est.profile.n_T * est.overheads.c_tau / 66.6e6, rel=1e-14)

    def test_time_inverse_in_clock(self):
        a = signature_crack_estimate(SignatureAttackParams(256, 1e9, 1e-4))
        b = signature_crack_estimate(SignatureAttackParams(256, 2e9, 1e-4))
        assert b.tau == pytest.approx(a.tau / 2, rel=1e-14)
        assert b.n_Q == a.n_Q

    @pytest.mark.invariant
    def test_deterministic(self):
        p = SignatureAttackParams(256, 1e9, 1e-4)
        assert signature_crack_estimate(p) == signature_crack_estimate(p)


class TestRace:
    def test_analytic_edges(self):
        assert race_success_probability(0.5, 6) == 1.0
        assert race_success_probability(0.2, 0) == 1.0
        assert race_success_probability(0.0, 3) == 0.0
        assert race_success_probability(0.1, 6) == pytest.approx(1.8816764231589e-6, rel=1e-12)

    @pytest.mark.parametrize("q", [-0.1, 1.1])
    def test_rejects_bad_fraction(self, q):
        with pytest.raises(ValueError):
            race_success_probability(q, 1)

    @settings(max_examples=200)
    @given(q=st.floats(0, 1), k=st.integers(0, 50))
    def test_monotone(self, q, k):
        p = race_success_probability(q, k)
        assert 0 <= p <= 1
        assert race_success_probability(q, k + 1) <= p
        assert race_success_probability(min(1.0, q + 0.05), k) >= p

    @pytest.mark.invariant
    @pytest.mark.parametrize("q, k", [(0.1, 2), (0.25, 3), (0.35, 5), (0.45, 2)])
    def test_monte_carlo_within_three_sigma(self, q, k):
        r = race_success_monte_carlo(q, k, trials=200_000, seed=11)
        assert abs(r.probability - race_success_probability(q, k)) <= 3 * r.stderr

    def test_monte_carlo_rare_event(self):
        r = race_success_monte_carlo(0.1, 6, trials=10_000_000, seed=0)
        assert abs(r.probability - race_success_probability(0.1, 6)) <= 3 * r.stderr

    @pytest.mark.invariant
    def test_monte_carlo_reproducible_across_workers(self):
        a = race_success_monte_carlo(0.3, 3, trials=100_000, seed=5, workers=1, batch=25_000)
        b = race_success_monte_carlo(0.3, 3, trials=100_000, seed=5, workers=2, batch=25_000)
        assert a == b
