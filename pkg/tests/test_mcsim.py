import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from statsmodels.stats.proportion import proportion_confint

from oracles import hamming_weight_moments
from photonlink.mcsim import (
    BLOCK_SIZE,
    SimConfig,
    SimReport,
    binomial_ci95,
    enumerate_exact,
    simulate_ppm,
    validation_channel,
)
from photonlink.ppm import PpmChannel, ber_mppm, ser_mppm_exact


def run(M, k_s, k_b, n, seed=0, **kw):
    workers = kw.pop("workers", 1)
    return simulate_ppm(SimConfig(PpmChannel(M, k_s, k_b), n, seed, **kw), workers=workers)


def within_3_sigma(report, p):
    sigma = math.sqrt(p * (1 - p) / report.symbols_run)
    return abs(report.ser_hat - p) <= 3 * sigma


class TestConfig:
    def test_rejects_zero_symbols(self):
        with pytest.raises(ValueError):
            SimConfig(PpmChannel(2, 1, 1), 0)

    @pytest.mark.parametrize("seed", [-1, 2**64, 1.5])
    def test_rejects_bad_seed(self, seed):
        with pytest.raises(ValueError):
            SimConfig(PpmChannel(2, 1, 1), 10, seed)

    def test_rejects_bad_chunk(self):
        with pytest.raises(ValueError):
            SimConfig(PpmChannel(2, 1, 1), 10, chunk_size=0)

    def test_rejects_bad_workers(self):
        with pytest.raises(ValueError):
            run(2, 1, 1, 10, workers=0)


class TestReport:
    def test_fields(self):
        r = run(4, 1.0, 0.5, 5000, seed=3)
        assert isinstance(r, SimReport)
        assert r.symbols_run == 5000 and r.seed == 3
        assert r.ser_hat == r.symbol_errors / 5000
        assert r.ber_hat == r.bit_errors / (5000 * 2)
        assert r.bit_errors <= 2 * r.symbol_errors
        assert r.ser_ci95[0] <= r.ser_hat <= r.ser_ci95[1]
        assert r.wall_time >= 0

    def test_to_dict(self):
        d = run(2, 1.0, 0.5, 100).to_dict()
        assert d["ser_ci95"] == list(d["ser_ci95"])
        assert set(d) == {"symbols_run", "symbol_errors", "bit_errors", "ser_hat", "ber_hat",
                          "ser_ci95", "wall_time", "seed"}


class TestDeterminism:
    def test_repeatable(self):
        assert run(8, 2.0, 0.5, 40_000, 11).tallies() == run(8, 2.0, 0.5, 40_000, 11).tallies()

    @pytest.mark.parametrize("chunk", [1, BLOCK_SIZE - 1, BLOCK_SIZE, 3 * BLOCK_SIZE + 5, 10**7])
    def test_chunk_size_invariant(self, chunk):
        ref = run(4, 2.0, 0.7, 70_001, 5)
        assert run(4, 2.0, 0.7, 70_001, 5, chunk_size=chunk).tallies() == ref.tallies()

    def test_worker_count_invariant(self):
        ref = run(16, 5.0, 0.3, 60_000, 9, chunk_size=BLOCK_SIZE)
        for workers in (2, 3):
            other = run(16, 5.0, 0.3, 60_000, 9, chunk_size=BLOCK_SIZE, workers=workers)
            assert other.tallies() == ref.tallies()

    def test_seed_changes_stream(self):
        assert run(4, 0.0, 1.0, 20_000, 1).tallies() != run(4, 0.0, 1.0, 20_000, 2).tallies()

    def test_prefix_consistency(self):
        # the first blocks of a longer run are the blocks of a shorter run
        short = run(2, 0.0, 1.0, BLOCK_SIZE, 4)
        longer = run(2, 0.0, 1.0, 2 * BLOCK_SIZE, 4, chunk_size=BLOCK_SIZE)
        assert short.symbol_errors <= longer.symbol_errors


class TestStatistics:
    def test_noise_free_strong_signal(self):
        assert run(2, 50.0, 0.0, 100_000).symbol_errors == 0

    @pytest.mark.parametrize("M", [2, 4, 8])
    def test_pure_guessing(self, M):
        r = run(M, 0.0, 1.0, 200_000, seed=M)
        assert within_3_sigma(r, (M - 1) / M)

    @pytest.mark.slow
    def test_eight_ary_guessing_million(self):
        assert within_3_sigma(run(8, 0.0, 1.0, 10**6, seed=17), 0.875)

    def test_all_empty_is_guessing(self):
        r = run(4, 0.0, 0.0, 100_000, seed=2)
        assert within_3_sigma(r, 0.75)

    @pytest.mark.parametrize("M,k_s,k_b", [(2, 1.0, 1.0), (4, 2.0, 0.5), (16, 4.0, 0.2), (64, 6.0, 0.1)])
    def test_agrees_with_analytic(self, M, k_s, k_b):
        r = run(M, k_s, k_b, 200_000, seed=100 + M)
        assert within_3_sigma(r, ser_mppm_exact(PpmChannel(M, k_s, k_b)))

    @pytest.mark.parametrize("M,k_s,k_b", [(4, 1.5, 0.5), (16, 3.0, 0.3)])
    def test_bit_to_symbol_ratio(self, M, k_s, k_b):
        r = run(M, k_s, k_b, 100_000, seed=21)
        b = M.bit_length() - 1
        mean, var = hamming_weight_moments(b)
        assert r.symbol_errors >= 2000
        ratio = r.bit_errors / (r.symbol_errors * b)
        sigma = math.sqrt(var / r.symbol_errors) / b
        assert abs(ratio - M / (2 * (M - 1))) <= 3 * sigma
        assert mean / b == pytest.approx(M / (2 * (M - 1)), rel=1e-15)

    def test_ber_matches_analytic(self):
        ch = PpmChannel(8, 3.0, 0.5)
        r = run(8, 3.0, 0.5, 200_000, seed=8)
        expected = ber_mppm(ch).ber
        sigma = math.sqrt(expected / (r.symbols_run * 3))
        assert abs(r.ber_hat - expected) <= 4 * sigma

    def test_standard_error_bound(self):
        for p, n in [(0.5, 100), (1e-3, 10**6), (0.9, 50)]:
            assert math.sqrt(p * (1 - p) / n) <= math.sqrt(p / n)


class TestWilson:
    def test_zero_errors(self):
        low, high = binomial_ci95(0, 100)
        assert low == 0.0 and 0 < high < 0.05

    def test_all_errors(self):
        low, high = binomial_ci95(100, 100)
        assert high == 1.0 and low > 0.95

    def test_symmetric_at_half(self):
        low, high = binomial_ci95(50, 100)
        assert 0.5 - low == pytest.approx(high - 0.5, rel=1e-12)

    def test_tail_point(self):
        low, high = binomial_ci95(83, 500_000_000)
        assert low < 1.66e-7 < high

    @pytest.mark.parametrize("e,n", [(0, 10), (3, 10), (83, 5 * 10**8), (2000, 10**6), (999, 1000)])
    def test_matches_statsmodels(self, e, n):
        ref = proportion_confint(e, n, alpha=0.05, method="wilson")
        assert binomial_ci95(e, n) == pytest.approx(ref, rel=1e-9, abs=1e-15)

    def test_width_shrinks_by_root_two(self):
        for p in (1e-3, 0.05, 0.3):
            n = 200_000
            w1 = np.subtract(*binomial_ci95(round(p * n), n)[::-1])
            w2 = np.subtract(*binomial_ci95(round(p * 2 * n), 2 * n)[::-1])
            assert w1 / w2 == pytest.approx(math.sqrt(2), rel=1e-2)

    def test_empirical_width_scaling(self):
        a = run(4, 1.0, 0.5, 50_000, seed=31)
        b = run(4, 1.0, 0.5, 100_000, seed=31)
        wa = a.ser_ci95[1] - a.ser_ci95[0]
        wb = b.ser_ci95[1] - b.ser_ci95[0]
        assert wa / wb == pytest.approx(math.sqrt(2), rel=0.05)

    @pytest.mark.parametrize("e,n", [(-1, 10), (11, 10), (0, 0)])
    def test_rejects_invalid(self, e, n):
        with pytest.raises(ValueError):
            binomial_ci95(e, n)

    @settings(max_examples=200)
    @given(n=st.integers(1, 10**12), frac=st.floats(0, 1))
    def test_contains_estimate(self, n, frac):
        e = int(frac * n)
        low, high = binomial_ci95(e, n)
        assert 0 <= low <= e / n <= high <= 1


class TestEnumerateExact:
    def test_binary_symmetry(self):
        ser, residual = enumerate_exact(PpmChannel(2, 0.0, 1.0), 40)
        assert abs(ser - 0.5) <= residual + 1e-12

    def test_binary_quantum_limit(self):
        ser, residual = enumerate_exact(PpmChannel(2, 3.0, 0.0), 40)
        assert ser == pytest.approx(0.5 * math.exp(-3.0), rel=1e-12)
        assert residual < 1e-20

    def test_four_ary_reference(self):
        ser, residual = enumerate_exact(PpmChannel(4, 2.0, 0.5), 40)
        assert residual < 1e-20
        assert ser == pytest.approx(0.23307, abs=1e-5)
        assert abs(ser - ser_mppm_exact(PpmChannel(4, 2.0, 0.5))) <= residual + 1e-9

    def test_residual_grows_when_cap_is_tight(self):
        ser, residual = enumerate_exact(PpmChannel(4, 5.0, 1.0), 6)
        exact = ser_mppm_exact(PpmChannel(4, 5.0, 1.0))
        assert residual > 1e-3
        assert ser <= exact <= ser + residual

    @pytest.mark.parametrize("M", [8, 16])
    def test_rejects_order(self, M):
        with pytest.raises(ValueError):
            enumerate_exact(PpmChannel(M, 1.0, 0.5), 10)

    def test_rejects_cap(self):
        with pytest.raises(ValueError):
            enumerate_exact(PpmChannel(2, 1.0, 1.0), 61)


class TestValidationChannel:
    def test_background_split(self):
        ch = validation_channel(8)
        assert (ch.order, ch.signal_counts, ch.background_counts) == (8, 20.0, 0.5)

    def test_per_slot_switch(self):
        assert validation_channel(8, background_per_symbol=False).background_counts == 4.0
