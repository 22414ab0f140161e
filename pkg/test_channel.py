"""Tests for the BSC simulator and the exact observation laws."""
import math

import numpy as np
import pytest
from scipy import stats

from src.channel import (
    WeightLaw,
    bin_conv,
    binom_logpmf,
    bsc_transmit,
    bsc_weights,
    ensemble_avg_p1,
    ensemble_p1_micro,
    exact_p1_micro,
    p0_micro,
    popcount_table,
    tv_micro,
    tv_product_bernoulli,
    weight_window,
    words_to_indices,
)
from src.exceptions import ContractError, ScaleError


class TestBsc:

    def test_zero_crossover_is_identity(self, rng):
        x = rng.integers(0, 2, size=64, dtype=np.uint8)
        y = bsc_transmit(x, 0.0, rng)
        assert np.array_equal(x, y)
        assert y is not x

    def test_flip_rate(self, rng):
        y = bsc_transmit(np.zeros(200_000, dtype=np.uint8), 0.25, rng)
        assert y.mean() == pytest.approx(0.25, abs=0.005)

    def test_shape_preserved(self, rng):
        assert bsc_transmit(np.ones((3, 5)), 0.1, rng).shape == (3, 5)

    def test_same_seed_same_output(self):
        x = np.zeros(1000, dtype=np.uint8)
        a = bsc_transmit(x, 0.3, np.random.default_rng(5))
        b = bsc_transmit(x, 0.3, np.random.default_rng(5))
        assert np.array_equal(a, b)

    def test_crossover_contract(self, rng):
        with pytest.raises(ContractError):
            bsc_transmit(np.zeros(4), 0.6, rng)

    def test_weights_match_bit_level_mean(self, rng):
        weights = np.full(20_000, 100)
        out = bsc_weights(weights, 1000, 0.25, rng)
        assert out.mean() == pytest.approx(100 * 0.75 + 900 * 0.25, rel=0.01)

    def test_weights_contract(self, rng):
        with pytest.raises(ContractError):
            bsc_weights(np.array([11]), 10, 0.1, rng)


class TestWeightLaws:

    def test_bin_conv(self):
        assert bin_conv(0.1, 0.05) == pytest.approx(0.14)
        assert bin_conv(0.0, 0.25) == 0.25

    def test_logpmf_matches_scipy_in_bulk(self):
        w = np.arange(0, 51)
        assert np.allclose(binom_logpmf(50, 0.3, w), stats.binom.logpmf(w, 50, 0.3))

    def test_logpmf_deep_tail_stays_finite(self):
        value = binom_logpmf(1_000_000, 0.25, 0)
        assert value == pytest.approx(1_000_000 * math.log(0.75))

    def test_logpmf_contract(self):
        with pytest.raises(ContractError):
            binom_logpmf(10, 0.0, 3)
        with pytest.raises(ContractError):
            binom_logpmf(10, 0.5, 11)

    def test_window_holds_the_mass(self):
        law = WeightLaw(n=100_000, p_success=0.25)
        assert law.total_mass() == pytest.approx(1.0, abs=1e-12)
        lo, hi = weight_window(100_000, 0.25, 0.26)
        assert lo < 25_000 < 26_000 < hi


class TestTotalVariation:

    def test_identical_laws(self):
        assert tv_product_bernoulli(1000, 0.25, 0.25) == 0.0

    def test_single_bit(self):
        assert tv_product_bernoulli(1, 0.25, 0.4) == pytest.approx(0.15)

    def test_matches_word_level_sum(self):
        n = 12
        w = np.arange(n + 1)
        counts = np.array([math.comb(n, k) for k in w], dtype=float)
        direct = 0.5 * np.sum(counts * np.abs(0.2 ** w * 0.8 ** (n - w) - 0.3 ** w * 0.7 ** (n - w)))
        assert tv_product_bernoulli(n, 0.2, 0.3) == pytest.approx(direct, rel=1e-12)

    def test_grows_with_n(self):
        values = [tv_product_bernoulli(n, 0.25, 0.2501) for n in (10_000, 100_000, 1_000_000)]
        assert values[0] < values[1] < values[2] <= 1.0

    def test_probability_contract(self):
        with pytest.raises(ContractError):
            tv_product_bernoulli(10, -0.1, 0.2)


class TestMicroLaws:

    def test_popcount_and_indexing(self):
        assert popcount_table(3).tolist() == [0, 1, 1, 2, 1, 2, 2, 3]
        assert words_to_indices(np.array([[1, 0, 1], [0, 1, 1]])).tolist() == [5, 3]

    def test_laws_are_normalized(self):
        codewords = np.array([[1, 0, 0, 1, 0, 1], [0, 1, 1, 0, 0, 0]])
        assert exact_p1_micro(codewords, 0.2).total() == pytest.approx(1.0)
        assert p0_micro(6, 0.2).total() == pytest.approx(1.0)
        assert ensemble_p1_micro(6, 0.3, 0.2).total() == pytest.approx(1.0)

    def test_two_bit_codebook(self):
        P1 = exact_p1_micro(np.array([[0, 1], [1, 0]]), 0.25)
        P0 = p0_micro(2, 0.25)
        assert P1.probs.tolist() == pytest.approx([0.1875, 0.3125, 0.3125, 0.1875])
        assert tv_micro(P0, P1) == pytest.approx(0.375)

    def test_ensemble_law_is_product_bernoulli(self):
        B, rho, q = 8, 0.3, 0.2
        law = ensemble_p1_micro(B, rho, q)
        assert tv_micro(p0_micro(B, q), law) == pytest.approx(tv_product_bernoulli(B, q, bin_conv(rho, q)))

    def test_ensemble_avg_weight_law(self, make_params):
        params = make_params()
        law = ensemble_avg_p1(params)
        assert law.n == params.n == 8192
        assert law.p_success == pytest.approx(bin_conv(0.1, 0.25))
        assert law.total_mass() == pytest.approx(1.0)

    def test_codebook_average_approaches_ensemble_law(self, rng):
        B, rho, q, N = 6, 0.3, 0.2, 4
        ensemble = ensemble_p1_micro(B, rho, q)
        single = exact_p1_micro(rng.random((N, B)) < rho, q).probs
        average = np.mean([exact_p1_micro(rng.random((N, B)) < rho, q).probs for _ in range(1000)], axis=0)
        assert math.fsum(average) == pytest.approx(1.0)
        averaged_tv = 0.5 * np.abs(average - ensemble.probs).sum()
        assert averaged_tv < 0.05
        assert averaged_tv < 0.5 * np.abs(single - ensemble.probs).sum()
        mean_weight = float(popcount_table(B) @ average) / B
        assert mean_weight == pytest.approx(bin_conv(rho, q), rel=0.02)

    def test_length_cap(self):
        with pytest.raises(ScaleError):
            p0_micro(25, 0.25)

    def test_length_mismatch(self):
        with pytest.raises(ContractError):
            tv_micro(p0_micro(3, 0.2), p0_micro(4, 0.2))
