"""Tests for inner codebooks, typicality windows and the chunk decoder."""
import math
from fractions import Fraction
from types import SimpleNamespace

import numpy as np
import pytest

from conftest import noisy_copy
from src.channel import bin_conv, bsc_transmit
from src.exceptions import ContractError, ScaleError
from src.inner_code import (
    CountWindow,
    DecodeOutcome,
    InnerCodebook,
    OutcomeKind,
    Role,
    TypicalSet,
    WorkCounter,
    cond_typicality,
    empirical_conditional_entropy,
    empirical_entropy,
    empirical_info,
    info_terms,
    inner_decode,
    inner_generate,
    pair_stats,
    type_class_logprob,
    type_class_prob,
    typicality,
    typicality_boxes,
)


def ones_at(B, positions):
    y = np.zeros(B, dtype=np.uint8)
    y[list(positions)] = 1
    return y


class TestCodebook:

    def test_regenerable_from_seed(self, codec_params):
        a = inner_generate(codec_params, 3, 99)
        b = inner_generate(codec_params, 3, 99)
        assert np.array_equal(a.codewords, b.codewords)
        assert a.seed == b.seed

    def test_chunks_and_seeds_differ(self, codec_params):
        base = inner_generate(codec_params, 0, 99)
        assert not np.array_equal(base.codewords, inner_generate(codec_params, 1, 99).codewords)
        assert not np.array_equal(base.codewords, inner_generate(codec_params, 0, 100).codewords)

    def test_shape_weights_and_bias(self, codec_params):
        cb = inner_generate(codec_params, 0, 1)
        assert cb.codewords.shape == (16, 1024)
        assert np.array_equal(cb.weights, cb.codewords.sum(axis=1))
        assert cb.codewords.mean() == pytest.approx(0.1, abs=0.02)
        assert cb.stored_bits == 16 * 1024

    def test_rho_override(self, codec_params):
        cb = inner_generate(codec_params, 0, 1, rho=0.5)
        assert cb.rho == 0.5
        assert cb.codewords.mean() == pytest.approx(0.5, abs=0.03)

    def test_hex_dump(self, codec_params):
        cb = inner_generate(codec_params, 0, 1)
        dump = cb.dump_hex()
        assert sorted(dump) == list(range(16))
        assert len(dump[0]) == 1024 // 4
        assert int(dump[5], 16) == int("".join(map(str, cb.codeword(5))), 2)

    def test_memory_cap(self, codec_params, monkeypatch):
        from src.config import settings
        monkeypatch.setattr(settings, "codebook_memory_cap_bits", 1000)
        with pytest.raises(ScaleError):
            inner_generate(codec_params, 0, 1)


class TestTypicality:

    def test_window_rounding(self):
        window = CountWindow.around(100, 0.25, 0.2)
        assert (window.lo, window.hi) == (20, 30)
        assert window.contains(20) and window.contains(30) and not window.contains(31)
        assert window.contains_array(np.array([19, 25, 31])).tolist() == [False, True, False]

    def test_codec_boxes(self, codec_params):
        boxes = typicality_boxes(codec_params)
        assert (boxes.y_silent.lo, boxes.y_silent.hi) == (29, 74)
        assert (boxes.y_active.lo, boxes.y_active.hi) == (79, 207)
        assert (boxes.bob_10.lo, boxes.bob_10.hi) == (1, 9)
        assert (boxes.bob_11.lo, boxes.bob_11.hi) == (49, 145)

    def test_weight_typicality(self, codec_params):
        assert typicality(codec_params, ones_at(1024, range(50)), TypicalSet.Y_SILENT)
        assert not typicality(codec_params, ones_at(1024, range(50)), "Y_active")
        assert typicality(codec_params, ones_at(1024, range(150)), "Y_active")
        with pytest.raises(ContractError):
            typicality(codec_params, np.zeros(10), "Y_silent")

    def test_conditional_typicality(self, codec_params):
        x = ones_at(1024, range(100))
        y = noisy_copy(x, 0.05)
        assert cond_typicality(codec_params, x, y, Role.BOB)
        assert not cond_typicality(codec_params, x, ones_at(1024, range(500, 650)), "bob")

    def test_pair_stats(self):
        stats = pair_stats([1, 1, 0, 0, 0], [1, 0, 1, 0, 0])
        assert (stats.n00, stats.n01, stats.n10, stats.n11) == (2, 1, 1, 1)
        assert float(stats.fx1) == float(stats.fy1) == pytest.approx(0.4)
        with pytest.raises(ContractError):
            pair_stats([1, 0], [1, 0, 0])

    def test_independent_type_has_zero_information(self):
        info, div = info_terms(0.25, 0.25, 0.5, 0.5)
        assert float(info) == pytest.approx(0.0, abs=1e-15)
        assert float(div) == pytest.approx(0.0, abs=1e-15)

    def test_identical_words_share_all_information(self):
        x = ones_at(8, [0, 3])
        info, _ = empirical_info(x, x, 0.25)
        assert info == pytest.approx(empirical_entropy(x))
        assert empirical_conditional_entropy(x, x) == pytest.approx(0.0, abs=1e-12)

    def test_entropy(self):
        assert empirical_entropy([0, 1, 0, 1]) == pytest.approx(1.0)
        assert empirical_entropy([0, 0, 0]) == 0.0

    def test_type_class_probability(self):
        assert type_class_logprob(4, 0.5, 1, 1, 2) == pytest.approx(-2.0)
        total = math.fsum(
            2.0 ** type_class_logprob(12, 0.2, c10, c11, 5)
            for c11 in range(6) for c10 in range(8)
        )
        assert total == pytest.approx(1.0)

    def test_type_class_from_fractions(self, codec_params):
        direct = type_class_logprob(1024, codec_params.rho, 4, 96, 142)
        assert type_class_prob(codec_params, 4 / 1024, 96 / 1024, 142 / 1024) == pytest.approx(direct)
        with pytest.raises(ContractError):
            type_class_prob(codec_params, 0.001, 0.1, 0.14)

    def test_inconsistent_counts(self):
        with pytest.raises(ContractError):
            type_class_logprob(10, 0.2, 1, 6, 5)


class TestDecoder:
    """Typicality decoding of single chunks."""

    def test_noisy_codeword_decodes(self, codec_code):
        params, cb = codec_code.params, codec_code.inner[0]
        for w in (0, 7, 15):
            outcome = inner_decode(cb, params, noisy_copy(cb.codeword(w), params.channel.p))
            assert outcome == DecodeOutcome.message(w)

    def test_silent_weight(self, codec_code):
        y = ones_at(1024, range(51))
        assert inner_decode(codec_code.inner[0], codec_code.params, y).kind is OutcomeKind.SILENCE

    def test_active_weight_without_match_is_silence(self, codec_code):
        cb = codec_code.inner[0]
        # 150 ones on the columns the codebook uses least
        sparse = np.argsort(cb.codewords.sum(axis=0), kind="stable")[:150]
        y = ones_at(1024, sparse)
        outcome = inner_decode(codec_code.inner[0], codec_code.params, y)
        assert outcome.kind is OutcomeKind.SILENCE

    @pytest.mark.parametrize("weight", [0, 10, 76, 300])
    def test_untypical_weight_is_declared_error(self, codec_code, weight):
        y = ones_at(1024, range(weight))
        assert inner_decode(codec_code.inner[0], codec_code.params, y).kind is OutcomeKind.DECLARED_ERROR

    def test_two_typical_codewords(self, codec_code):
        params, cb = codec_code.params, codec_code.inner[0]
        codewords = cb.codewords.copy()
        codewords[1] = codewords[0]
        twin = InnerCodebook(
            chunk_index=0, B=cb.B, num_codewords=cb.num_codewords, codewords=codewords,
            seed=cb.seed, rho=cb.rho, weights=codewords.sum(axis=1),
        )
        outcome = inner_decode(twin, params, noisy_copy(codewords[0], params.channel.p))
        assert outcome.kind is OutcomeKind.DECLARED_ERROR

    def test_work_counter(self, codec_code):
        params, cb = codec_code.params, codec_code.inner[0]
        counter = WorkCounter()
        inner_decode(cb, params, ones_at(1024, range(51)), counter)
        assert counter.bit_comparisons == 0
        inner_decode(cb, params, noisy_copy(cb.codeword(2), params.channel.p), counter)
        assert counter.bit_comparisons == 16 * 1024
        assert counter.chunk_scans == 1

    def test_length_contract(self, codec_code):
        with pytest.raises(ContractError):
            inner_decode(codec_code.inner[0], codec_code.params, np.zeros(100))

    def test_outcome_chars(self):
        assert DecodeOutcome.silence().to_char(4) == "S"
        assert DecodeOutcome.declared_error().to_char(4) == "E"
        assert DecodeOutcome.message(10).to_char(4) == "a"
        assert DecodeOutcome.message(10).to_char(6) == "[a]"
        assert DecodeOutcome.message(0) != DecodeOutcome.silence()


def _count_window(B, center, width):
    c = Fraction(center) * B
    return math.ceil(c * (1 - Fraction(width))), math.floor(c * (1 + Fraction(width)))


def _inside(count, window):
    return window[0] <= count <= window[1]


def boxed_rule(cb, params, y):
    """The decoding rule written out as a chain of predicates on integer counts."""
    B, rho, p = params.B, params.rho, params.channel.p
    weight = int(y.sum())
    if _inside(weight, _count_window(B, bin_conv(rho, p), params.dy1)):
        hits = []
        for w in range(cb.num_codewords):
            x = cb.codewords[w].astype(np.int64)
            n11 = int(np.dot(x, y))
            n10 = int(x.sum()) - n11
            if _inside(n10, _count_window(B, rho * p, params.dxy10)) and \
                    _inside(n11, _count_window(B, rho * (1 - p), params.dxy11)):
                hits.append(w)
        if len(hits) == 1:
            return DecodeOutcome.message(hits[0])
        return DecodeOutcome.declared_error() if hits else DecodeOutcome.silence()
    if _inside(weight, _count_window(B, p, params.dy1)):
        return DecodeOutcome.silence()
    return DecodeOutcome.declared_error()


class TestRuleFidelity:

    def test_decoder_matches_predicate_chain(self, codec_code, rng):
        params = codec_code.params
        seen = set()
        for trial in range(10_000):
            cb = codec_code.inner[int(rng.integers(0, params.L))]
            kind = trial % 4
            if kind < 2:
                y = bsc_transmit(cb.codeword(int(rng.integers(0, cb.num_codewords))), params.channel.p, rng)
            elif kind == 2:
                y = bsc_transmit(np.zeros(params.B, dtype=np.uint8), params.channel.p, rng)
            else:
                y = np.zeros(params.B, dtype=np.uint8)
                y[rng.choice(params.B, size=int(rng.integers(0, 300)), replace=False)] = 1
            y = y.astype(np.int64)
            outcome = inner_decode(cb, params, y)
            assert outcome == boxed_rule(cb, params, y), trial
            seen.add(outcome.kind)
        assert seen == set(OutcomeKind)


class TestTypeClassSampling:

    @pytest.mark.slow
    def test_probability_matches_sampled_codewords(self, rng):
        B, rho, cz1, c10, c11 = 64, 0.3, 16, 14, 5
        z = np.zeros(B, dtype=bool)
        z[:cz1] = True
        expected = 2.0 ** type_class_logprob(B, rho, c10, c11, cz1)
        samples, hits = 1_000_000, 0
        for _ in range(samples // 100_000):
            x = rng.random((100_000, B)) < rho
            n11 = np.count_nonzero(x[:, z], axis=1)
            n10 = np.count_nonzero(x[:, ~z], axis=1)
            hits += int(np.count_nonzero((n10 == c10) & (n11 == c11)))
        sigma = math.sqrt(expected * (1 - expected) / samples)
        assert abs(hits / samples - expected) <= 3 * sigma

    @pytest.mark.slow
    def test_class_count_concentrates_over_codebooks(self):
        params = SimpleNamespace(B=64, m=16, num_codewords=2 ** 16, rho=0.3, params_hash=lambda: "class-count")
        cz1, c10, c11 = 16, 14, 5
        z = np.zeros(params.B, dtype=bool)
        z[:cz1] = True
        expected = params.num_codewords * 2.0 ** type_class_prob(params, c10 / 64, c11 / 64, cz1 / 64)
        assert expected >= 1000
        for seed in range(50):
            x = inner_generate(params, 0, seed).codewords.astype(bool)
            n11 = np.count_nonzero(x[:, z], axis=1)
            n10 = np.count_nonzero(x[:, ~z], axis=1)
            count = int(np.count_nonzero((n10 == c10) & (n11 == c11)))
            assert abs(count - expected) <= 0.2 * expected, seed
