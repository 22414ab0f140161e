"""Tests for the concatenated encoder and decoder."""
import numpy as np
import pytest

from conftest import noisy_copy
from src.channel import bsc_transmit
from src.codec import (
    RsStatus,
    bits_to_hex,
    build_concat_code,
    decode,
    decode_outcomes,
    encode,
    hex_to_bits,
    message_to_symbols,
    random_message,
    symbols_to_message,
    throughput_report,
)
from src.exceptions import ContractError
from src.inner_code import DecodeOutcome, OutcomeKind, WorkCounter
from src.outer_code import rs_encode
from src.utils import rng_for

MESSAGE = np.array([1, 0, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 1, 1, 1], dtype=np.uint8)


def outer_symbols(code, message):
    p = code.params
    return rs_encode(code.rs, message_to_symbols(message, p.l1, p.m))


def received(code, symbols):
    """Deterministic channel output carrying one codeword per chunk (None = silent chunk)."""
    p = code.params
    chunks = []
    for cb, w in zip(code.inner, symbols):
        if w is None:
            chunks.append(noisy_copy(np.zeros(p.B, dtype=np.uint8), p.channel.p))
        else:
            chunks.append(noisy_copy(cb.codeword(int(w)), p.channel.p))
    return np.concatenate(chunks)


class TestBits:

    def test_big_endian_symbols(self):
        assert message_to_symbols(MESSAGE, 4, 4).tolist() == [11, 1, 6, 15]
        assert np.array_equal(symbols_to_message([11, 1, 6, 15], 4), MESSAGE)

    def test_symbol_length_contract(self):
        with pytest.raises(ContractError):
            message_to_symbols(MESSAGE[:15], 4, 4)

    def test_hex(self):
        assert bits_to_hex(MESSAGE) == "b16f"
        assert np.array_equal(hex_to_bits("b16f", 16), MESSAGE)
        assert hex_to_bits("1", 5).tolist() == [0, 0, 0, 0, 1]
        with pytest.raises(ContractError):
            hex_to_bits("1ff", 8)


class TestEncode:

    def test_silent_branch_is_all_zero(self, codec_code):
        x = encode(codec_code, None, 0)
        assert x.shape == (codec_code.params.n,)
        assert not x.any()

    def test_chunks_are_inner_codewords(self, codec_code):
        x = encode(codec_code, MESSAGE, 1)
        outer = outer_symbols(codec_code, MESSAGE)
        chunks = x.reshape(codec_code.params.L, codec_code.params.B)
        for i, (chunk, w) in enumerate(zip(chunks, outer)):
            assert np.array_equal(chunk, codec_code.inner[i].codeword(int(w)))

    def test_contracts(self, codec_code):
        with pytest.raises(ContractError):
            encode(codec_code, MESSAGE, 2)
        with pytest.raises(ContractError):
            encode(codec_code, None, 1)
        with pytest.raises(ContractError):
            encode(codec_code, np.zeros(16, dtype=np.uint8), 1)

    def test_random_message(self, codec_code):
        msg = random_message(codec_code, np.random.default_rng(0))
        assert msg.size == codec_code.params.message_bits
        assert msg.any()

    def test_build_is_reproducible(self, codec_params, codec_code):
        again = build_concat_code(codec_params, codec_code.master_seed)
        for a, b in zip(codec_code.inner, again.inner):
            assert np.array_equal(a.codewords, b.codewords)
        assert again.stored_bits == 8 * 16 * 1024


class TestDecode:
    """Global silence rule, erasures and RS outcomes."""

    def test_clean_transmission(self, codec_code):
        outer = outer_symbols(codec_code, MESSAGE)
        result = decode(codec_code, received(codec_code, outer))
        assert result.t_hat == 1
        assert result.rs_status is RsStatus.OK
        assert np.array_equal(result.message, MESSAGE)
        assert result.outcome_string(4) == "".join(format(int(w), "x") for w in outer)

    def test_silent_transmission(self, codec_code):
        result = decode(codec_code, received(codec_code, [None] * 8))
        assert result.t_hat == 0
        assert result.message is None
        assert result.rs_status is RsStatus.NOT_ATTEMPTED
        assert result.count(OutcomeKind.SILENCE) == 8

    def test_all_zero_word_under_narrow_silent_window(self, codec_code):
        """Weight 0 sits below the silent window, so every chunk is a declared error."""
        result = decode(codec_code, np.zeros(codec_code.params.n, dtype=np.uint8))
        assert result.t_hat == 1
        assert result.rs_status is RsStatus.FAILURE
        assert result.count(OutcomeKind.DECLARED_ERROR) == 8

    def test_all_zero_word_when_silent_window_reaches_zero(self, make_params):
        code = build_concat_code(make_params(dy1=1.0), 3)
        result = decode(code, np.zeros(code.params.n, dtype=np.uint8))
        assert result.t_hat == 0
        assert result.message is None

    def test_wrong_chunks_within_radius(self, codec_code):
        outer = outer_symbols(codec_code, MESSAGE)
        corrupted = list(outer)
        corrupted[1] = (int(outer[1]) + 1) % 16
        corrupted[6] = (int(outer[6]) + 5) % 16
        result = decode(codec_code, received(codec_code, corrupted))
        assert np.array_equal(result.message, MESSAGE)

    def test_declared_errors_become_erasures(self, codec_code):
        outer = outer_symbols(codec_code, MESSAGE)
        y = received(codec_code, outer).reshape(8, 1024)
        for i in (0, 2, 4, 7):
            y[i] = 1
        result = decode(codec_code, y.ravel())
        assert result.count(OutcomeKind.DECLARED_ERROR) == 4
        assert np.array_equal(result.message, MESSAGE)

    def test_too_many_erasures(self, codec_code):
        outer = outer_symbols(codec_code, MESSAGE)
        y = received(codec_code, outer).reshape(8, 1024)
        y[:5] = 1
        result = decode(codec_code, y.ravel())
        assert result.t_hat == 1
        assert result.rs_status is RsStatus.FAILURE
        assert result.message is None

    def test_silence_threshold(self, codec_code):
        """L - floor(l2/2) = 6 silent chunks end the block."""
        outer = outer_symbols(codec_code, MESSAGE)
        six = [None] * 6 + list(outer[6:])
        assert decode(codec_code, received(codec_code, six)).t_hat == 0
        five = [None] * 5 + list(outer[5:])
        result = decode(codec_code, received(codec_code, five))
        assert result.t_hat == 1
        assert result.rs_status is RsStatus.FAILURE

    def test_outcomes_contract(self, codec_code):
        with pytest.raises(ContractError):
            decode_outcomes(codec_code, [DecodeOutcome.silence()] * 7)
        with pytest.raises(ContractError):
            decode(codec_code, np.zeros(100, dtype=np.uint8))

    def test_through_bsc(self, codec_code):
        p = codec_code.params
        correct = 0
        for trial in range(10):
            rng = rng_for(1, "codec_test", trial)
            msg = random_message(codec_code, rng)
            y = bsc_transmit(encode(codec_code, msg, 1), p.channel.p, rng)
            result = decode(codec_code, y)
            correct += result.message is not None and np.array_equal(result.message, msg)
            assert decode(codec_code, bsc_transmit(encode(codec_code, None, 0), p.channel.p, rng)).t_hat == 0
        assert correct >= 9


class TestThroughput:

    def test_report(self, codec_code):
        counter = WorkCounter()
        decode(codec_code, received(codec_code, outer_symbols(codec_code, MESSAGE)), counter)
        report = throughput_report(codec_code, counter)
        assert report.n == 8192
        assert report.message_bits == 16
        assert report.decode_ops_bound == 8 * 16 * 1024
        assert report.decode_ops_measured == report.decode_ops_bound
        assert report.effective_r == pytest.approx(16 / np.sqrt(8192))
        assert report.gap == pytest.approx(report.nominal_r - report.effective_r)
        assert report.decode_exponent_realized == pytest.approx(np.log2(8 * 16 * 1024) / 13)
