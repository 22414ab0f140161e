"""
Concatenated encoder/decoder: systematic RS outer code over L random inner codebooks.

Bob's global silence rule: when at least L - floor(l2/2) chunks decode to
Silence the transmission is declared absent (t_hat = 0). Otherwise every
non-Message chunk becomes an erasure for the RS decoder.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional
import logging
import math

import numpy as np

from src.exceptions import ContractError, RsDecodeFailure
from src.inner_code import DecodeOutcome, InnerCodebook, OutcomeKind, WorkCounter, generate_codebooks, inner_decode
from src.outer_code import RsCode, field_build, rs_build, rs_decode, rs_encode

logger = logging.getLogger(__name__)


class RsStatus(Enum):
    OK = "ok"
    FAILURE = "failure"
    NOT_ATTEMPTED = "not_attempted"


@dataclass(frozen=True, eq=False)
class ConcatCode:
    """Outer RS code plus L immutable inner codebooks."""
    params: object
    rs: RsCode
    inner: List[InnerCodebook] = field(repr=False)
    master_seed: int

    @property
    def stored_bits(self) -> int:
        return sum(cb.stored_bits for cb in self.inner)


@dataclass
class TransmissionResult:
    """Bob's decision for one block."""
    t_hat: int
    message: Optional[np.ndarray]
    chunk_outcomes: List[DecodeOutcome]
    rs_status: RsStatus

    def outcome_string(self, m: int) -> str:
        return "".join(o.to_char(m) for o in self.chunk_outcomes)

    def count(self, kind: OutcomeKind) -> int:
        return sum(1 for o in self.chunk_outcomes if o.kind is kind)


@dataclass
class ThroughputReport:
    n: int
    nominal_r: float
    effective_r: float
    gap: float
    message_bits: int
    stored_bits: int
    encode_ops: float                 # sqrt(n) log sqrt(n)
    decode_exponent_nominal: float    # r_u k1 + 1
    decode_exponent_realized: float   # log(n 2^m) / log n
    decode_ops_bound: int             # L 2^m B
    decode_ops_measured: Optional[int] = None


def build_concat_code(params, master_seed: int, n_jobs: int = None) -> ConcatCode:
    """Build the RS code and all inner codebooks for params from a seed."""
    try:
        gf = field_build(params.m)
        rs = rs_build(gf, params.L, params.l1)
        inner = generate_codebooks(params, master_seed, n_jobs=n_jobs)
        logger.info(
            f"Built concatenated code: n={params.n}, L={params.L}, B={params.B}, "
            f"m={params.m}, l1={params.l1}, rho={params.rho:.5g}"
        )
        return ConcatCode(params=params, rs=rs, inner=inner, master_seed=master_seed)
    except Exception as e:
        logger.error(f"Error building concatenated code: {e}")
        raise


def message_to_symbols(bits, l1: int, m: int) -> np.ndarray:
    """Split l1*m bits into l1 big-endian m-bit symbols."""
    bits = np.asarray(bits, dtype=np.int64).ravel()
    if bits.size != l1 * m:
        raise ContractError(f"Message must have {l1 * m} bits, got {bits.size}")
    weights = 1 << np.arange(m - 1, -1, -1, dtype=np.int64)
    return bits.reshape(l1, m) @ weights


def symbols_to_message(symbols, m: int) -> np.ndarray:
    symbols = np.asarray(symbols, dtype=np.int64)
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
    return ((symbols[:, None] >> shifts[None, :]) & 1).astype(np.uint8).ravel()


def bits_to_hex(bits) -> str:
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    value = int("".join(str(b) for b in bits), 2) if bits.size else 0
    return format(value, f"0{math.ceil(bits.size / 4)}x")


def hex_to_bits(text: str, nbits: int) -> np.ndarray:
    value = int(text, 16)
    if value >= 1 << nbits:
        raise ContractError(f"Hex value does not fit in {nbits} bits")
    return np.array([(value >> (nbits - 1 - i)) & 1 for i in range(nbits)], dtype=np.uint8)


def random_message(code: ConcatCode, rng: np.random.Generator) -> np.ndarray:
    """Uniform nonzero message of l1*m bits."""
    nbits = code.params.message_bits
    while True:
        bits = rng.integers(0, 2, size=nbits, dtype=np.uint8)
        if bits.any():
            return bits


def encode_symbols(code: ConcatCode, symbols) -> np.ndarray:
    """Map L outer symbols to the concatenated inner codewords."""
    return np.concatenate([code.inner[i].codewords[int(w)] for i, w in enumerate(symbols)])


def encode(code: ConcatCode, message, t: int) -> np.ndarray:
    """
    Encode a transmission status and message into n bits.

    Args:
        code: Concatenated code
        message: l1*m bits (ignored when t = 0)
        t: 1 to transmit, 0 to stay silent

    Returns:
        uint8 vector of length n (all zero when t = 0)
    """
    params = code.params
    if t not in (0, 1):
        raise ContractError(f"Transmission status must be 0 or 1, got {t}")
    if t == 0:
        return np.zeros(params.n, dtype=np.uint8)
    if message is None:
        raise ContractError("t=1 requires a message")
    bits = np.asarray(message, dtype=np.uint8).ravel()
    symbols = message_to_symbols(bits, params.l1, params.m)
    if not bits.any():
        raise ContractError("The all-zero message is reserved for silence")
    outer = rs_encode(code.rs, symbols)
    return encode_symbols(code, outer)


def decode(code: ConcatCode, y, counter: WorkCounter = None) -> TransmissionResult:
    """
    Decode n received bits into (t_hat, message).

    Args:
        code: Concatenated code
        y: Received n bits
        counter: Optional work counter shared across chunks

    Returns:
        TransmissionResult; every failure mode is in-band
    """
    params = code.params
    y = np.asarray(y, dtype=np.uint8).ravel()
    if y.size != params.n:
        raise ContractError(f"decode expects {params.n} bits, got {y.size}")

    chunks = y.reshape(params.L, params.B)
    outcomes = [inner_decode(code.inner[i], params, chunks[i], counter) for i in range(params.L)]
    return decode_outcomes(code, outcomes)


def decode_outcomes(code: ConcatCode, outcomes: List[DecodeOutcome]) -> TransmissionResult:
    """Apply the global silence rule and RS decoding to L chunk outcomes."""
    params = code.params
    if len(outcomes) != params.L:
        raise ContractError(f"Expected {params.L} chunk outcomes, got {len(outcomes)}")
    silent = sum(1 for o in outcomes if o.kind is OutcomeKind.SILENCE)
    if silent >= params.L - params.l2 // 2:
        return TransmissionResult(t_hat=0, message=None, chunk_outcomes=outcomes, rs_status=RsStatus.NOT_ATTEMPTED)

    received = np.array([o.symbol if o.is_message else 0 for o in outcomes], dtype=np.int64)
    erasures = [i for i, o in enumerate(outcomes) if not o.is_message]
    try:
        symbols = rs_decode(code.rs, received, erasures)
    except RsDecodeFailure as e:
        logger.debug(f"RS failure with {len(erasures)} erasures: {e}")
        return TransmissionResult(t_hat=1, message=None, chunk_outcomes=outcomes, rs_status=RsStatus.FAILURE)
    return TransmissionResult(
        t_hat=1,
        message=symbols_to_message(symbols, params.m),
        chunk_outcomes=outcomes,
        rs_status=RsStatus.OK,
    )


def throughput_report(code: ConcatCode, counter: WorkCounter = None) -> ThroughputReport:
    """Nominal versus realized throughput and complexity figures."""
    p = code.params
    sqrt_n = math.sqrt(p.n)
    decode_bound = p.L * p.num_codewords * p.B
    return ThroughputReport(
        n=p.n,
        nominal_r=p.r,
        effective_r=p.r_eff,
        gap=p.r - p.r_eff,
        message_bits=p.message_bits,
        stored_bits=code.stored_bits,
        encode_ops=sqrt_n * math.log2(sqrt_n),
        decode_exponent_nominal=p.r_u * p.k1 + 1.0,
        decode_exponent_realized=math.log2(decode_bound) / p.log_n,
        decode_ops_bound=decode_bound,
        decode_ops_measured=None if counter is None else counter.bit_comparisons,
    )
