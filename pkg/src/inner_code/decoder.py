"""
Chunk-wise typicality decoder.

For a received chunk y:
  1. y in the active Y set: scan every codeword for conditional typicality;
     exactly one hit -> Message, two or more -> DeclaredError, none -> Silence.
  2. otherwise y in the silent Y set -> Silence.
  3. otherwise -> DeclaredError.
The active test runs first, so it decides whenever both windows hold y.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from src.exceptions import ContractError
from src.inner_code.typicality import typicality_boxes


class OutcomeKind(Enum):
    SILENCE = "silence"
    MESSAGE = "message"
    DECLARED_ERROR = "declared_error"


@dataclass(frozen=True)
class DecodeOutcome:
    """Silence, Message(symbol) or DeclaredError; Silence is not Message(0)."""
    kind: OutcomeKind
    symbol: Optional[int] = None

    @classmethod
    def silence(cls) -> "DecodeOutcome":
        return cls(OutcomeKind.SILENCE)

    @classmethod
    def message(cls, symbol: int) -> "DecodeOutcome":
        return cls(OutcomeKind.MESSAGE, int(symbol))

    @classmethod
    def declared_error(cls) -> "DecodeOutcome":
        return cls(OutcomeKind.DECLARED_ERROR)

    @property
    def is_message(self) -> bool:
        return self.kind is OutcomeKind.MESSAGE

    def to_char(self, m: int) -> str:
        """'S', 'E' or the hex symbol ('[hex]' when m > 4)."""
        if self.kind is OutcomeKind.SILENCE:
            return "S"
        if self.kind is OutcomeKind.DECLARED_ERROR:
            return "E"
        text = format(self.symbol, "x")
        return text if m <= 4 else f"[{text}]"


@dataclass
class WorkCounter:
    """Codeword-bit comparisons performed by the decoder."""
    bit_comparisons: int = 0
    chunk_scans: int = 0


def inner_decode(cb, params, y, counter: WorkCounter = None) -> DecodeOutcome:
    """
    Decode one chunk with the typicality rule.

    Args:
        cb: InnerCodebook of this chunk
        params: CodeParams
        y: Received chunk of B bits
        counter: Optional work counter, incremented by 2^m * B per scan

    Returns:
        DecodeOutcome
    """
    y = np.asarray(y, dtype=np.uint8).ravel()
    if y.size != params.B:
        raise ContractError(f"inner_decode expects {params.B} bits, got {y.size}")
    boxes = typicality_boxes(params)
    weight = int(np.count_nonzero(y))

    if boxes.y_active.contains(weight):
        ones = y.astype(bool)
        c11 = np.count_nonzero(cb.codewords[:, ones], axis=1)
        c10 = cb.weights - c11
        hits = np.flatnonzero(boxes.bob_10.contains_array(c10) & boxes.bob_11.contains_array(c11))
        if counter is not None:
            counter.bit_comparisons += cb.num_codewords * params.B
            counter.chunk_scans += 1
        if len(hits) == 1:
            return DecodeOutcome.message(int(hits[0]))
        if len(hits) >= 2:
            return DecodeOutcome.declared_error()
        return DecodeOutcome.silence()

    if boxes.y_silent.contains(weight):
        return DecodeOutcome.silence()
    return DecodeOutcome.declared_error()
