"""
Random low-weight inner codebooks.

Chunk i's codebook holds 2^m codewords of B i.i.d. Bernoulli(rho) bits. It is
drawn from a Philox stream keyed by (master_seed, params hash, chunk index);
codeword w occupies a fixed slice of that counter-based stream, so any
codebook is regenerable on its own.
"""
from dataclasses import dataclass, field
from typing import Dict, List
import logging

import numpy as np
from joblib import Parallel, delayed

from src.config import settings
from src.exceptions import ScaleError
from src.utils.seeding import seed_sequence, stable_int

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class InnerCodebook:
    """One chunk's codebook; immutable after generation."""
    chunk_index: int
    B: int
    num_codewords: int
    codewords: np.ndarray = field(repr=False)
    seed: int
    rho: float
    weights: np.ndarray = field(repr=False)

    def codeword(self, w: int) -> np.ndarray:
        return self.codewords[w]

    def dump_hex(self) -> Dict[int, str]:
        """codeword index -> hex string of its packed bits (big-endian)."""
        packed = np.packbits(self.codewords, axis=1)
        return {w: packed[w].tobytes().hex() for w in range(self.num_codewords)}

    @property
    def stored_bits(self) -> int:
        return self.num_codewords * self.B


def _chunk_seed(params, chunk_index: int, master_seed: int) -> np.random.SeedSequence:
    return seed_sequence(master_seed, stable_int(params.params_hash()), chunk_index)


def inner_generate(params, chunk_index: int, master_seed: int, rho: float = None) -> InnerCodebook:
    """
    Generate chunk `chunk_index`'s codebook.

    Args:
        params: CodeParams
        chunk_index: Chunk position in [0, L)
        master_seed: Experiment master seed
        rho: Bias override (tests only); defaults to params.rho

    Returns:
        InnerCodebook with 2^m codewords
    """
    num = params.num_codewords
    bits = num * params.B
    if bits > settings.codebook_memory_cap_bits:
        raise ScaleError(
            f"Inner codebook needs 2^{params.m} x {params.B} = {bits} bits, "
            f"cap is {settings.codebook_memory_cap_bits}"
        )
    rho = params.rho if rho is None else rho
    ss = _chunk_seed(params, chunk_index, master_seed)
    rng = np.random.Generator(np.random.Philox(ss))
    codewords = (rng.random((num, params.B)) < rho).astype(np.uint8)
    weights = codewords.sum(axis=1, dtype=np.int64)
    return InnerCodebook(
        chunk_index=chunk_index,
        B=params.B,
        num_codewords=num,
        codewords=codewords,
        seed=int(ss.generate_state(1, np.uint64)[0]),
        rho=rho,
        weights=weights,
    )


def generate_codebooks(params, master_seed: int, n_jobs: int = None) -> List[InnerCodebook]:
    """All L codebooks, generated in parallel and returned in chunk order."""
    n_jobs = n_jobs or settings.n_jobs
    logger.debug(f"Generating {params.L} inner codebooks (2^{params.m} x {params.B}) with n_jobs={n_jobs}")
    return Parallel(n_jobs=n_jobs)(
        delayed(inner_generate)(params, i, master_seed) for i in range(params.L)
    )
