"""
Monte Carlo detection experiments.

A source produces Willie's observations under H0 (Alice silent) or H1 (Alice
transmitting). Trials run in batches; batch b of hypothesis h draws from the
stream (master_seed, "detect", h, b), so results do not depend on n_jobs.
"""
from abc import ABC, abstractmethod
from typing import Optional
import logging
import math

import numpy as np
from joblib import Parallel, delayed

from src.adversary.detectors import DetectionReport, Detector, ObservationBatch, segment_starts
from src.channel import (
    bin_conv,
    bsc_transmit,
    bsc_weights,
    ensemble_p1_micro,
    exact_p1_micro,
    p0_micro,
    tv_micro,
    words_to_indices,
)
from src.codec import ConcatCode, encode, random_message
from src.config import settings
from src.exceptions import ContractError
from src.utils.seeding import rng_for

logger = logging.getLogger(__name__)

MIN_TRIALS = 1000


def _segment_lengths(n: int, segment_length: int) -> np.ndarray:
    starts = segment_starts(n, segment_length)
    return np.diff(np.append(starts, n))


class ObservationSource(ABC):
    """Law or code producing Willie's observations."""

    name = "source"

    def __init__(self, n: int, q: float):
        self.n = int(n)
        self.q = float(q)

    @property
    def default_segment_length(self) -> int:
        return self.n

    def _silent(self, rows: int, segment_length: int, rng: np.random.Generator) -> np.ndarray:
        lengths = _segment_lengths(self.n, segment_length)
        return rng.binomial(np.broadcast_to(lengths, (rows, len(lengths))), self.q)

    @abstractmethod
    def _active(self, rows: int, segment_length: int, rng: np.random.Generator) -> ObservationBatch:
        """Observations while Alice transmits."""

    def sample(self, hypothesis: int, rows: int, rng: np.random.Generator, segment_length: int = None) -> ObservationBatch:
        segment_length = segment_length or self.default_segment_length
        if hypothesis == 0:
            return ObservationBatch(self._silent(rows, segment_length, rng), segment_length)
        return self._active(rows, segment_length, rng)


class SpreadCodeLaw(ObservationSource):
    """Ensemble average of random Bernoulli(rho) codebooks: i.i.d. Bernoulli(rho*q) output."""

    name = "spread_law"

    def __init__(self, n: int, q: float, rho: float, chunk_length: int = None):
        super().__init__(n, q)
        self.rho = float(rho)
        self.chunk_length = chunk_length

    @classmethod
    def from_params(cls, params) -> "SpreadCodeLaw":
        return cls(params.n, params.channel.q, params.rho, chunk_length=params.B)

    @property
    def default_segment_length(self) -> int:
        return self.chunk_length or self.n

    def _active(self, rows, segment_length, rng):
        lengths = _segment_lengths(self.n, segment_length)
        weights = rng.binomial(np.broadcast_to(lengths, (rows, len(lengths))), bin_conv(self.rho, self.q))
        return ObservationBatch(weights, segment_length)


class ConcentratedCodeLaw(ObservationSource):
    """
    Codewords with every one inside the first `support` positions.

    The expected codeword weight n*rho is kept, so the support carries bias
    min(1, n*rho/support); all later positions are zero.
    """

    name = "concentrated_law"

    def __init__(self, n: int, q: float, rho: float, support: int = None, chunk_length: int = None):
        super().__init__(n, q)
        self.rho = float(rho)
        self.support = int(support or math.ceil(math.sqrt(n)))
        if not 1 <= self.support <= n:
            raise ContractError(f"Support must lie in [1, n], got {self.support}")
        self.bias = min(1.0, self.n * self.rho / self.support)
        self.chunk_length = chunk_length

    @classmethod
    def from_params(cls, params) -> "ConcentratedCodeLaw":
        return cls(params.n, params.channel.q, params.rho, chunk_length=params.B)

    @property
    def default_segment_length(self) -> int:
        return self.chunk_length or self.n

    def _active(self, rows, segment_length, rng):
        starts = segment_starts(self.n, segment_length)
        lengths = _segment_lengths(self.n, segment_length)
        inside = np.clip(self.support - starts, 0, lengths)
        shape = (rows, len(lengths))
        weights = (
            rng.binomial(np.broadcast_to(inside, shape), bin_conv(self.bias, self.q))
            + rng.binomial(np.broadcast_to(lengths - inside, shape), self.q)
        )
        return ObservationBatch(weights, segment_length)


class MicroCodebook(ObservationSource):
    """Explicit codebook of length B <= micro_max_length, observed as whole words."""

    name = "micro_codebook"

    def __init__(self, codewords: np.ndarray, q: float):
        codewords = np.atleast_2d(np.asarray(codewords, dtype=np.uint8))
        super().__init__(codewords.shape[1], q)
        if self.n > settings.micro_max_length:
            raise ContractError(f"Micro codebook length {self.n} exceeds {settings.micro_max_length}")
        self.codewords = codewords

    def p0(self):
        return p0_micro(self.n, self.q)

    def p1(self):
        return exact_p1_micro(self.codewords, self.q)

    def _batch(self, x: np.ndarray, segment_length: int, rng) -> ObservationBatch:
        z = bsc_transmit(x, self.q, rng)
        starts = segment_starts(self.n, segment_length)
        weights = np.add.reduceat(z.astype(np.int64), starts, axis=1)
        return ObservationBatch(weights, segment_length, words=words_to_indices(z))

    def sample(self, hypothesis, rows, rng, segment_length=None):
        segment_length = segment_length or self.default_segment_length
        if hypothesis == 0:
            return self._batch(np.zeros((rows, self.n), dtype=np.uint8), segment_length, rng)
        return self._active(rows, segment_length, rng)

    def _active(self, rows, segment_length, rng):
        picks = rng.integers(0, len(self.codewords), size=rows)
        return self._batch(self.codewords[picks], segment_length, rng)


class ConcatCodeSource(ObservationSource):
    """A concrete concatenated code carrying uniform nonzero messages."""

    name = "concat_code"

    def __init__(self, code: ConcatCode):
        super().__init__(code.params.n, code.params.channel.q)
        self.code = code

    @property
    def default_segment_length(self) -> int:
        return self.code.params.B

    def _active(self, rows, segment_length, rng):
        starts = segment_starts(self.n, segment_length)
        lengths = _segment_lengths(self.n, segment_length)
        codeword_weights = np.empty((rows, len(starts)), dtype=np.int64)
        for row in range(rows):
            x = encode(self.code, random_message(self.code, rng), 1)
            codeword_weights[row] = np.add.reduceat(x.astype(np.int64), starts)
        weights = bsc_weights(codeword_weights, lengths[None, :], self.q, rng)
        return ObservationBatch(weights, segment_length)


def as_source(code_or_law) -> ObservationSource:
    if isinstance(code_or_law, ObservationSource):
        return code_or_law
    if isinstance(code_or_law, ConcatCode):
        return ConcatCodeSource(code_or_law)
    raise ContractError(f"Unsupported observation source: {type(code_or_law).__name__}")


def _count_accusations(detector: Detector, source: ObservationSource, hypothesis: int,
                       rows: int, master_seed: int, batch_index: int) -> int:
    rng = rng_for(master_seed, "detect", hypothesis, batch_index)
    batch = source.sample(hypothesis, rows, rng, detector.segment_length)
    return int(np.count_nonzero(detector.decide(batch)))


def _halfwidth(rate: float, trials: int) -> float:
    return 3.0 * math.sqrt(rate * (1.0 - rate) / trials)


def detect_experiment(
    detector: Detector,
    code_or_law,
    trials: int,
    master_seed: int,
    tv_reference: Optional[float] = None,
    batch_size: int = None,
    n_jobs: int = None,
) -> DetectionReport:
    """
    Estimate (alpha, beta) of a detector by simulation.

    Args:
        detector: Detector under test
        code_or_law: ConcatCode or an ObservationSource
        trials: Trials per hypothesis (>= 1000)
        master_seed: Seed of every batch stream
        tv_reference: TV figure to report alongside
        batch_size: Rows per batch (default settings.mc_batch_size)
        n_jobs: joblib workers

    Returns:
        DetectionReport with 3-sigma binomial half-widths
    """
    if trials < MIN_TRIALS:
        raise ContractError(f"detect_experiment needs at least {MIN_TRIALS} trials, got {trials}")
    source = as_source(code_or_law)
    batch_size = batch_size or settings.mc_batch_size
    n_jobs = n_jobs or settings.n_jobs
    sizes = [min(batch_size, trials - start) for start in range(0, trials, batch_size)]

    try:
        counts = {}
        for hypothesis in (0, 1):
            per_batch = Parallel(n_jobs=n_jobs)(
                delayed(_count_accusations)(detector, source, hypothesis, rows, master_seed, b)
                for b, rows in enumerate(sizes)
            )
            counts[hypothesis] = sum(per_batch)
    except Exception as e:
        logger.error(f"Detection experiment {detector.name} on {source.name} failed: {e}")
        raise

    alpha = counts[0] / trials
    beta = 1.0 - counts[1] / trials
    report = DetectionReport(
        detector_name=detector.name,
        alpha=alpha,
        beta=beta,
        sum=alpha + beta,
        tv_reference=tv_reference,
        trials={"h0": trials, "h1": trials},
        ci_halfwidth={"alpha": _halfwidth(alpha, trials), "beta": _halfwidth(beta, trials)},
    )
    logger.info(
        f"Detector {detector.name} on {source.name}: alpha={alpha:.4f}, beta={beta:.4f}, "
        f"sum={report.sum:.4f} over {trials} trials"
    )
    return report


def covertness_chain_micro(codewords: np.ndarray, rho: float, q: float) -> dict:
    """
    Triangle check at micro scale:
    V(P0, P1) <= V(P0, ensemble P1) + V(ensemble P1, P1).
    """
    codewords = np.atleast_2d(np.asarray(codewords))
    B = codewords.shape[1]
    P0 = p0_micro(B, q)
    P1 = exact_p1_micro(codewords, q)
    ensemble = ensemble_p1_micro(B, rho, q)
    direct = tv_micro(P0, P1)
    to_ensemble = tv_micro(P0, ensemble)
    ensemble_gap = tv_micro(ensemble, P1)
    return {
        "tv_p0_p1": direct,
        "tv_p0_ensemble": to_ensemble,
        "tv_ensemble_p1": ensemble_gap,
        "holds": direct <= to_ensemble + ensemble_gap + 1e-12,
    }
