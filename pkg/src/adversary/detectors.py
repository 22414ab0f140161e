"""
Willie's detectors.

Every detector sees an ObservationBatch (per-segment received weights, plus
the word index at micro scale) and returns one accuse/stay decision per row.
Exact designs (radiometer threshold, micro-scale LRT) live next to the
detectors that apply them.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, NamedTuple, Optional
import logging
import math

import numpy as np
from scipy import stats

from src.channel import MicroDistribution, bin_conv, tv_micro, weight_logpmf, weight_window
from src.exceptions import ContractError

logger = logging.getLogger(__name__)

# Sums closer than this to the minimum count as ties.
TIE_TOLERANCE = 1e-15


@dataclass
class ObservationBatch:
    """Observations of one hypothesis, one row per trial."""
    segment_weights: np.ndarray     # (rows, segments)
    segment_length: int
    words: Optional[np.ndarray] = None

    @property
    def rows(self) -> int:
        return self.segment_weights.shape[0]

    @property
    def total_weight(self) -> np.ndarray:
        return self.segment_weights.sum(axis=1)


@dataclass
class DetectionReport:
    """Empirical or exact (alpha, beta) of one detector."""
    detector_name: str
    alpha: float
    beta: float
    sum: float
    tv_reference: Optional[float] = None
    trials: Dict[str, int] = field(default_factory=dict)
    ci_halfwidth: Dict[str, float] = field(default_factory=dict)
    exact: bool = False

    @property
    def slack(self) -> float:
        return self.ci_halfwidth.get("alpha", 0.0) + self.ci_halfwidth.get("beta", 0.0)

    def respects_optimum(self, tolerance: float = 1e-12) -> bool:
        """alpha + beta >= 1 - TV up to the CI half-widths."""
        if self.tv_reference is None:
            return True
        return self.sum >= 1.0 - self.tv_reference - self.slack - tolerance

    def to_dict(self) -> Dict:
        return {
            "detector_name": self.detector_name,
            "alpha": self.alpha,
            "beta": self.beta,
            "sum": self.sum,
            "tv_reference": self.tv_reference,
            "trials": dict(self.trials),
            "ci_halfwidth": dict(self.ci_halfwidth),
            "exact": self.exact,
        }


def exact_report(name: str, alpha: float, beta: float, tv_reference: float = None) -> DetectionReport:
    return DetectionReport(
        detector_name=name, alpha=alpha, beta=beta, sum=alpha + beta,
        tv_reference=tv_reference, exact=True,
    )


class RadiometerDesign(NamedTuple):
    threshold: int
    alpha: float
    beta: float


def radiometer_design(n: int, q: float, rho: float) -> RadiometerDesign:
    """
    Total-weight threshold test between Binomial(n, q) and Binomial(n, rho*q).

    Accuse when the weight exceeds the threshold. Among thresholds with the
    minimal exact alpha + beta the largest one (smallest alpha) is returned.

    Args:
        n: Block length
        q: Willie crossover, 0 < q < 1/2
        rho: Codeword bias, 0 <= rho < 1

    Returns:
        RadiometerDesign(threshold, alpha, beta)
    """
    if not 0.0 < q < 0.5:
        raise ContractError(f"radiometer_design requires 0 < q < 1/2, got q={q}")
    if not 0.0 <= rho < 1.0:
        raise ContractError(f"radiometer_design requires 0 <= rho < 1, got rho={rho}")
    s = bin_conv(rho, q)
    if s == q:
        return RadiometerDesign(threshold=n, alpha=0.0, beta=1.0)

    lo, hi = weight_window(n, q, s)
    weights = np.arange(lo, hi + 1)
    p0 = np.exp(weight_logpmf(n, q, weights))
    p1 = np.exp(weight_logpmf(n, s, weights))

    # Candidate k <-> threshold lo - 1 + k; alpha = P0(W > t), beta = P1(W <= t).
    beta = np.concatenate([[0.0], np.cumsum(p1)])
    alpha = np.concatenate([np.cumsum(p0[::-1])[::-1], [0.0]])
    total = alpha + beta
    k = int(np.flatnonzero(total <= total.min() + TIE_TOLERANCE)[-1])

    threshold = lo - 1 + k
    exact_alpha = math.fsum(p0[k:])
    exact_beta = math.fsum(p1[:k])
    logger.debug(f"Radiometer n={n}: threshold={threshold}, alpha+beta={exact_alpha + exact_beta:.6g}")
    return RadiometerDesign(threshold=threshold, alpha=exact_alpha, beta=exact_beta)


class LrtResult(NamedTuple):
    alpha: float
    beta: float
    tv: float


def lrt_accept_region(P0: MicroDistribution, P1: MicroDistribution) -> np.ndarray:
    """Words on which the optimal test accuses (ties stay with H0)."""
    if P0.B != P1.B:
        raise ContractError(f"Micro laws differ in length: {P0.B} vs {P1.B}")
    return P1.probs > P0.probs


def lrt_exact_micro(P0: MicroDistribution, P1: MicroDistribution) -> LrtResult:
    """Exact errors of the optimal deterministic test; alpha + beta = 1 - tv."""
    accuse = lrt_accept_region(P0, P1)
    alpha = math.fsum(P0.probs[accuse])
    beta = math.fsum(P1.probs[~accuse])
    return LrtResult(alpha=alpha, beta=beta, tv=tv_micro(P0, P1))


def chunk_thresholds(length: int, q: float, alpha_chunk: float) -> int:
    """Smallest t with P0(W > t) <= alpha_chunk for W ~ Binomial(length, q)."""
    if not 0.0 < alpha_chunk < 1.0:
        raise ContractError(f"Per-chunk alpha must lie in (0, 1), got {alpha_chunk}")
    tail = stats.binom.sf(np.arange(length + 1), length, q)
    return int(np.flatnonzero(tail <= alpha_chunk)[0])


def segment_starts(n: int, segment_length: int) -> np.ndarray:
    if segment_length < 1:
        raise ContractError(f"Segment length must be positive, got {segment_length}")
    return np.arange(0, n, segment_length)


def segment_thresholds(n: int, segment_length: int, q: float, alpha_chunk: float = None) -> np.ndarray:
    """Per-segment thresholds; alpha_chunk defaults to 1/(2 * #segments)."""
    starts = segment_starts(n, segment_length)
    lengths = np.diff(np.append(starts, n))
    alpha_chunk = alpha_chunk if alpha_chunk is not None else 1.0 / (2 * len(starts))
    cache: Dict[int, int] = {}
    for length in set(lengths.tolist()):
        cache[length] = chunk_thresholds(length, q, alpha_chunk)
    return np.array([cache[int(length)] for length in lengths], dtype=np.int64)


def chunk_weight_detector(params, z, per_chunk_threshold) -> int:
    """
    Accuse (1) when any length-B chunk of z is heavier than its threshold.

    Args:
        params: CodeParams
        z: Willie's n observed bits
        per_chunk_threshold: Scalar or L thresholds
    """
    z = np.asarray(z, dtype=np.int64).ravel()
    if z.size != params.n:
        raise ContractError(f"chunk_weight_detector expects {params.n} bits, got {z.size}")
    weights = z.reshape(params.L, params.B).sum(axis=1)
    return int(np.any(weights > np.asarray(per_chunk_threshold)))


class Detector(ABC):
    """Accuse/stay rule applied to a batch of observations."""

    # Segment length the detector wants; None means any segmentation.
    segment_length: Optional[int] = None

    def __init__(self, name: str):
        self.name = name

    @abstractmethod
    def decide(self, batch: ObservationBatch) -> np.ndarray:
        """Boolean accusation per row."""

    def __repr__(self):
        return f"{type(self).__name__}(name={self.name})"


class AlwaysAccuse(Detector):
    def __init__(self):
        super().__init__("always_accuse")

    def decide(self, batch: ObservationBatch) -> np.ndarray:
        return np.ones(batch.rows, dtype=bool)


class NeverAccuse(Detector):
    def __init__(self):
        super().__init__("never_accuse")

    def decide(self, batch: ObservationBatch) -> np.ndarray:
        return np.zeros(batch.rows, dtype=bool)


class RadiometerDetector(Detector):
    """Accuse when the total received weight exceeds a threshold."""

    def __init__(self, threshold: int, name: str = "radiometer"):
        super().__init__(name)
        self.threshold = int(threshold)

    @classmethod
    def designed(cls, n: int, q: float, rho: float) -> "RadiometerDetector":
        return cls(radiometer_design(n, q, rho).threshold)

    def decide(self, batch: ObservationBatch) -> np.ndarray:
        return batch.total_weight > self.threshold


class ChunkWeightDetector(Detector):
    """
    Accuse when any segment is heavier than its threshold.

    With segment_length = B the segments are the code's chunks; shorter
    segments catch codebooks whose weight sits in a few positions.
    """

    def __init__(self, n: int, segment_length: int, q: float, alpha_chunk: float = None, name: str = None):
        super().__init__(name or f"chunk_weight_{segment_length}")
        self.segment_length = int(segment_length)
        self.thresholds = segment_thresholds(n, self.segment_length, q, alpha_chunk)

    @classmethod
    def for_params(cls, params, alpha_chunk: float = None) -> "ChunkWeightDetector":
        return cls(params.n, params.B, params.channel.q, alpha_chunk, name="chunk_weight")

    def decide(self, batch: ObservationBatch) -> np.ndarray:
        if batch.segment_length != self.segment_length:
            raise ContractError(
                f"{self.name} needs segment length {self.segment_length}, got {batch.segment_length}"
            )
        return np.any(batch.segment_weights > self.thresholds[None, :], axis=1)


class MicroLrtDetector(Detector):
    """Optimal test at micro scale, applied to observed word indices."""

    def __init__(self, P0: MicroDistribution, P1: MicroDistribution):
        super().__init__("micro_lrt")
        self.accuse = lrt_accept_region(P0, P1)

    def decide(self, batch: ObservationBatch) -> np.ndarray:
        if batch.words is None:
            raise ContractError("micro_lrt needs word observations")
        return self.accuse[batch.words]
