"""
Exact probability laws on Willie's observation.

Weight laws are binomials handled in natural-log space; micro-scale laws are
explicit arrays over all 2^B words, indexed big-endian (bit j of a word is
the 2^(B-1-j) digit).
"""
from dataclasses import dataclass, field
from typing import Tuple
import logging
import math

import numpy as np
from scipy import stats
from scipy.special import gammaln, xlog1py, xlogy

from src.config import settings
from src.exceptions import ContractError, ScaleError

logger = logging.getLogger(__name__)

# Half-width of the summation window, in standard deviations.
WINDOW_SIGMAS = 40.0

# Below this the log-gamma form is used.
PMF_FLOOR = 1e-280


def bin_conv(a, b):
    """Binary convolution a*b = a(1-b) + b(1-a)."""
    return a * (1 - b) + b * (1 - a)


def weight_logpmf(n: int, p: float, w: np.ndarray) -> np.ndarray:
    """
    Binomial log-pmf valid for p in [0, 1] (-inf off-support).

    Near the bulk the log of scipy's pmf is used; once the pmf underflows the
    log-gamma form takes over.
    """
    w = np.asarray(w, dtype=float)
    direct = stats.binom.pmf(w, n, p)
    with np.errstate(divide="ignore"):
        log_direct = np.log(direct)
    log_gamma_form = (
        gammaln(n + 1.0) - gammaln(w + 1.0) - gammaln(n - w + 1.0)
        + xlogy(w, p) + xlog1py(n - w, -p)
    )
    return np.where(direct > PMF_FLOOR, log_direct, log_gamma_form)


def binom_logpmf(n: int, p: float, w):
    """
    Natural-log binomial pmf with domain checks.

    Args:
        n: Trials
        p: Success probability, 0 < p < 1
        w: Weight(s), 0 <= w <= n

    Returns:
        log C(n,w) + w ln p + (n-w) ln(1-p)
    """
    w_arr = np.asarray(w)
    if not 0.0 < p < 1.0:
        raise ContractError(f"binom_logpmf requires 0 < p < 1, got p={p}")
    if np.any(w_arr < 0) or np.any(w_arr > n):
        raise ContractError(f"binom_logpmf requires 0 <= w <= n={n}")
    value = weight_logpmf(n, p, w_arr)
    return float(value) if np.ndim(value) == 0 else value


def weight_window(n: int, *probs: float) -> Tuple[int, int]:
    """Integer weight range holding all but e^-800 of each binomial's mass."""
    lo, hi = n, 0
    for p in probs:
        mean = n * p
        sd = math.sqrt(n * p * (1.0 - p))
        lo = min(lo, int(math.floor(mean - WINDOW_SIGMAS * sd - 1)))
        hi = max(hi, int(math.ceil(mean + WINDOW_SIGMAS * sd + 1)))
    return max(0, lo), min(n, hi)


@dataclass(frozen=True)
class WeightLaw:
    """Binomial(n, p_success), accessed through its log-pmf."""
    n: int
    p_success: float

    def logpmf(self, w) -> np.ndarray:
        return weight_logpmf(self.n, self.p_success, w)

    def window(self) -> Tuple[int, int]:
        return weight_window(self.n, self.p_success)

    def pmf_on(self, weights: np.ndarray) -> np.ndarray:
        return np.exp(self.logpmf(weights))

    def total_mass(self) -> float:
        lo, hi = self.window()
        return math.fsum(self.pmf_on(np.arange(lo, hi + 1)))


def tv_product_bernoulli(n: int, p0: float, p1: float) -> float:
    """
    Exact TV between Bernoulli(p0)^n and Bernoulli(p1)^n.

    Each word's probability depends only on its weight, so the distance equals
    the distance between the two weight laws, summed with math.fsum.
    """
    if not (0.0 <= p0 <= 1.0 and 0.0 <= p1 <= 1.0):
        raise ContractError(f"tv_product_bernoulli requires probabilities in [0,1], got {p0}, {p1}")
    if p0 == p1:
        return 0.0
    lo, hi = weight_window(n, p0, p1)
    weights = np.arange(lo, hi + 1)
    diff = np.abs(np.exp(weight_logpmf(n, p0, weights)) - np.exp(weight_logpmf(n, p1, weights)))
    return min(1.0, 0.5 * math.fsum(diff))


def ensemble_avg_p1(params) -> WeightLaw:
    """Ensemble-averaged active law: all-zero word through BSC(rho) then BSC(q)."""
    return WeightLaw(n=params.n, p_success=bin_conv(params.rho, params.channel.q))


@dataclass(frozen=True, eq=False)
class MicroDistribution:
    """Explicit law on {0,1}^B, B <= micro_max_length."""
    B: int
    probs: np.ndarray = field(repr=False)

    def total(self) -> float:
        return math.fsum(self.probs)


def _check_micro(B: int):
    if B > settings.micro_max_length:
        raise ScaleError(f"Micro-scale length B={B} exceeds cap {settings.micro_max_length}")


def popcount_table(B: int) -> np.ndarray:
    """Hamming weight of every integer in [0, 2^B)."""
    _check_micro(B)
    idx = np.arange(1 << B, dtype=np.int64)
    counts = np.zeros(1 << B, dtype=np.int64)
    for bit in range(B):
        counts += (idx >> bit) & 1
    return counts


def words_to_indices(words: np.ndarray) -> np.ndarray:
    """Big-endian integer index of each row of a 0/1 matrix."""
    words = np.atleast_2d(np.asarray(words, dtype=np.int64))
    B = words.shape[1]
    weights = 1 << np.arange(B - 1, -1, -1, dtype=np.int64)
    return words @ weights


def exact_p1_micro(codewords: np.ndarray, q: float) -> MicroDistribution:
    """
    P1(z) = (1/N) sum_w q^d(x_w, z) (1-q)^(B - d(x_w, z)) for every z.

    Args:
        codewords: (N, B) 0/1 matrix, B <= micro_max_length
        q: Willie crossover

    Returns:
        MicroDistribution over all 2^B words
    """
    codewords = np.atleast_2d(np.asarray(codewords))
    B = codewords.shape[1]
    _check_micro(B)
    pop = popcount_table(B)
    per_distance = np.power(q, np.arange(B + 1)) * np.power(1.0 - q, B - np.arange(B + 1))
    z = np.arange(1 << B, dtype=np.int64)
    probs = np.zeros(1 << B)
    for x in words_to_indices(codewords):
        probs += per_distance[pop[z ^ x]]
    probs /= len(codewords)
    return MicroDistribution(B=B, probs=probs)


def p0_micro(B: int, q: float) -> MicroDistribution:
    """Innocent law: the all-zero word through BSC(q)."""
    return exact_p1_micro(np.zeros((1, B), dtype=np.int64), q)


def ensemble_p1_micro(B: int, rho: float, q: float) -> MicroDistribution:
    """Ensemble-averaged active law at micro scale: i.i.d. Bernoulli(rho*q)."""
    _check_micro(B)
    s = bin_conv(rho, q)
    pop = popcount_table(B)
    probs = np.power(s, pop) * np.power(1.0 - s, B - pop)
    return MicroDistribution(B=B, probs=probs)


def tv_micro(first: MicroDistribution, second: MicroDistribution) -> float:
    """Exact TV between two micro-scale laws."""
    if first.B != second.B:
        raise ContractError(f"Micro laws differ in length: {first.B} vs {second.B}")
    return 0.5 * math.fsum(np.abs(first.probs - second.probs))
