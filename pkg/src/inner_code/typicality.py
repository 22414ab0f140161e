"""
Joint-type statistics, typical-set windows and empirical information measures.

Windows are closed intervals c(1 +/- width) on fractions, converted once to
inclusive integer count ranges with exact rational arithmetic:
lo = ceil(B c (1 - width)), hi = floor(B c (1 + width)).
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Tuple
import math

import numpy as np
from scipy.special import gammaln, xlogy

from src.channel.laws import bin_conv
from src.exceptions import ContractError, DomainError

LN2 = math.log(2.0)


class TypicalSet(str, Enum):
    Y_SILENT = "Y_silent"
    Y_ACTIVE = "Y_active"
    Z_ACTIVE = "Z_active"


class Role(str, Enum):
    BOB = "bob"
    WILLIE = "willie"


@dataclass(frozen=True)
class PairStats:
    """Joint type of a (word, received word) pair, kept as integer counts."""
    B: int
    n00: int
    n01: int
    n10: int
    n11: int

    @property
    def f00(self) -> Fraction:
        return Fraction(self.n00, self.B)

    @property
    def f01(self) -> Fraction:
        return Fraction(self.n01, self.B)

    @property
    def f10(self) -> Fraction:
        return Fraction(self.n10, self.B)

    @property
    def f11(self) -> Fraction:
        return Fraction(self.n11, self.B)

    @property
    def fx1(self) -> Fraction:
        return Fraction(self.n10 + self.n11, self.B)

    @property
    def fy1(self) -> Fraction:
        return Fraction(self.n01 + self.n11, self.B)


def _as_bits(v) -> np.ndarray:
    return np.asarray(v, dtype=np.uint8).ravel()


def pair_stats(x, y) -> PairStats:
    """Count the (0,0), (0,1), (1,0), (1,1) pairs of x and y."""
    x, y = _as_bits(x), _as_bits(y)
    if x.shape != y.shape:
        raise ContractError(f"pair_stats length mismatch: {x.size} vs {y.size}")
    B = x.size
    n11 = int(np.count_nonzero(x & y))
    n10 = int(np.count_nonzero(x)) - n11
    n01 = int(np.count_nonzero(y)) - n11
    return PairStats(B=B, n00=B - n11 - n10 - n01, n01=n01, n10=n10, n11=n11)


@dataclass(frozen=True)
class CountWindow:
    """Inclusive integer count range [lo, hi] (empty when lo > hi)."""
    lo: int
    hi: int

    @classmethod
    def around(cls, B: int, center: float, width: float) -> "CountWindow":
        c = Fraction(center) * B
        w = Fraction(width)
        return cls(lo=math.ceil(c * (1 - w)), hi=math.floor(c * (1 + w)))

    def contains(self, count) -> bool:
        return self.lo <= count <= self.hi

    def contains_array(self, counts: np.ndarray) -> np.ndarray:
        return (counts >= self.lo) & (counts <= self.hi)


@dataclass(frozen=True)
class TypicalityBoxes:
    """Every window the decoder and analysis use, for one CodeParams."""
    y_silent: CountWindow
    y_active: CountWindow
    z_active: CountWindow
    bob_10: CountWindow
    bob_11: CountWindow
    willie_10: CountWindow
    willie_11: CountWindow


@lru_cache(maxsize=64)
def typicality_boxes(params) -> TypicalityBoxes:
    B, rho = params.B, params.rho
    p, q = params.channel.p, params.channel.q
    return TypicalityBoxes(
        y_silent=CountWindow.around(B, p, params.dy1),
        y_active=CountWindow.around(B, bin_conv(rho, p), params.dy1),
        z_active=CountWindow.around(B, bin_conv(rho, q), params.dz1),
        bob_10=CountWindow.around(B, rho * p, params.dxy10),
        bob_11=CountWindow.around(B, rho * (1 - p), params.dxy11),
        willie_10=CountWindow.around(B, rho * q, params.dxz10),
        willie_11=CountWindow.around(B, rho * (1 - q), params.dxz11),
    )


def typicality(params, y_or_z, which) -> bool:
    """Weight typicality of a received chunk in one of the three typical sets."""
    v = _as_bits(y_or_z)
    if v.size != params.B:
        raise ContractError(f"typicality expects length {params.B}, got {v.size}")
    boxes = typicality_boxes(params)
    window = {
        TypicalSet.Y_SILENT: boxes.y_silent,
        TypicalSet.Y_ACTIVE: boxes.y_active,
        TypicalSet.Z_ACTIVE: boxes.z_active,
    }[TypicalSet(which)]
    return window.contains(int(np.count_nonzero(v)))


def cond_typicality(params, x, y_or_z, role) -> bool:
    """Conditional typicality of codeword x given a received chunk."""
    x, v = _as_bits(x), _as_bits(y_or_z)
    if x.size != params.B or v.size != params.B:
        raise ContractError(f"cond_typicality expects length {params.B}")
    stats = pair_stats(x, v)
    boxes = typicality_boxes(params)
    if Role(role) is Role.BOB:
        w10, w11 = boxes.bob_10, boxes.bob_11
    else:
        w10, w11 = boxes.willie_10, boxes.willie_11
    return w10.contains(stats.n10) and w11.contains(stats.n11)


def info_terms(f10, f11, fz1, rho) -> Tuple[np.ndarray, np.ndarray]:
    """
    Empirical I(x;z) and D(x || rho) in bits from a joint type.

    Args:
        f10, f11: Fractions of (1,0) and (1,1) pairs (arrays broadcast)
        fz1: Fractional weight of z
        rho: Reference bias

    Returns:
        (I, D) with 0 log 0 = 0
    """
    f10 = np.asarray(f10, dtype=float)
    f11 = np.asarray(f11, dtype=float)
    fz1 = np.asarray(fz1, dtype=float)
    f00 = 1.0 - fz1 - f10
    f01 = fz1 - f11
    fx1 = f10 + f11
    fx0 = 1.0 - fx1
    fz0 = 1.0 - fz1
    if np.any(np.stack(np.broadcast_arrays(f00, f01, f10, f11)) < -1e-15):
        raise DomainError("Joint type has a negative cell")

    if rho <= 0.0 and np.any(fx1 > 0) or rho >= 1.0 and np.any(fx0 > 0):
        raise DomainError(f"D(x || rho) infinite: rho={rho} with nonconforming x")

    def term(f, a, b):
        return xlogy(f, f) - xlogy(f, a * b)

    info = (term(f00, fx0, fz0) + term(f01, fx0, fz1) + term(f10, fx1, fz0) + term(f11, fx1, fz1)) / LN2
    div = (xlogy(fx0, fx0) - xlogy(fx0, 1.0 - rho) + xlogy(fx1, fx1) - xlogy(fx1, rho)) / LN2
    return info, div


def empirical_info(x, z, rho: float) -> Tuple[float, float]:
    """Empirical mutual information and divergence of a (codeword, output) pair."""
    stats = pair_stats(x, z)
    info, div = info_terms(float(stats.f10), float(stats.f11), float(stats.fy1), rho)
    return float(info), float(div)


def empirical_entropy(x) -> float:
    """H of the empirical bit distribution of x, in bits."""
    v = _as_bits(x)
    f1 = np.count_nonzero(v) / v.size
    return float(-(xlogy(f1, f1) + xlogy(1 - f1, 1 - f1)) / LN2)


def empirical_conditional_entropy(x, z) -> float:
    """H(x | z) of the empirical joint type, in bits."""
    info, _ = empirical_info(x, z, 0.5)
    return empirical_entropy(x) - float(info)


def _exact_count(B: int, value) -> int:
    frac = Fraction(value).limit_denominator(10 ** 12) if isinstance(value, float) else Fraction(value)
    count = frac * B
    if count.denominator != 1:
        raise ContractError(f"B * {value} = {count} is not an integer count")
    return int(count)


def type_class_prob(params, f10, f11, fz1) -> float:
    """
    log2 P(X in conditional type class (f10, f11) | z of weight B fz1).

    X has i.i.d. Bernoulli(rho) bits; the class fixes c11 ones on z's ones and
    c10 ones on z's zeros.
    """
    B, rho = params.B, params.rho
    return type_class_logprob(B, rho, _exact_count(B, f10), _exact_count(B, f11), _exact_count(B, fz1))


def type_class_logprob(B: int, rho: float, c10: int, c11: int, cz1: int) -> float:
    """Count form of type_class_prob, in bits."""
    if not (0 <= cz1 <= B and 0 <= c11 <= cz1 and 0 <= c10 <= B - cz1):
        raise ContractError(f"Inconsistent type class counts c10={c10}, c11={c11}, cz1={cz1}, B={B}")
    cz0 = B - cz1

    def log_choose(a, b):
        return gammaln(a + 1) - gammaln(b + 1) - gammaln(a - b + 1)

    ones = c10 + c11
    value = (
        log_choose(cz1, c11) + log_choose(cz0, c10)
        + xlogy(ones, rho) + xlogy(B - ones, 1.0 - rho)
    )
    return float(value / LN2)
