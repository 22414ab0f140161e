"""
Numeric verification oracles for the design analysis: corner maximization of
I+D over the conditional box, binomial tail bounds, the small-rho expansion
of I+D, and the Chernoff helper.
"""
from dataclasses import dataclass, asdict
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np
from scipy.special import logsumexp

from src.channel.laws import bin_conv, weight_logpmf
from src.design.formulas import CORNER_SIGNS, DesignMode, aux_f, aux_g_all, design_k2
from src.exceptions import ContractError
from src.inner_code.typicality import info_terms

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)


def chernoff_bound(n: int, mu: float, eps: float, side: str = "upper") -> float:
    """exp(-eps^2 mu / 3) for P(X >= (1+eps)mu) and P(X <= (1-eps)mu)."""
    if not 0.0 < eps < 1.0:
        raise ContractError(f"chernoff_bound requires 0 < eps < 1, got {eps}")
    if side not in ("upper", "lower"):
        raise ContractError(f"side must be 'upper' or 'lower', got {side}")
    return math.exp(-eps * eps * mu / 3.0)


@dataclass
class CornerReport:
    q: float
    rho: float
    d10: float
    d11: float
    grid_steps: int
    max_value: float
    argmax: Tuple[int, int]
    corner_values: Tuple[float, float, float, float]
    at_corner: bool
    g_values: Optional[Tuple[float, float, float, float]] = None
    scaling_gap: Optional[float] = None

    def scaled_corners(self, n: float) -> List[float]:
        """-sqrt(n) (I+D) at each corner, comparable with g_1..g_4."""
        return [-math.sqrt(n) * v for v in self.corner_values]

    def to_dict(self) -> Dict:
        return asdict(self)


def verify_corner_points(
    q: float,
    rho: float,
    d10: float,
    d11: float,
    grid_steps: int = 101,
    eps_d: float = None,
    mode: DesignMode = DesignMode.PAPER,
) -> CornerReport:
    """
    Maximize I+D over the Willie box on a grid and locate the maximum.

    The box is f10 in rho q (1 +/- d10), f11 in rho (1-q) (1 +/- d11), with
    f^z_1 = rho*q. A non-corner argmax is reported, not raised.

    With eps_d given, rho is read as k2/sqrt(n) and the corner values scaled
    by -sqrt(n) are compared with g_1..g_4; scaling_gap is the largest
    difference relative to max |g_j|, and shrinks linearly in rho.
    """
    fz1 = bin_conv(rho, q)
    f10 = rho * q * (1.0 + np.linspace(-d10, d10, grid_steps))
    f11 = rho * (1.0 - q) * (1.0 + np.linspace(-d11, d11, grid_steps))
    F10, F11 = np.meshgrid(f10, f11, indexing="ij")
    info, div = info_terms(F10, F11, fz1, rho)
    total = info + div

    flat = int(np.argmax(total))
    i, j = np.unravel_index(flat, total.shape)
    max_value = float(total[i, j])

    last = grid_steps - 1
    corner_values = []
    for k in (1, 2, 3, 4):
        s10, s11 = CORNER_SIGNS[k]
        corner_values.append(float(total[0 if s10 < 0 else last, 0 if s11 < 0 else last]))

    tolerance = 1e-12 * max(1.0, abs(max_value))
    at_corner = (i in (0, last) and j in (0, last)) or max(corner_values) >= max_value - tolerance
    if not at_corner:
        logger.warning(f"Box maximum of I+D off the corners at grid index ({i}, {j})")
    report = CornerReport(
        q=q, rho=rho, d10=d10, d11=d11, grid_steps=grid_steps,
        max_value=max_value, argmax=(int(i), int(j)),
        corner_values=tuple(corner_values), at_corner=bool(at_corner),
    )
    if eps_d is not None:
        n = (design_k2(q, eps_d, mode) / rho) ** 2
        g = [float(v) for v in aux_g_all(q, eps_d, d10, d11, mode)]
        scaled = report.scaled_corners(n)
        report.g_values = tuple(g)
        report.scaling_gap = max(abs(s - v) for s, v in zip(scaled, g)) / max(abs(v) for v in g)
    return report


class TailSide(str, Enum):
    D10_UPPER = "d10_upper"
    D10_LOWER = "d10_lower"
    D11_UPPER = "d11_upper"
    D11_LOWER = "d11_lower"


@dataclass
class TailReport:
    which: str
    success_prob: float
    mean: float
    width: float
    index_range: Tuple[int, int]
    log2_tail: float
    log2_bound: float
    nominal_exponent: float
    holds: bool

    def to_dict(self) -> Dict:
        return asdict(self)


def verify_tail_bound(params, which) -> TailReport:
    """
    Exact binomial tail versus 2^(-mu f(width)) n^(delta/2).

    mu = B s with s = rho q (d10 sides) or rho (1-q) (d11 sides); the nominal
    exponent k1 k2 q f(width) log n is reported alongside.
    """
    which = TailSide(which)
    q, B = params.channel.q, params.B
    if which in (TailSide.D10_UPPER, TailSide.D10_LOWER):
        s, width, share = params.rho * q, params.dxz10, q
    else:
        s, width, share = params.rho * (1.0 - q), params.dxz11, 1.0 - q
    mu = B * s

    if which in (TailSide.D10_UPPER, TailSide.D11_UPPER):
        lo, hi = math.ceil(mu * (1.0 + width)), B
    else:
        lo, hi = 0, math.floor(mu * (1.0 - width))

    if lo > hi or hi < 0 or lo > B:
        log2_tail = -math.inf
    else:
        idx = np.arange(max(lo, 0), min(hi, B) + 1)
        log2_tail = float(logsumexp(weight_logpmf(B, s, idx)) / LN2)

    f_width = aux_f(width)
    log2_bound = -mu * f_width + params.channel.delta / 2.0 * params.log_n
    nominal = params.k1 * params.k2 * share * f_width * params.log_n
    return TailReport(
        which=which.value, success_prob=s, mean=mu, width=width,
        index_range=(int(lo), int(hi)), log2_tail=log2_tail, log2_bound=log2_bound,
        nominal_exponent=nominal, holds=bool(log2_tail <= log2_bound),
    )


@dataclass
class TaylorRow:
    n: float
    rho: float
    box_width: float
    center_value: float
    leading_term: float
    center_ratio: float        # |I+D - leading| * n
    box_ratio: float           # max corner |I+D - leading| / (n^-1/2 (log n)^-1/3)


@dataclass
class TaylorReport:
    p: float
    rows: List[TaylorRow]
    ratio_limit: float
    center_positive: bool
    bounded: bool

    @property
    def passed(self) -> bool:
        return self.center_positive and self.bounded

    def to_dict(self) -> Dict:
        return {
            "p": self.p, "ratio_limit": self.ratio_limit,
            "center_positive": self.center_positive, "bounded": self.bounded,
            "rows": [asdict(r) for r in self.rows],
        }


def rho_schedule(k2: float, n_values: Sequence[float]) -> List[Tuple[float, float]]:
    """(n, k2/sqrt(n)) pairs."""
    return [(float(n), k2 / math.sqrt(n)) for n in n_values]


def verify_taylor_identity(p: float, schedule: Sequence[Tuple[float, float]], ratio_limit: float = 3.0) -> TaylorReport:
    """
    Compare I+D with rho (1-2p) log((1-p)/p) along a decreasing rho schedule.

    At the center (f^y_1 = rho*p, f10 = rho p, f11 = rho (1-p)) the gap scales
    as 1/n; over Bob's box with widths (log n)^(-1/3) it scales as
    n^(-1/2) (log n)^(-1/3). Both ratios must stay within ratio_limit of
    their smallest value across the schedule.
    """
    if not 0.0 < p < 0.5:
        raise ContractError(f"verify_taylor_identity requires 0 < p < 1/2, got {p}")
    rows = []
    slope = (1.0 - 2.0 * p) * math.log2((1.0 - p) / p)
    for n, rho in schedule:
        log_n = math.log2(n)
        width = log_n ** (-1.0 / 3.0)
        fy1 = bin_conv(rho, p)
        info, div = info_terms(rho * p, rho * (1.0 - p), fy1, rho)
        center = float(info + div)
        leading = rho * slope

        corners = []
        for s10, s11 in CORNER_SIGNS.values():
            ci, cd = info_terms(rho * p * (1 + s10 * width), rho * (1 - p) * (1 + s11 * width), fy1, rho)
            corners.append(abs(float(ci + cd) - leading))
        rows.append(TaylorRow(
            n=n, rho=rho, box_width=width, center_value=center, leading_term=leading,
            center_ratio=abs(center - leading) * n,
            box_ratio=max(corners) / (n ** -0.5 * width),
        ))

    center_ratios = np.array([r.center_ratio for r in rows])
    box_ratios = np.array([r.box_ratio for r in rows])
    bounded = bool(
        np.all(np.isfinite(center_ratios)) and np.all(np.isfinite(box_ratios))
        and center_ratios.max() <= ratio_limit * center_ratios.min()
        and box_ratios.max() <= ratio_limit * box_ratios.min()
    )
    return TaylorReport(
        p=p, rows=rows, ratio_limit=ratio_limit,
        center_positive=all(r.center_value > 0 for r in rows), bounded=bounded,
    )
