"""
Closed-form design quantities: f, g_1..g_4, k2 and r_u.

All logarithms are base 2. Functions accept scalars or numpy arrays.
"""
from enum import Enum
import math

import numpy as np
from scipy.optimize import bisect
from scipy.special import entr, erfc

from src.exceptions import ContractError, DomainError

LOG2E = math.log2(math.e)

# Sign of the (w, t) perturbation at each corner j = 1..4.
CORNER_SIGNS = {
    1: (-1, +1),
    2: (+1, +1),
    3: (-1, -1),
    4: (+1, -1),
}


class DesignMode(str, Enum):
    """Source of k2 and r_u."""
    PAPER = "paper"        # Pinsker-based closed forms
    OPTIMAL = "optimal"    # Gaussian-tail sharpened forms


class CornerRule(str, Enum):
    """How the four corner functions g_j enter Phi_1."""
    WORST = "worst"        # min_j g_j: the corner with the largest I+D
    PRINTED = "printed"    # max_j g_j as printed


def aux_f(x):
    """f(x) = (1+x)log(1+x) - x*log(e), for x > -1."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= -1):
        raise DomainError(f"aux_f requires x > -1, got {x}")
    value = (1.0 + x_arr) * np.log2(1.0 + x_arr) - x_arr * LOG2E
    return float(value) if np.ndim(value) == 0 else value


def gaussian_q(x: float) -> float:
    """Gaussian tail Q(x) = P(N(0,1) > x)."""
    return 0.5 * float(erfc(x / math.sqrt(2.0)))


def gaussian_q_inverse(y: float, tol: float = 1e-10) -> float:
    """Q^-1 by bisection on [0, 10]; requires 0 < y <= 1/2."""
    if not 0.0 < y <= 0.5:
        raise DomainError(f"Q^-1 defined here for y in (0, 1/2], got {y}")
    if y == 0.5:
        return 0.0
    return bisect(lambda x: gaussian_q(x) - y, 0.0, 10.0, xtol=tol, rtol=4 * np.finfo(float).eps)


def _check_mode(mode) -> DesignMode:
    try:
        return DesignMode(mode)
    except ValueError:
        raise ContractError(f"Unknown design mode: {mode}")


def design_k2(q: float, eps_d: float, mode=DesignMode.PAPER) -> float:
    """
    Code weight design parameter k2(q, eps_d).

    Args:
        q: Willie crossover, 0 < q < 1/2
        eps_d: Covertness budget
        mode: paper (2 eps sqrt(q(1-q))/(1-2q)) or optimal (Q^-1 sharpened)

    Returns:
        k2 such that rho = k2/sqrt(n)
    """
    mode = _check_mode(mode)
    if not 0.0 < q < 0.5:
        raise DomainError(f"design_k2 requires 0 < q < 1/2, got q={q}")
    scale = 2.0 * math.sqrt(q * (1.0 - q)) / (1.0 - 2.0 * q)
    if mode is DesignMode.PAPER:
        return scale * eps_d
    if eps_d <= 0:
        return 0.0
    return scale * gaussian_q_inverse((1.0 - eps_d) / 2.0)


def design_ru(p: float, q: float, eps_d: float, mode=DesignMode.PAPER) -> float:
    """Throughput parameter r_u = k2 (1-2p) log((1-p)/p)."""
    if not 0.0 < p < q < 0.5:
        raise DomainError(f"design_ru requires 0 < p < q < 1/2, got p={p}, q={q}")
    k2 = design_k2(q, eps_d, mode)
    return k2 * (1.0 - 2.0 * p) * math.log2((1.0 - p) / p)


def aux_g(j: int, u: float, v: float, w, t, mode=DesignMode.PAPER):
    """
    Corner function g_j(u, v, w, t).

    j=1 uses (1-w, 1+t); j=2 (1+w, 1+t); j=3 (1-w, 1-t); j=4 (1+w, 1-t).
    w and t may be arrays (broadcast together).
    """
    if j not in CORNER_SIGNS:
        raise ContractError(f"Corner index must be in 1..4, got {j}")
    if not 0.0 < u < 0.5:
        raise DomainError(f"aux_g requires 0 < u < 1/2, got u={u}")
    sw, st = CORNER_SIGNS[j]
    a = u * (1.0 + sw * np.asarray(w, dtype=float))
    b = (1.0 - u) * (1.0 + st * np.asarray(t, dtype=float))
    if np.any(a <= 0) or np.any(b <= 0):
        raise DomainError(f"aux_g log argument non-positive at j={j}")
    k2 = design_k2(u, v, mode)
    value = k2 * (
        a * (np.log2((1.0 - u) / a) + LOG2E)
        + b * (np.log2(u / b) + LOG2E)
        - LOG2E
    )
    return float(value) if np.ndim(value) == 0 else value


def aux_g_all(u: float, v: float, w, t, mode=DesignMode.PAPER) -> np.ndarray:
    """Stack of g_1..g_4 along a new leading axis."""
    return np.stack([np.asarray(aux_g(j, u, v, w, t, mode)) for j in (1, 2, 3, 4)])


def binary_entropy(x):
    """h(x) in bits with 0 log 0 = 0."""
    value = (entr(np.asarray(x, dtype=float)) + entr(1.0 - np.asarray(x, dtype=float))) * LOG2E
    return float(value) if np.ndim(value) == 0 else value
