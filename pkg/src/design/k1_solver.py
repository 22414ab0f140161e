"""
Chunk-length design parameter k1 from the min-max program

    k1 = min_{d10, d11 in (0,1)} max_i (xi_i + delta) / Phi_i

with Phi_1 = r_u + agg_j g_j(q, eps, d10, d11), Phi_2 = q k2 f(d10),
Phi_3 = (1-q) k2 f(d11). Solved on a coarse grid followed by a local
refinement grid; ties break on (k1, d10, d11).
"""
from dataclasses import dataclass, asdict
from typing import Dict, Tuple
import logging

import numpy as np

from src.config import settings
from src.design.formulas import CornerRule, DesignMode, aux_f, aux_g_all, design_k2, design_ru
from src.exceptions import InfeasibleDesignError

logger = logging.getLogger(__name__)

XI = (1.5, 0.5, 0.5)
PHI_NAMES = ("phi1", "phi2", "phi3")


@dataclass(frozen=True)
class K1Solution:
    """Solver output with its certificate values."""
    k1: float
    d10: float
    d11: float
    binding_constraint: str
    phi_values: Tuple[float, float, float]
    corner_index: int
    k2: float
    r_u: float
    mode: str
    corner_rule: str

    def certificates(self, delta: float) -> Tuple[bool, bool, bool]:
        """k1 * Phi_i >= xi_i + delta for each i."""
        return tuple(bool(self.k1 * phi >= xi + delta) for phi, xi in zip(self.phi_values, XI))

    def to_dict(self) -> Dict:
        data = asdict(self)
        data["phi_values"] = list(self.phi_values)
        return data


def _phi_surfaces(q, eps_d, k2, r_u, d10, d11, mode, corner_rule):
    """Phi_1..3 and the attaining corner on broadcast (d10, d11) arrays."""
    g = aux_g_all(q, eps_d, d10, d11, mode)
    if corner_rule is CornerRule.WORST:
        corner = np.argmin(g, axis=0)
    else:
        corner = np.argmax(g, axis=0)
    g_agg = np.take_along_axis(g, corner[None, ...], axis=0)[0]
    phi1 = r_u + g_agg
    phi2 = q * k2 * aux_f(d10) * np.ones_like(g_agg)
    phi3 = (1.0 - q) * k2 * aux_f(d11) * np.ones_like(g_agg)
    return np.stack([phi1, phi2, phi3]), corner + 1


def _objective(phis: np.ndarray, delta: float) -> np.ndarray:
    targets = np.array(XI)[:, None, None] + delta
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(phis > 0, targets / np.where(phis > 0, phis, 1.0), np.inf)
    return ratios.max(axis=0)


def _argbest(k1: np.ndarray, d10: np.ndarray, d11: np.ndarray) -> Tuple[int, int]:
    """Lexicographic (k1, d10, d11) minimum over a 2-D grid."""
    order = np.lexsort((d11.ravel(), d10.ravel(), k1.ravel()))
    return np.unravel_index(order[0], k1.shape)


def solve_k1(
    channel,
    mode=DesignMode.PAPER,
    corner_rule=CornerRule.WORST,
    grid_step: float = None,
    refine_step: float = None,
) -> K1Solution:
    """
    Solve the k1 min-max program for a channel.

    Args:
        channel: ChannelModel (p, q, eps_d, delta)
        mode: paper or optimal k2/r_u
        corner_rule: worst (min_j g_j) or printed (max_j g_j)
        grid_step: Coarse grid step on each width (settings.grid_step)
        refine_step: Refinement step (settings.refine_step)

    Returns:
        K1Solution whose certificates hold by direct re-evaluation
    """
    mode = DesignMode(mode)
    corner_rule = CornerRule(corner_rule)
    grid_step = grid_step or settings.grid_step
    refine_step = refine_step or settings.refine_step
    q, eps_d, delta = channel.q, channel.eps_d, channel.delta

    k2 = design_k2(q, eps_d, mode)
    r_u = design_ru(channel.p, q, eps_d, mode)

    coarse = np.round(np.arange(grid_step, 1.0 - grid_step / 2, grid_step), 12)
    d10, d11 = np.meshgrid(coarse, coarse, indexing="ij")
    phis, _ = _phi_surfaces(q, eps_d, k2, r_u, d10, d11, mode, corner_rule)
    k1_grid = _objective(phis, delta)

    if not np.isfinite(k1_grid).any():
        violated = [PHI_NAMES[i] for i in range(3) if not (phis[i] > 0).any()]
        name = violated[0] if violated else "phi1"
        raise InfeasibleDesignError(
            f"No feasible (d10, d11): {name} <= 0 on the whole grid "
            f"(p={channel.p}, q={q}, eps_d={eps_d}, mode={mode.value}, rule={corner_rule.value})",
            constraint=name,
        )

    i, j = _argbest(k1_grid, d10, d11)
    c10, c11 = float(d10[i, j]), float(d11[i, j])

    # Local refinement around the coarse optimum.
    lo_bound, hi_bound = refine_step, 1.0 - refine_step
    fine10 = np.arange(max(lo_bound, c10 - grid_step), min(hi_bound, c10 + grid_step) + refine_step / 2, refine_step)
    fine11 = np.arange(max(lo_bound, c11 - grid_step), min(hi_bound, c11 + grid_step) + refine_step / 2, refine_step)
    fine10 = np.clip(np.round(fine10, 12), lo_bound, hi_bound)
    fine11 = np.clip(np.round(fine11, 12), lo_bound, hi_bound)
    r10, r11 = np.meshgrid(fine10, fine11, indexing="ij")
    phis_f, corners_f = _phi_surfaces(q, eps_d, k2, r_u, r10, r11, mode, corner_rule)
    k1_fine = _objective(phis_f, delta)
    i, j = _argbest(k1_fine, r10, r11)

    best_d10, best_d11 = float(r10[i, j]), float(r11[i, j])
    phi_values = tuple(float(v) for v in phis_f[:, i, j])
    targets = np.array(XI) + delta
    ratios = targets / np.array(phi_values)
    k1 = float(ratios.max())
    binding = PHI_NAMES[int(np.argmax(ratios))]

    # Re-verify the certificate by direct evaluation; nudge past rounding.
    while not all(k1 * phi >= t for phi, t in zip(phi_values, targets)):
        k1 = float(np.nextafter(k1, np.inf))

    solution = K1Solution(
        k1=k1,
        d10=best_d10,
        d11=best_d11,
        binding_constraint=binding,
        phi_values=phi_values,
        corner_index=int(corners_f[i, j]),
        k2=k2,
        r_u=r_u,
        mode=mode.value,
        corner_rule=corner_rule.value,
    )
    logger.debug(
        f"solve_k1 p={channel.p} q={q}: k1={k1:.6f} d10={best_d10:.4f} d11={best_d11:.4f} "
        f"binding={binding} corner=g{solution.corner_index}"
    )
    return solution
