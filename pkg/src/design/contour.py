"""
Decoding-complexity contour over (p, q): exponent r_u * k1 + 1 per cell.
"""
from typing import Dict, Sequence, Union
import logging

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from src.config import settings
from src.design.formulas import CornerRule, DesignMode
from src.design.k1_solver import solve_k1
from src.design.parameters import ChannelModel
from src.exceptions import CovertLabError, InfeasibleDesignError

logger = logging.getLogger(__name__)

CONTOUR_COLUMNS = ["p", "q", "k1", "d10", "d11", "exponent", "status"]

AxisSpec = Union[Sequence[float], np.ndarray]


def _axis(values, steps) -> np.ndarray:
    """(lo, hi) with a step count, or an explicit sequence when steps is None."""
    if steps is None:
        return np.asarray(values, dtype=float)
    lo, hi = values
    return np.linspace(lo, hi, int(steps))


def _contour_cell(p: float, q: float, eps_d: float, delta: float, mode: str, corner_rule: str) -> Dict:
    row = {"p": p, "q": q, "k1": np.nan, "d10": np.nan, "d11": np.nan, "exponent": np.nan}
    if not p < q:
        row["status"] = "absent"
        return row
    try:
        channel = ChannelModel(p=p, q=q, eps_d=eps_d, delta=delta)
        sol = solve_k1(channel, mode, corner_rule)
    except InfeasibleDesignError as e:
        row["status"] = f"infeasible:{e.constraint}"
        return row
    except CovertLabError as e:
        row["status"] = f"error:{e}"
        return row
    row.update(k1=sol.k1, d10=sol.d10, d11=sol.d11, exponent=sol.r_u * sol.k1 + 1.0, status="ok")
    return row


def contour_grid(
    p_range: AxisSpec,
    q_range: AxisSpec,
    eps_d: float,
    delta: float = 0.01,
    steps=None,
    mode=DesignMode.PAPER,
    corner_rule=CornerRule.WORST,
    n_jobs: int = None,
) -> pd.DataFrame:
    """
    Complexity exponent table.

    Args:
        p_range, q_range: (lo, hi) pairs when steps is given, else explicit values
        eps_d: Covertness budget
        delta: Slackness
        steps: Grid points per axis (int or (np, nq)); None for explicit values
        mode: paper or optimal
        corner_rule: Phi_1 aggregation
        n_jobs: joblib workers (settings.n_jobs)

    Returns:
        DataFrame with columns p, q, k1, d10, d11, exponent, status; cells with
        p >= q are 'absent'
    """
    if isinstance(steps, (tuple, list)):
        p_steps, q_steps = steps
    else:
        p_steps = q_steps = steps
    ps = _axis(p_range, p_steps)
    qs = _axis(q_range, q_steps)
    mode = DesignMode(mode).value
    corner_rule = CornerRule(corner_rule).value
    n_jobs = n_jobs or settings.n_jobs

    logger.info(f"Contour grid: {len(ps)} x {len(qs)} cells, eps_d={eps_d}, mode={mode}, rule={corner_rule}")
    rows = Parallel(n_jobs=n_jobs)(
        delayed(_contour_cell)(float(p), float(q), eps_d, delta, mode, corner_rule)
        for q in qs for p in ps
    )
    return pd.DataFrame(rows, columns=CONTOUR_COLUMNS)
