"""Design quantities, k1 solver, parameter derivation and analysis oracles."""
from .formulas import (
    DesignMode,
    CornerRule,
    aux_f,
    aux_g,
    aux_g_all,
    design_k2,
    design_ru,
    gaussian_q,
    gaussian_q_inverse,
    binary_entropy,
)
from .k1_solver import K1Solution, solve_k1, XI
from .parameters import ChannelModel, CodeParams, DesignOverrides, derive_params, default_l2
from .contour import contour_grid, CONTOUR_COLUMNS
from .oracles import (
    chernoff_bound,
    verify_corner_points,
    verify_tail_bound,
    verify_taylor_identity,
    rho_schedule,
    CornerReport,
    TailReport,
    TailSide,
    TaylorReport,
)

__all__ = [
    "DesignMode",
    "CornerRule",
    "aux_f",
    "aux_g",
    "aux_g_all",
    "design_k2",
    "design_ru",
    "gaussian_q",
    "gaussian_q_inverse",
    "binary_entropy",
    "K1Solution",
    "solve_k1",
    "XI",
    "ChannelModel",
    "CodeParams",
    "DesignOverrides",
    "derive_params",
    "default_l2",
    "contour_grid",
    "CONTOUR_COLUMNS",
    "chernoff_bound",
    "verify_corner_points",
    "verify_tail_bound",
    "verify_taylor_identity",
    "rho_schedule",
    "CornerReport",
    "TailReport",
    "TailSide",
    "TaylorReport",
]
