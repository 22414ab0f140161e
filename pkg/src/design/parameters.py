"""
Channel model and concrete code parameters.

The user supplies integers (L, B); n := L*B and every rate is recomputed
from the realized integers. Off-paper choices (overrides, the default l2
substitute, field-degree clamping) are listed in CodeParams.off_paper.
"""
from dataclasses import dataclass, asdict, field, fields
from typing import Dict, Optional, Tuple
import hashlib
import json
import logging
import math

from src.design.formulas import CornerRule, DesignMode
from src.design.k1_solver import K1Solution, solve_k1
from src.config import settings
from src.exceptions import ConfigurationError, ContractError, InfeasibleDesignError, ScaleError

logger = logging.getLogger(__name__)

L2_CONSTANT = 28


@dataclass(frozen=True)
class ChannelModel:
    """(p, q, eps_d) with slackness delta; requires 0 < p < q < 1/2."""
    p: float
    q: float
    eps_d: float
    delta: float = 0.01

    def __post_init__(self):
        if not 0.0 < self.p:
            raise ConfigurationError(f"requires p > 0, got p={self.p}")
        if not self.p < self.q:
            raise ConfigurationError(f"requires p < q, got p={self.p}, q={self.q}")
        if not self.q < 0.5:
            raise ConfigurationError(f"requires q < 1/2, got q={self.q}")
        if not 0.0 < self.eps_d < 1.0:
            raise ConfigurationError(f"requires 0 < eps_d < 1, got eps_d={self.eps_d}")
        if not 0.0 < self.delta < 0.5:
            raise ConfigurationError(f"requires 0 < delta < 1/2, got delta={self.delta}")


@dataclass(frozen=True)
class DesignOverrides:
    """Explicit off-paper replacements for derived quantities."""
    l2: Optional[int] = None
    m: Optional[int] = None
    rho: Optional[float] = None
    dz1: Optional[float] = None
    dy1: Optional[float] = None
    dxz10: Optional[float] = None
    dxz11: Optional[float] = None
    dxy10: Optional[float] = None
    dxy11: Optional[float] = None

    def active(self) -> Dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self) if getattr(self, f.name) is not None}


@dataclass(frozen=True)
class CodeParams:
    """All derived quantities of one concrete code instance."""
    channel: ChannelModel
    n: int
    L: int
    B: int
    m: int
    outer_rate: float           # lambda = l1 / L
    l1: int
    l2: int
    k1: float
    k2: float
    r_u: float
    r: float                    # nominal throughput r_u (1 - (log n)^(-1/4))
    r_hat: float
    r_eff: float                # realized l1 * m / sqrt(n)
    rho: float
    dz1: float
    dy1: float
    dxz10: float
    dxz11: float
    dxy10: float
    dxy11: float
    mode: str
    corner_rule: str
    k1_solution: K1Solution = field(repr=False, compare=False)
    off_paper: Tuple[str, ...] = ()
    diagnostics: Tuple[str, ...] = field(default=(), compare=False)

    @property
    def log_n(self) -> float:
        return math.log2(self.n)

    @property
    def num_codewords(self) -> int:
        return 1 << self.m

    @property
    def message_bits(self) -> int:
        return self.l1 * self.m

    def to_dict(self) -> Dict:
        data = asdict(self)
        data["k1_solution"] = self.k1_solution.to_dict()
        data["off_paper"] = list(self.off_paper)
        data["diagnostics"] = list(self.diagnostics)
        return data

    def params_hash(self) -> str:
        """Stable digest of every field that shapes the code."""
        key = {
            "channel": asdict(self.channel),
            "n": self.n, "L": self.L, "B": self.B, "m": self.m, "l1": self.l1,
            "rho": repr(self.rho), "mode": self.mode,
        }
        blob = json.dumps(key, sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()


def default_l2(L: int, n: int) -> Tuple[int, bool]:
    """l2 = max(2, round(28 L / log n)), or max(2, L // 4) when that reaches L/2."""
    raw = L2_CONSTANT * L / math.log2(n)
    if raw >= L / 2:
        return max(2, L // 4), True
    return max(2, round(raw)), False


def derive_params(
    channel: ChannelModel,
    L: int,
    B: int,
    mode=DesignMode.PAPER,
    corner_rule=CornerRule.WORST,
    overrides: Optional[DesignOverrides] = None,
    k1_solution: Optional[K1Solution] = None,
) -> CodeParams:
    """
    Resolve integrality and derive a concrete CodeParams.

    Args:
        channel: Channel model
        L: Number of chunks (>= 4)
        B: Chunk length in bits (>= 16)
        mode: paper or optimal k2/r_u
        corner_rule: Phi_1 aggregation for the k1 solver
        overrides: Explicit off-paper values
        k1_solution: Reuse an existing solver result

    Returns:
        CodeParams with n = L*B and l1 + l2 = L exactly
    """
    if L < 4 or B < 16:
        raise ContractError(f"derive_params requires L >= 4 and B >= 16, got L={L}, B={B}")
    mode = DesignMode(mode)
    corner_rule = CornerRule(corner_rule)
    overrides = overrides or DesignOverrides()
    off_paper = []
    diagnostics = []

    solution = k1_solution or solve_k1(channel, mode, corner_rule)
    k1, k2, r_u = solution.k1, solution.k2, solution.r_u

    n = L * B
    log_n = math.log2(n)

    # Outer code split
    if overrides.l2 is not None:
        l2 = int(overrides.l2)
        off_paper.append("l2")
    else:
        l2, substituted = default_l2(L, n)
        if substituted:
            off_paper.append("l2_override")
            diagnostics.append(
                f"28*L/log2(n) = {L2_CONSTANT * L / log_n:.2f} >= L/2; using l2 = max(2, L//4) = {l2}"
            )
    if not 2 <= l2 <= L - 1:
        raise ConfigurationError(f"l2 must lie in [2, L-1], got l2={l2}, L={L}")
    l1 = L - l2
    outer_rate = l1 / L

    # Throughput and field size
    r = r_u * (1.0 - log_n ** -0.25)
    r_hat = r * k1 / outer_rate
    if overrides.m is not None:
        m = int(overrides.m)
        off_paper.append("m")
        if not 2 <= m <= settings.field_max_degree:
            raise ConfigurationError(f"m override must lie in [2, {settings.field_max_degree}], got {m}")
    else:
        m_raw = round(r_hat * log_n)
        if m_raw < 2:
            raise ScaleError(f"m = round(r_hat log n) = {m_raw} < 2; instance too small")
        m = min(m_raw, settings.field_max_degree)
        if m != m_raw:
            off_paper.append("m_clamped")
            diagnostics.append(f"m = {m_raw} clamped to {m}")
    if L > (1 << m):
        raise InfeasibleDesignError(f"L={L} exceeds 2^m={1 << m}", constraint="L <= 2^m")

    # Inner code bias and box widths
    rho = k2 / math.sqrt(n)
    if overrides.rho is not None:
        rho = float(overrides.rho)
        off_paper.append("rho")
    if not 0.0 < rho < 1.0:
        raise ConfigurationError(f"rho must lie in (0, 1), got {rho}")

    widths = {
        "dz1": n ** (-0.25 + channel.delta / 2),
        "dy1": n ** (-0.25 + channel.delta / 2),
        "dxz10": solution.d10,
        "dxz11": solution.d11,
        "dxy10": log_n ** (-1.0 / 3.0),
        "dxy11": log_n ** (-1.0 / 3.0),
    }
    for name in widths:
        value = getattr(overrides, name)
        if value is not None:
            if value < 0:
                raise ConfigurationError(f"{name} override must be >= 0, got {value}")
            widths[name] = float(value)
            off_paper.append(name)

    r_eff = l1 * m / math.sqrt(n)

    params = CodeParams(
        channel=channel,
        n=n,
        L=L,
        B=B,
        m=m,
        outer_rate=outer_rate,
        l1=l1,
        l2=l2,
        k1=k1,
        k2=k2,
        r_u=r_u,
        r=r,
        r_hat=r_hat,
        r_eff=r_eff,
        rho=rho,
        mode=mode.value,
        corner_rule=corner_rule.value,
        k1_solution=solution,
        off_paper=tuple(off_paper),
        diagnostics=tuple(diagnostics),
        **widths,
    )
    for note in diagnostics:
        logger.warning(f"derive_params: {note}")
    if off_paper:
        logger.info(f"derive_params off-paper fields: {', '.join(off_paper)}")
    return params
