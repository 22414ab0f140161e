"""
Experiment configuration documents.

One JSON document describes one experiment. It is validated by pydantic on
load; validation errors carry the offending field path.
"""
from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple
import hashlib
import json

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.design import ChannelModel, CornerRule, DesignMode, DesignOverrides


class ExperimentKind(str, Enum):
    DESIGN = "design"
    RELIABILITY = "reliability"
    COVERTNESS = "covertness"
    LEMMA1 = "lemma1"
    CONTOUR = "contour"
    VERIFY = "verify"


class ChannelConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: float = Field(gt=0.0, lt=0.5, description="Bob crossover")
    q: float = Field(gt=0.0, lt=0.5, description="Willie crossover")
    eps_d: float = Field(gt=0.0, lt=1.0, description="Covertness budget")
    delta: float = Field(default=0.01, gt=0.0, lt=0.5, description="Slackness")

    @model_validator(mode="after")
    def check_order(self):
        if not self.p < self.q:
            raise ValueError(f"requires p < q, got p={self.p}, q={self.q}")
        return self

    def to_model(self) -> ChannelModel:
        return ChannelModel(p=self.p, q=self.q, eps_d=self.eps_d, delta=self.delta)


class ScaleConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    L: Optional[int] = Field(default=None, ge=4, description="Chunks")
    B: Optional[int] = Field(default=None, ge=16, description="Chunk length")


class OverridesConfig(BaseModel):
    """Off-paper replacements; every set field is flagged in outputs."""
    model_config = ConfigDict(extra="forbid")

    l2: Optional[int] = Field(default=None, ge=2)
    m: Optional[int] = Field(default=None, ge=2, le=20)
    rho: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    dz1: Optional[float] = Field(default=None, ge=0.0)
    dy1: Optional[float] = Field(default=None, ge=0.0)
    dxz10: Optional[float] = Field(default=None, ge=0.0)
    dxz11: Optional[float] = Field(default=None, ge=0.0)
    dxy10: Optional[float] = Field(default=None, ge=0.0)
    dxy11: Optional[float] = Field(default=None, ge=0.0)

    def to_overrides(self) -> DesignOverrides:
        return DesignOverrides(**self.model_dump())


class ToleranceBand(BaseModel):
    """
    Tolerance band on P_err.

    Bounds only ever come from pilot runs (calibrate_band). A band that names
    just `pilots` is regenerated when the reliability run checks it.
    """
    model_config = ConfigDict(extra="forbid")

    lower: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    upper: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    pilots: int = Field(default=5, ge=1)
    pilot_values: List[float] = Field(default_factory=list)
    pilot_seed: Optional[int] = Field(default=None, description="Master seed the pilot seeds were derived from")

    @model_validator(mode="after")
    def check_provenance(self):
        if (self.lower is None) != (self.upper is None):
            raise ValueError("band needs both lower and upper, or neither")
        if self.lower is None:
            return self
        if self.lower > self.upper:
            raise ValueError(f"band lower {self.lower} exceeds upper {self.upper}")
        if len(self.pilot_values) != self.pilots:
            raise ValueError(
                f"band bounds must come from pilot runs: expected {self.pilots} pilot values, "
                f"got {len(self.pilot_values)}"
            )
        return self

    @property
    def calibrated(self) -> bool:
        return self.lower is not None

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


class SweepGrid(BaseModel):
    """Lemma-1 sweep axes and contour axes."""
    model_config = ConfigDict(extra="forbid")

    q_values: List[float] = Field(default_factory=lambda: [0.1, 0.25, 0.4])
    eps_values: List[float] = Field(default_factory=lambda: [0.05, 0.1])
    n_values: List[int] = Field(default_factory=lambda: [10_000, 1_000_000])
    modes: List[DesignMode] = Field(default_factory=lambda: [DesignMode.PAPER, DesignMode.OPTIMAL])
    sharpness_min_n: int = Field(default=1_000_000, ge=1)

    p_range: Tuple[float, float] = (0.01, 0.24)
    q_range: Tuple[float, float] = (0.25, 0.25)
    p_steps: int = Field(default=24, ge=1)
    q_steps: int = Field(default=1, ge=1)
    profile_q: Optional[float] = Field(default=0.25, gt=0.0, lt=0.5)


class CovertnessOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    alpha_chunk: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    short_segment: Optional[int] = Field(default=None, ge=1, description="Short-segment detector length")
    include_code: bool = False
    micro_B: Optional[int] = Field(default=12, ge=1, le=20)
    micro_codewords: int = Field(default=4, ge=1)
    micro_rho: float = Field(default=0.25, gt=0.0, lt=1.0)
    micro_trials: int = Field(default=1_000_000, ge=1000)


class VerifyOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    suite: str = "appendix"
    corner_grid_steps: int = Field(default=101, ge=3)
    tail_n: int = Field(default=1_000_000, ge=1024)
    taylor_n_values: List[float] = Field(default_factory=lambda: [1e4, 1e6, 1e8])
    rs_trials: int = Field(default=1000, ge=1)


class ExperimentConfig(BaseModel):
    """One experiment, validated before anything runs."""
    model_config = ConfigDict(extra="forbid")

    kind: ExperimentKind
    channel: Optional[ChannelConfig] = None
    scale: ScaleConfig = Field(default_factory=ScaleConfig)
    trials: int = Field(default=1000, gt=0, description="Trials per branch or hypothesis")
    master_seed: int = Field(ge=0, description="Root of every random stream")
    mode: DesignMode = DesignMode.PAPER
    corner_rule: CornerRule = CornerRule.WORST
    overrides: OverridesConfig = Field(default_factory=OverridesConfig)
    output_path: Optional[str] = None
    band: Optional[ToleranceBand] = None
    grid: SweepGrid = Field(default_factory=SweepGrid)
    covertness: CovertnessOptions = Field(default_factory=CovertnessOptions)
    verify: VerifyOptions = Field(default_factory=VerifyOptions)

    @model_validator(mode="after")
    def check_kind_requirements(self):
        needs_channel = {ExperimentKind.DESIGN, ExperimentKind.RELIABILITY, ExperimentKind.COVERTNESS}
        if self.kind in needs_channel and self.channel is None:
            raise ValueError(f"kind '{self.kind.value}' requires a channel")
        needs_scale = {ExperimentKind.RELIABILITY, ExperimentKind.COVERTNESS}
        if self.kind in needs_scale and (self.scale.L is None or self.scale.B is None):
            raise ValueError(f"kind '{self.kind.value}' requires scale.L and scale.B")
        return self

    def config_hash(self) -> str:
        """sha256 of the canonical JSON form, output_path excluded."""
        data = self.model_dump(mode="json", exclude={"output_path"})
        blob = json.dumps(data, sort_keys=True, separators=(",", ":")).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()

    def mode_flags(self) -> dict:
        return {
            "mode": self.mode.value,
            "corner_rule": self.corner_rule.value,
            "off_paper": sorted(k for k, v in self.overrides.model_dump().items() if v is not None),
        }


def load_config(path) -> ExperimentConfig:
    """Read and validate a JSON experiment document."""
    text = Path(path).read_text(encoding="utf-8")
    return ExperimentConfig.model_validate_json(text)
