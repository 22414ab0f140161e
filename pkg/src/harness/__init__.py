"""Experiment orchestration: configs, runners, outputs and the run ledger."""
from .experiment_config import (
    ExperimentConfig,
    ExperimentKind,
    ChannelConfig,
    ScaleConfig,
    OverridesConfig,
    ToleranceBand,
    SweepGrid,
    CovertnessOptions,
    VerifyOptions,
    load_config,
)
from .runner import (
    RunRecord,
    run_design,
    run_reliability,
    run_covertness,
    run_lemma1,
    run_contour,
    run_verify,
    run_experiment,
    calibrate_band,
    injection_checks,
    lemma1_row,
    exponent_profile,
    write_outputs,
    record_run,
    to_json,
    VERIFY_SUITES,
)

__all__ = [
    "ExperimentConfig",
    "ExperimentKind",
    "ChannelConfig",
    "ScaleConfig",
    "OverridesConfig",
    "ToleranceBand",
    "SweepGrid",
    "CovertnessOptions",
    "VerifyOptions",
    "load_config",
    "RunRecord",
    "run_design",
    "run_reliability",
    "run_covertness",
    "run_lemma1",
    "run_contour",
    "run_verify",
    "run_experiment",
    "calibrate_band",
    "injection_checks",
    "lemma1_row",
    "exponent_profile",
    "write_outputs",
    "record_run",
    "to_json",
    "VERIFY_SUITES",
]
