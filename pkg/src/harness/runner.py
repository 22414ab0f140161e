"""
Experiment runner.

Each run_* function takes a validated ExperimentConfig, derives every
parameter before simulating, and returns a RunRecord. run_experiment
dispatches on cfg.kind, writes the result file and appends the record to
the run ledger.
"""
from dataclasses import dataclass, field, asdict
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, List, Optional
import json
import logging
import math
import time

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from scipy.special import rel_entr

import src
from src.adversary import (
    AlwaysAccuse,
    ChunkWeightDetector,
    ConcatCodeSource,
    ConcentratedCodeLaw,
    DetectionReport,
    MicroCodebook,
    MicroLrtDetector,
    NeverAccuse,
    RadiometerDetector,
    SpreadCodeLaw,
    covertness_chain_micro,
    detect_experiment,
    exact_report,
    lrt_exact_micro,
    radiometer_design,
)
from src.channel import bin_conv, bsc_transmit, tv_product_bernoulli
from src.codec import (
    RsStatus,
    build_concat_code,
    decode,
    decode_outcomes,
    encode,
    message_to_symbols,
    random_message,
    throughput_report,
)
from src.config import settings
from src.database import RunRecordRow, db
from src.design import (
    ChannelModel,
    TailSide,
    contour_grid,
    derive_params,
    design_k2,
    rho_schedule,
    solve_k1,
    verify_corner_points,
    verify_tail_bound,
    verify_taylor_identity,
)
from src.exceptions import ConfigurationError
from src.harness.experiment_config import ChannelConfig, ExperimentConfig, ExperimentKind, ToleranceBand
from src.inner_code import DecodeOutcome, OutcomeKind, WorkCounter
from src.outer_code import (
    field_build,
    rs_build,
    rs_decode,
    rs_encode,
    rs_enumerate_codewords,
    rs_preimage_count,
    rs_weight_distribution,
)
from src.utils.seeding import rng_for, seed_sequence

logger = logging.getLogger(__name__)

DEFAULT_CHANNEL = ChannelConfig(p=0.05, q=0.25, eps_d=0.1)

# Acceptance limit for the T=0 branch.
SILENCE_FAILURE_LIMIT = 0.01

# alpha + beta the best chunk detector must reach on the concentrated law.
CONCENTRATED_CATCH_LIMIT = 0.1

CORNER_SAMPLE = [
    (q, rho, d10, d11)
    for q in (0.1, 0.25, 0.4)
    for rho in (0.01, 0.05)
    for d10, d11 in ((0.3, 0.3), (0.8, 0.5))
]


@dataclass
class RunRecord:
    """Outcome of one harness run."""
    config_hash: str
    kind: str
    master_seed: int
    timestamp: str
    build_id: str
    mode_flags: Dict
    metrics: Dict
    rows: List[Dict] = field(default_factory=list, repr=False)
    passed: bool = True
    output_path: Optional[str] = None

    def summary(self) -> Dict:
        return {
            "kind": self.kind,
            "config_hash": self.config_hash,
            "passed": self.passed,
            "output_path": self.output_path,
            **self.mode_flags,
            "metrics": self.metrics,
        }


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Not JSON serializable: {type(value).__name__}")


def to_json(data, indent: int = None) -> str:
    return json.dumps(data, default=_json_default, sort_keys=True, indent=indent)


def _new_record(cfg: ExperimentConfig, metrics: Dict, rows: List[Dict], passed: bool) -> RunRecord:
    flags = cfg.mode_flags()
    config_hash = cfg.config_hash()
    tagged = [{"config_hash": config_hash, **flags, **row} for row in rows]
    return RunRecord(
        config_hash=config_hash,
        kind=cfg.kind.value,
        master_seed=cfg.master_seed,
        timestamp=datetime.now(timezone.utc).isoformat(),
        build_id=src.__version__,
        mode_flags=flags,
        metrics=metrics,
        rows=tagged,
        passed=bool(passed),
    )


def _channel(cfg: ExperimentConfig) -> ChannelModel:
    return (cfg.channel or DEFAULT_CHANNEL).to_model()


def _derive(cfg: ExperimentConfig):
    return derive_params(
        _channel(cfg), cfg.scale.L, cfg.scale.B, cfg.mode, cfg.corner_rule, cfg.overrides.to_overrides()
    )


# --------------------------------------------------------------------------- design

def run_design(cfg: ExperimentConfig) -> RunRecord:
    """k1 solution, certificates and (with L, B) the concrete parameters."""
    channel = _channel(cfg)
    solution = solve_k1(channel, cfg.mode, cfg.corner_rule)
    certificates = solution.certificates(channel.delta)
    metrics = {
        "k1_solution": solution.to_dict(),
        "certificates": list(certificates),
        "exponent": solution.r_u * solution.k1 + 1.0,
    }
    if cfg.scale.L is not None and cfg.scale.B is not None:
        params = derive_params(
            channel, cfg.scale.L, cfg.scale.B, cfg.mode, cfg.corner_rule,
            cfg.overrides.to_overrides(), k1_solution=solution,
        )
        metrics["params"] = params.to_dict()
        metrics["diagnostics"] = list(params.diagnostics)
    return _new_record(cfg, metrics, [], passed=all(certificates))


# --------------------------------------------------------------------------- reliability

def _reliability_trials(code, branch: int, trials: range, master_seed: int) -> List[Dict]:
    params = code.params
    rows = []
    for trial in trials:
        rng = rng_for(master_seed, "reliability", branch, trial)
        message = random_message(code, rng) if branch == 1 else None
        x = encode(code, message, branch)
        y = bsc_transmit(x, params.channel.p, rng)
        counter = WorkCounter()
        result = decode(code, y, counter)

        if branch == 0:
            error = result.t_hat != 0
            wrong_chunks = 0
        else:
            error = result.message is None or not np.array_equal(result.message, message)
            outer = rs_encode(code.rs, message_to_symbols(message, params.l1, params.m))
            wrong_chunks = sum(
                1 for o, w in zip(result.chunk_outcomes, outer) if o.is_message and o.symbol != int(w)
            )
        rows.append({
            "trial": trial,
            "branch": branch,
            "t_hat": result.t_hat,
            "error": bool(error),
            "rs_status": result.rs_status.value,
            "outcomes": result.outcome_string(params.m),
            "silence": result.count(OutcomeKind.SILENCE),
            "message": result.count(OutcomeKind.MESSAGE),
            "declared_error": result.count(OutcomeKind.DECLARED_ERROR),
            "wrong_message_chunks": wrong_chunks,
            "decode_ops": counter.bit_comparisons,
        })
    return rows


def _batches(total: int, size: int) -> List[range]:
    return [range(start, min(start + size, total)) for start in range(0, total, size)]


def injection_checks(code, trials: int, master_seed: int) -> Dict:
    """
    Decode clean chunk outcomes with floor(l2/2) wrong symbols injected, and
    with l2 declared errors; both must recover the message every time.
    """
    params = code.params
    rng = rng_for(master_seed, "inject")
    radius = params.l2 // 2
    error_failures = erasure_failures = 0
    for _ in range(trials):
        message = random_message(code, rng)
        outer = rs_encode(code.rs, message_to_symbols(message, params.l1, params.m))
        clean = [DecodeOutcome.message(int(w)) for w in outer]

        corrupted = list(clean)
        for pos in rng.choice(params.L, size=radius, replace=False):
            shift = int(rng.integers(1, params.num_codewords))
            corrupted[pos] = DecodeOutcome.message((int(outer[pos]) + shift) % params.num_codewords)
        result = decode_outcomes(code, corrupted)
        if result.message is None or not np.array_equal(result.message, message):
            error_failures += 1

        erased = list(clean)
        for pos in rng.choice(params.L, size=params.l2, replace=False):
            erased[pos] = DecodeOutcome.declared_error()
        result = decode_outcomes(code, erased)
        if result.message is None or not np.array_equal(result.message, message):
            erasure_failures += 1
    return {
        "trials": trials,
        "injected_errors": radius,
        "error_failures": error_failures,
        "injected_erasures": params.l2,
        "erasure_failures": erasure_failures,
    }


def _branch_metrics(rows: List[Dict]) -> Dict:
    trials = len(rows)
    errors = sum(r["error"] for r in rows)
    return {
        "trials": trials,
        "errors": errors,
        "p_err": errors / trials,
        "rs_failures": sum(r["rs_status"] == RsStatus.FAILURE.value for r in rows),
        "histogram": {
            "silence": sum(r["silence"] for r in rows),
            "message": sum(r["message"] for r in rows),
            "declared_error": sum(r["declared_error"] for r in rows),
        },
        "wrong_message_chunks": sum(r["wrong_message_chunks"] for r in rows),
        "t_hat_one": sum(r["t_hat"] for r in rows),
    }


def run_reliability(cfg: ExperimentConfig) -> RunRecord:
    """
    P_err under both transmission statuses through BSC(p).

    Trial i of branch t draws from the stream (seed, "reliability", t, i), so
    the result does not depend on batching or worker count.
    """
    params = _derive(cfg)
    try:
        code = build_concat_code(params, cfg.master_seed)
        logger.info(f"Reliability run: {cfg.trials} trials per branch, n={params.n}")

        rows = []
        branches = {}
        for branch in (0, 1):
            chunks = Parallel(n_jobs=settings.n_jobs)(
                delayed(_reliability_trials)(code, branch, batch, cfg.master_seed)
                for batch in _batches(cfg.trials, settings.mc_batch_size)
            )
            branch_rows = [row for chunk in chunks for row in chunk]
            branches[branch] = _branch_metrics(branch_rows)
            rows.extend(branch_rows)

        injected = injection_checks(code, min(cfg.trials, 1000), cfg.master_seed)
    except Exception as e:
        logger.error(f"Reliability run failed: {e}")
        raise

    p_err = max(branches[0]["p_err"], branches[1]["p_err"])
    report = throughput_report(code)
    max_ops = max(r["decode_ops"] for r in rows)
    metrics = {
        "p_err": p_err,
        "branch_t0": branches[0],
        "branch_t1": branches[1],
        "injection": injected,
        "asymptotic_bound": math.exp(-2.0 * math.sqrt(params.n) / (params.k1 * params.log_n ** 2)),
        "throughput": asdict(report),
        "max_decode_ops": max_ops,
        "silence_rule": "t_hat = 0 when #Silence >= L - floor(l2/2)",
        "params_off_paper": list(params.off_paper),
    }

    checks = [
        injected["error_failures"] == 0,
        injected["erasure_failures"] == 0,
        max_ops <= report.decode_ops_bound,
    ]
    if cfg.band is not None:
        band = cfg.band
        if not band.calibrated:
            logger.info(f"Regenerating tolerance band from {band.pilots} pilot runs")
            band = calibrate_band(cfg, pilots=band.pilots)
        metrics["band"] = {**band.model_dump(mode="json"), "regenerated": not cfg.band.calibrated}
        metrics["within_band"] = band.contains(p_err)
        metrics["silence_ok"] = branches[0]["p_err"] <= SILENCE_FAILURE_LIMIT
        checks += [metrics["within_band"], metrics["silence_ok"]]

    logger.info(
        f"P_err = {p_err:.4g} (T=0: {branches[0]['p_err']:.4g}, T=1: {branches[1]['p_err']:.4g})"
    )
    return _new_record(cfg, metrics, rows, passed=all(checks))


def calibrate_band(cfg: ExperimentConfig, pilots: int = 5) -> ToleranceBand:
    """
    Tolerance band [0, mean + 3 sd] of P_err over pilot seeds, floored at
    1/trials.
    """
    if cfg.kind is not ExperimentKind.RELIABILITY:
        raise ConfigurationError("calibrate_band needs a reliability config")
    values = []
    for k in range(pilots):
        seed = int(seed_sequence(cfg.master_seed, "pilot", k).generate_state(1)[0])
        pilot = cfg.model_copy(update={"master_seed": seed, "band": None})
        values.append(run_reliability(pilot).metrics["p_err"])
        logger.info(f"Pilot {k + 1}/{pilots}: P_err = {values[-1]:.4g}")
    mean = float(np.mean(values))
    sd = float(np.std(values, ddof=1)) if pilots > 1 else 0.0
    upper = min(1.0, max(mean + 3.0 * sd, 1.0 / cfg.trials))
    return ToleranceBand(lower=0.0, upper=upper, pilots=pilots, pilot_values=values, pilot_seed=cfg.master_seed)


# --------------------------------------------------------------------------- covertness

def run_covertness(cfg: ExperimentConfig) -> RunRecord:
    """Exact TV against its bound, the exact radiometer, the Monte Carlo suite and micro-scale checks."""
    params = _derive(cfg)
    opts = cfg.covertness
    n, q, rho = params.n, params.channel.q, params.rho
    channel = params.channel

    tv = tv_product_bernoulli(n, q, bin_conv(rho, q))
    bound = channel.eps_d + n ** (-channel.delta / 4.0)
    design = radiometer_design(n, q, rho)
    reports = [("exact", exact_report("radiometer", design.alpha, design.beta, tv))]

    spread = SpreadCodeLaw.from_params(params)
    concentrated = ConcentratedCodeLaw.from_params(params)
    tv_concentrated = tv_product_bernoulli(concentrated.support, q, bin_conv(concentrated.bias, q))
    short = opts.short_segment or concentrated.support
    detectors = [
        AlwaysAccuse(),
        NeverAccuse(),
        RadiometerDetector(design.threshold),
        ChunkWeightDetector.for_params(params, opts.alpha_chunk),
        ChunkWeightDetector(n, short, q, opts.alpha_chunk, name="chunk_weight_short"),
    ]
    sources = [(spread, tv), (concentrated, tv_concentrated)]
    if opts.include_code:
        sources.append((ConcatCodeSource(build_concat_code(params, cfg.master_seed)), None))

    try:
        for source, reference in sources:
            for detector in detectors:
                report = detect_experiment(detector, source, cfg.trials, cfg.master_seed, tv_reference=reference)
                reports.append((source.name, report))

        micro = None
        if opts.micro_B:
            rng = rng_for(cfg.master_seed, "micro_codebook")
            codewords = (rng.random((opts.micro_codewords, opts.micro_B)) < opts.micro_rho).astype(np.uint8)
            source = MicroCodebook(codewords, q)
            P0, P1 = source.p0(), source.p1()
            lrt = lrt_exact_micro(P0, P1)
            mc = detect_experiment(MicroLrtDetector(P0, P1), source, opts.micro_trials, cfg.master_seed, tv_reference=lrt.tv)
            reports.append(("micro_exact", exact_report("micro_lrt", lrt.alpha, lrt.beta, lrt.tv)))
            reports.append((source.name, mc))
            micro = {
                "B": opts.micro_B,
                "codewords": [format(int("".join(map(str, w)), 2), "x") for w in codewords],
                "tv": lrt.tv,
                "identity_gap": abs(lrt.alpha + lrt.beta - (1.0 - lrt.tv)),
                "mc_within_3sigma": abs(mc.sum - (lrt.alpha + lrt.beta)) <= mc.slack,
                "chain": covertness_chain_micro(codewords, opts.micro_rho, q),
            }
    except Exception as e:
        logger.error(f"Covertness run failed: {e}")
        raise

    rows = [{"source": name, **report.to_dict()} for name, report in reports]

    def best(source_name: str, prefix: str) -> Optional[DetectionReport]:
        matching = [r for name, r in reports if name == source_name and r.detector_name.startswith(prefix)]
        return min(matching, key=lambda r: r.sum) if matching else None

    caught = best(concentrated.name, "chunk_weight")
    hidden = best(spread.name, "chunk_weight")
    spread_floor = 1.0 - bound - hidden.slack
    metrics = {
        "n": n,
        "rho": rho,
        "tv": tv,
        "lemma_bound": bound,
        "lemma_holds": tv < bound,
        "radiometer": design._asdict(),
        "tv_concentrated": tv_concentrated,
        "spreading": {
            "concentrated_best_chunk_sum": caught.sum,
            "concentrated_limit": CONCENTRATED_CATCH_LIMIT,
            "concentrated_caught": caught.sum <= CONCENTRATED_CATCH_LIMIT,
            "spread_best_chunk_sum": hidden.sum,
            "spread_floor": spread_floor,
            "spread_hidden": hidden.sum >= spread_floor,
            "short_segment": short,
        },
        "micro": micro,
    }
    checks = {
        "lemma_holds": metrics["lemma_holds"],
        "respects_optimum": all(r.respects_optimum() for _, r in reports),
        "concentrated_caught": metrics["spreading"]["concentrated_caught"],
        "spread_hidden": metrics["spreading"]["spread_hidden"],
    }
    if micro is not None:
        checks.update({
            "micro_identity": micro["identity_gap"] <= 1e-12,
            "micro_mc_within_3sigma": micro["mc_within_3sigma"],
            "micro_chain": micro["chain"]["holds"],
        })
    metrics["failed_checks"] = [name for name, ok in checks.items() if not ok]
    for name in metrics["failed_checks"]:
        logger.warning(f"Covertness check failed: {name}")
    return _new_record(cfg, metrics, rows, passed=not metrics["failed_checks"])


# --------------------------------------------------------------------------- lemma1

def lemma1_row(q: float, eps_d: float, n: int, mode, delta: float, sharpness_min_n: int) -> Dict:
    """Exact TV of the ensemble-averaged law against its bound and the Pinsker estimate."""
    k2 = design_k2(q, eps_d, mode)
    rho = k2 / math.sqrt(n)
    s = bin_conv(rho, q)
    tv = tv_product_bernoulli(n, q, s)
    bound = eps_d + n ** (-delta / 4.0)
    divergence = n * float(rel_entr(q, s) + rel_entr(1.0 - q, 1.0 - s))
    mode_value = getattr(mode, "value", mode)
    row = {
        "q": q, "eps_d": eps_d, "n": n, "k2_mode": mode_value, "k2": k2, "rho": rho,
        "tv": tv, "bound": bound, "pinsker": math.sqrt(divergence / 2.0),
        "bound_ok": tv < bound,
    }
    if mode_value == "optimal" and n >= sharpness_min_n:
        row["sharp_ok"] = 0.95 * eps_d <= tv <= bound
    row["passed"] = row["bound_ok"] and row.get("sharp_ok", True)
    return row


def run_lemma1(cfg: ExperimentConfig) -> RunRecord:
    grid = cfg.grid
    delta = cfg.channel.delta if cfg.channel else settings.default_delta
    rows = [
        lemma1_row(q, eps, n, mode, delta, grid.sharpness_min_n)
        for mode in grid.modes
        for q in grid.q_values
        for eps in grid.eps_values
        for n in grid.n_values
    ]
    failed = [r for r in rows if not r["passed"]]
    for r in failed:
        logger.warning(f"Lemma-1 row failed: q={r['q']}, eps_d={r['eps_d']}, n={r['n']}, mode={r['k2_mode']}")
    metrics = {"rows": len(rows), "failed": len(failed), "max_tv": max(r["tv"] for r in rows)}
    return _new_record(cfg, metrics, rows, passed=not failed)


# --------------------------------------------------------------------------- contour

def exponent_profile(frame: pd.DataFrame) -> Dict:
    """Interior minimum with higher exponents at both ends of the p axis."""
    ok = frame[frame["status"] == "ok"].sort_values("p")
    if len(ok) < 3:
        return {"points": len(ok), "interior_minimum": False}
    exps = ok["exponent"].to_numpy()
    k = int(np.argmin(exps))
    return {
        "points": len(ok),
        "p_at_minimum": float(ok["p"].iloc[k]),
        "minimum": float(exps[k]),
        "left_end": float(exps[0]),
        "right_end": float(exps[-1]),
        "interior_minimum": bool(0 < k < len(exps) - 1 and exps[0] > exps[k] and exps[-1] > exps[k]),
    }


def run_contour(cfg: ExperimentConfig) -> RunRecord:
    grid = cfg.grid
    channel = cfg.channel or DEFAULT_CHANNEL
    frame = contour_grid(
        grid.p_range, grid.q_range, channel.eps_d, channel.delta,
        steps=(grid.p_steps, grid.q_steps), mode=cfg.mode, corner_rule=cfg.corner_rule,
    )
    metrics = {
        "cells": len(frame),
        "status_counts": frame["status"].value_counts().to_dict(),
    }
    passed = True
    if grid.profile_q is not None:
        profile_frame = contour_grid(
            grid.p_range, [grid.profile_q], channel.eps_d, channel.delta,
            steps=(grid.p_steps, None), mode=cfg.mode, corner_rule=cfg.corner_rule,
        )
        metrics["profile"] = {"q": grid.profile_q, **exponent_profile(profile_frame)}
        passed = metrics["profile"]["interior_minimum"]
    rows = frame.astype(object).where(frame.notna(), None).to_dict(orient="records")
    return _new_record(cfg, metrics, rows, passed=passed)


# --------------------------------------------------------------------------- verify

def _check(name: str, passed: bool, **values) -> Dict:
    return {"check": name, "passed": bool(passed), **values}


def _corner_checks(cfg) -> List[Dict]:
    eps_d = _channel(cfg).eps_d
    rows = []
    for q, rho, d10, d11 in CORNER_SAMPLE:
        report = verify_corner_points(q, rho, d10, d11, cfg.verify.corner_grid_steps, eps_d=eps_d, mode=cfg.mode)
        rows.append(_check("corner_points", report.at_corner, q=q, rho=rho, d10=d10, d11=d11,
                           max_value=report.max_value, argmax=list(report.argmax),
                           scaling_gap=report.scaling_gap))
    return rows


def _tail_checks(cfg) -> List[Dict]:
    L = 4
    params = derive_params(_channel(cfg), L, cfg.verify.tail_n // L, cfg.mode, cfg.corner_rule)
    rows = []
    for side in TailSide:
        report = verify_tail_bound(params, side)
        rows.append(_check("tail_bound", report.holds, **report.to_dict()))
    return rows


def _taylor_checks(cfg) -> List[Dict]:
    channel = _channel(cfg)
    k2 = design_k2(channel.q, channel.eps_d, cfg.mode)
    report = verify_taylor_identity(channel.p, rho_schedule(k2, cfg.verify.taylor_n_values))
    return [_check("taylor_identity", report.passed, **report.to_dict())]


def _rs_weight_check() -> Dict:
    code = rs_build(field_build(3), 7, 3)
    weights = np.count_nonzero(rs_enumerate_codewords(code), axis=1)
    counted = np.bincount(weights, minlength=code.L + 1)
    formula = [1] + [rs_weight_distribution(code.L, code.dmin, code.field.size, i) for i in range(1, code.L + 1)]
    observed_dmin = int(weights[weights > 0].min())
    return _check(
        "rs_weight_distribution",
        counted.tolist() == formula and observed_dmin == code.dmin,
        code="[7,3]/GF(8)", enumerated=counted.tolist(), formula=formula, dmin=observed_dmin,
    )


def _rs_preimage_check() -> Dict:
    code = rs_build(field_build(2), 3, 2)
    counts = [rs_preimage_count(code, [v], enumerate_preimages=True).count for v in range(code.field.size)]
    expected = code.field.size ** (code.l1 - code.l2)
    return _check("rs_preimage", all(c == expected for c in counts), counts=counts, expected=expected)


def _rs_radius_check(m: int, L: int, l1: int, trials: int, master_seed: int) -> Dict:
    code = rs_build(field_build(m), L, l1)
    rng = rng_for(master_seed, "rs_radius", m, L)
    failures = {"errors": 0, "erasures": 0}
    for _ in range(trials):
        msg = rng.integers(0, code.field.size, size=l1)
        word = rs_encode(code, msg)

        received = word.copy()
        e = int(rng.integers(0, code.l2 // 2 + 1))
        for pos in rng.choice(L, size=e, replace=False):
            received[pos] ^= int(rng.integers(1, code.field.size))
        try:
            if not np.array_equal(rs_decode(code, received), msg):
                failures["errors"] += 1
        except Exception:
            failures["errors"] += 1

        s = int(rng.integers(0, code.l2 + 1))
        erased = rng.choice(L, size=s, replace=False)
        received = word.copy()
        received[erased] = 0
        try:
            if not np.array_equal(rs_decode(code, received, erased), msg):
                failures["erasures"] += 1
        except Exception:
            failures["erasures"] += 1
    return _check(
        "rs_correction_radius", sum(failures.values()) == 0,
        code=f"[{L},{l1}]/GF({code.field.size})", trials=trials, failures=failures,
    )


def _rs_checks(cfg) -> List[Dict]:
    trials = cfg.verify.rs_trials
    return [
        _rs_weight_check(),
        _rs_preimage_check(),
        _rs_radius_check(3, 7, 3, trials, cfg.master_seed),
        _rs_radius_check(6, 63, 55, trials, cfg.master_seed),
    ]


VERIFY_SUITES: Dict[str, List[Callable]] = {
    "corners": [_corner_checks],
    "tails": [_tail_checks],
    "taylor": [_taylor_checks],
    "rs": [_rs_checks],
    "appendix": [_corner_checks, _tail_checks, _taylor_checks, _rs_checks],
}


def run_verify(cfg: ExperimentConfig) -> RunRecord:
    """One pass/fail row per oracle check; findings are data."""
    suite = cfg.verify.suite
    if suite not in VERIFY_SUITES:
        raise ConfigurationError(f"Unknown verify suite '{suite}'; choose from {sorted(VERIFY_SUITES)}")
    rows = []
    for group in VERIFY_SUITES[suite]:
        rows.extend(group(cfg))
    failed = [r["check"] for r in rows if not r["passed"]]
    for name in failed:
        logger.warning(f"Verification check failed: {name}")
    metrics = {"suite": suite, "checks": len(rows), "failed": failed}
    return _new_record(cfg, metrics, rows, passed=not failed)


# --------------------------------------------------------------------------- dispatch

RUNNERS: Dict[ExperimentKind, Callable[[ExperimentConfig], RunRecord]] = {
    ExperimentKind.DESIGN: run_design,
    ExperimentKind.RELIABILITY: run_reliability,
    ExperimentKind.COVERTNESS: run_covertness,
    ExperimentKind.LEMMA1: run_lemma1,
    ExperimentKind.CONTOUR: run_contour,
    ExperimentKind.VERIFY: run_verify,
}

TABLE_KINDS = {ExperimentKind.LEMMA1, ExperimentKind.CONTOUR}


def default_output_path(cfg: ExperimentConfig) -> Path:
    if cfg.kind is ExperimentKind.DESIGN:
        suffix = ".json"
    elif cfg.kind in TABLE_KINDS:
        suffix = ".csv"
    else:
        suffix = ".jsonl"
    return Path(settings.output_dir) / f"{cfg.kind.value}_{cfg.config_hash()[:12]}{suffix}"


def write_outputs(record: RunRecord, path: Path) -> Path:
    """JSON for design documents, CSV for tables, JSON-lines otherwise."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix == ".csv":
        pd.DataFrame(record.rows).to_csv(path, index=False)
    elif path.suffix == ".json":
        path.write_text(to_json(record.summary(), indent=2) + "\n", encoding="utf-8")
    else:
        with path.open("w", encoding="utf-8") as fh:
            for row in record.rows:
                fh.write(to_json(row) + "\n")
    record.output_path = str(path)
    return path


def record_run(record: RunRecord, elapsed_seconds: float = None):
    """Append one row to the run ledger."""
    try:
        db.create_tables()
        with db.session_scope() as session:
            session.add(RunRecordRow(
                config_hash=record.config_hash,
                kind=record.kind,
                master_seed=record.master_seed,
                mode=record.mode_flags["mode"],
                corner_rule=record.mode_flags["corner_rule"],
                off_paper=to_json(record.mode_flags["off_paper"]),
                build_id=record.build_id,
                metrics=to_json(record.metrics),
                output_path=record.output_path,
                passed=record.passed,
                execution_time_seconds=None if elapsed_seconds is None else int(round(elapsed_seconds)),
            ))
    except Exception as e:
        logger.error(f"Error recording run {record.config_hash[:12]}: {e}")
        raise


def run_experiment(cfg: ExperimentConfig, output_path=None, persist: bool = True) -> RunRecord:
    """
    Run one experiment end to end.

    Args:
        cfg: Validated experiment config
        output_path: Overrides cfg.output_path and the default location
        persist: Append the record to the run ledger

    Returns:
        RunRecord with output_path set
    """
    started = time.monotonic()
    logger.info(f"Starting {cfg.kind.value} run (config {cfg.config_hash()[:12]}, seed {cfg.master_seed})")
    record = RUNNERS[cfg.kind](cfg)
    path = output_path or cfg.output_path or default_output_path(cfg)
    write_outputs(record, path)
    elapsed = time.monotonic() - started
    if persist:
        record_run(record, elapsed)
    logger.info(f"Finished {cfg.kind.value} run in {elapsed:.1f}s: passed={record.passed}, output={record.output_path}")
    return record
