"""
Command-line interface.

Every subcommand requires --seed and accepts --out. Result documents go to
stdout as JSON; diagnostics go to stderr. Exit status: 0 when every
requested check passes, 1 when a check fails, 2 on invalid input or an
infeasible design.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from src.codec import bits_to_hex, build_concat_code, decode, encode, hex_to_bits, throughput_report
from src.design import derive_params
from src.exceptions import CovertLabError, InfeasibleDesignError
from src.harness import (
    ChannelConfig,
    ExperimentConfig,
    ExperimentKind,
    OverridesConfig,
    ScaleConfig,
    VERIFY_SUITES,
    calibrate_band,
    load_config,
    run_experiment,
    to_json,
)
from src.utils import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, required=True, help="Master seed of every random stream")
    parser.add_argument("--out", type=str, default=None, help="Result file path")
    parser.add_argument("--no-ledger", action="store_true", help="Do not append to the run ledger")


def _add_channel(parser: argparse.ArgumentParser, required: bool = True):
    parser.add_argument("--p", type=float, required=required, help="Bob crossover")
    parser.add_argument("--q", type=float, required=required, help="Willie crossover")
    parser.add_argument("--eps", type=float, required=required, help="Covertness budget eps_d")
    parser.add_argument("--delta", type=float, default=0.01, help="Slackness delta")
    parser.add_argument("--mode", choices=["paper", "optimal"], default="paper", help="k2 / r_u design mode")
    parser.add_argument(
        "--corner-rule", choices=["worst", "printed"], default="worst",
        help="Phi_1 corner aggregation: worst = min_j g_j over the four corners (default); "
             "printed = max_j g_j, the printed form of the design equation",
    )


def _add_code(parser: argparse.ArgumentParser, required: bool):
    parser.add_argument("--L", type=int, required=required, help="Number of chunks")
    parser.add_argument("--B", type=int, required=required, help="Chunk length in bits")
    parser.add_argument("--m", type=int, default=None, help="Field degree override")
    parser.add_argument("--l2", type=int, default=None, help="Parity symbols override")
    parser.add_argument("--rho", type=float, default=None, help="Codeword bias override")


def _add_config(parser: argparse.ArgumentParser, required: bool):
    parser.add_argument("--config", type=str, required=required, help="Experiment config (JSON)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="covert-lab", description="Covert concatenated-code laboratory")
    parser.add_argument("--log-level", type=str, default=None, help="Override COVERT_LAB_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="Solve k1 and derive code parameters")
    _add_channel(p)
    _add_code(p, required=False)
    _add_common(p)

    p = sub.add_parser("encode", help="Encode a hex message into a hex codeword")
    _add_channel(p)
    _add_code(p, required=True)
    p.add_argument("--message", type=str, default=None, help="Message as hex (l1*m bits)")
    p.add_argument("--t", type=int, choices=[0, 1], default=1, help="Transmission status")
    _add_common(p)

    p = sub.add_parser("decode", help="Decode a hex received word")
    _add_channel(p)
    _add_code(p, required=True)
    p.add_argument("--received", type=str, required=True, help="Received n bits as hex, or @file")
    _add_common(p)

    p = sub.add_parser("simulate", help="Reliability run from a config")
    _add_config(p, required=True)
    p.add_argument("--calibrate", action="store_true", help="Regenerate the tolerance band from pilot runs")
    p.add_argument("--pilots", type=int, default=5, help="Pilot runs for --calibrate")
    p.add_argument("--trials", type=int, default=None, help="Override the config's trial count")
    _add_common(p)

    p = sub.add_parser("detect", help="Covertness run from a config")
    _add_config(p, required=True)
    p.add_argument("--trials", type=int, default=None, help="Override the config's trial count")
    _add_common(p)

    p = sub.add_parser("lemma1", help="Exact TV sweep against its bound")
    _add_config(p, required=False)
    _add_common(p)

    p = sub.add_parser("contour", help="Decoding-complexity exponent over (p, q)")
    _add_config(p, required=False)
    p.add_argument("--eps", type=float, default=None, help="Covertness budget eps_d")
    p.add_argument("--p-range", type=float, nargs=2, default=None, metavar=("LO", "HI"))
    p.add_argument("--q-range", type=float, nargs=2, default=None, metavar=("LO", "HI"))
    p.add_argument("--steps", type=int, nargs=2, default=None, metavar=("NP", "NQ"))
    p.add_argument("--mode", choices=["paper", "optimal"], default=None)
    _add_common(p)

    p = sub.add_parser("verify", help="Run an oracle suite")
    p.add_argument("--suite", type=str, default="appendix", choices=sorted(VERIFY_SUITES))
    _add_config(p, required=False)
    _add_common(p)
    return parser


def _echo(args: argparse.Namespace) -> Dict:
    """Flags as given, for output headers."""
    return {k: v for k, v in sorted(vars(args).items()) if v is not None}


def _print(document: Dict):
    sys.stdout.write(to_json(document, indent=2) + "\n")


def _channel_config(args) -> ChannelConfig:
    return ChannelConfig(p=args.p, q=args.q, eps_d=args.eps, delta=args.delta)


def _overrides(args) -> OverridesConfig:
    return OverridesConfig(l2=args.l2, m=args.m, rho=args.rho)


def _with_seed(cfg: ExperimentConfig, args, **updates) -> ExperimentConfig:
    """Re-validate cfg with the CLI seed (and other updates) applied."""
    data = cfg.model_dump(mode="json")
    if data["master_seed"] != args.seed:
        logger.info(f"Using --seed {args.seed} in place of config seed {data['master_seed']}")
    data.update(master_seed=args.seed, **{k: v for k, v in updates.items() if v is not None})
    if args.out:
        data["output_path"] = args.out
    return ExperimentConfig.model_validate(data)


def _finish(args, record) -> int:
    _print({"flags": _echo(args), **record.summary()})
    status = "PASS" if record.passed else "FAIL"
    print(f"[{status}] {record.kind} {record.config_hash[:12]} -> {record.output_path}", file=sys.stderr)
    return EXIT_OK if record.passed else EXIT_FAILED


def cmd_design(args) -> int:
    cfg = ExperimentConfig(
        kind=ExperimentKind.DESIGN,
        channel=_channel_config(args),
        scale=ScaleConfig(L=args.L, B=args.B),
        master_seed=args.seed,
        mode=args.mode,
        corner_rule=args.corner_rule,
        overrides=_overrides(args),
        output_path=args.out,
    )
    return _finish(args, run_experiment(cfg, persist=not args.no_ledger))


def _build_code(args):
    channel = _channel_config(args).to_model()
    params = derive_params(channel, args.L, args.B, args.mode, args.corner_rule, _overrides(args).to_overrides())
    return build_concat_code(params, args.seed)


def _read_hex(value: str) -> str:
    if value.startswith("@"):
        return Path(value[1:]).read_text(encoding="utf-8").strip()
    return value.strip()


def cmd_encode(args) -> int:
    code = _build_code(args)
    params = code.params
    message = hex_to_bits(args.message, params.message_bits) if args.message else None
    x = encode(code, message, args.t)
    document = {
        "flags": _echo(args),
        "n": params.n,
        "message_bits": params.message_bits,
        "codeword_weight": int(np.count_nonzero(x)),
        "codeword_hex": bits_to_hex(x),
    }
    _write_document(args.out, document)
    _print(document)
    return EXIT_OK


def cmd_decode(args) -> int:
    code = _build_code(args)
    params = code.params
    y = hex_to_bits(_read_hex(args.received), params.n)
    result = decode(code, y)
    document = {
        "flags": _echo(args),
        "t_hat": result.t_hat,
        "message_hex": None if result.message is None else bits_to_hex(result.message),
        "rs_status": result.rs_status.value,
        "chunk_outcomes": result.outcome_string(params.m),
        "throughput": throughput_report(code).__dict__,
    }
    _write_document(args.out, document)
    _print(document)
    return EXIT_OK


def _write_document(out: Optional[str], document: Dict):
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(to_json(document, indent=2) + "\n", encoding="utf-8")


def cmd_simulate(args) -> int:
    cfg = _with_seed(load_config(args.config), args, trials=args.trials)
    if cfg.kind is not ExperimentKind.RELIABILITY:
        raise CovertLabError(f"simulate needs a reliability config, got kind '{cfg.kind.value}'")
    if args.calibrate:
        band = calibrate_band(cfg, pilots=args.pilots)
        calibrated = cfg.model_copy(update={"band": band})
        document = {"flags": _echo(args), "band": band.model_dump(mode="json")}
        if args.out:
            Path(args.out).write_text(calibrated.model_dump_json(indent=2, exclude_none=True) + "\n", encoding="utf-8")
        _print(document)
        return EXIT_OK
    return _finish(args, run_experiment(cfg, persist=not args.no_ledger))


def cmd_detect(args) -> int:
    cfg = _with_seed(load_config(args.config), args, trials=args.trials)
    if cfg.kind is not ExperimentKind.COVERTNESS:
        raise CovertLabError(f"detect needs a covertness config, got kind '{cfg.kind.value}'")
    return _finish(args, run_experiment(cfg, persist=not args.no_ledger))


def _config_or_default(args, kind: ExperimentKind) -> ExperimentConfig:
    if args.config:
        cfg = load_config(args.config)
        if cfg.kind is not kind:
            raise CovertLabError(f"{kind.value} needs a {kind.value} config, got kind '{cfg.kind.value}'")
        return cfg
    return ExperimentConfig(kind=kind, master_seed=args.seed)


def cmd_lemma1(args) -> int:
    cfg = _with_seed(_config_or_default(args, ExperimentKind.LEMMA1), args)
    return _finish(args, run_experiment(cfg, persist=not args.no_ledger))


def cmd_contour(args) -> int:
    cfg = _config_or_default(args, ExperimentKind.CONTOUR)
    grid = cfg.grid.model_dump(mode="json")
    if args.p_range:
        grid["p_range"] = args.p_range
    if args.q_range:
        grid["q_range"] = args.q_range
    if args.steps:
        grid["p_steps"], grid["q_steps"] = args.steps
    updates = {"grid": grid, "mode": args.mode}
    if args.eps is not None:
        channel = (cfg.channel or ChannelConfig(p=0.05, q=0.25, eps_d=0.1)).model_dump()
        updates["channel"] = {**channel, "eps_d": args.eps}
    cfg = _with_seed(cfg, args, **updates)
    return _finish(args, run_experiment(cfg, persist=not args.no_ledger))


def cmd_verify(args) -> int:
    cfg = _config_or_default(args, ExperimentKind.VERIFY)
    verify = {**cfg.verify.model_dump(mode="json"), "suite": args.suite}
    cfg = _with_seed(cfg, args, verify=verify)
    return _finish(args, run_experiment(cfg, persist=not args.no_ledger))


COMMANDS = {
    "design": cmd_design,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "simulate": cmd_simulate,
    "detect": cmd_detect,
    "lemma1": cmd_lemma1,
    "contour": cmd_contour,
    "verify": cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, dispatch, and map failures to exit codes."""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(level=args.log_level)
    try:
        return COMMANDS[args.command](args)
    except ValidationError as e:
        for err in e.errors():
            location = ".".join(str(part) for part in err["loc"]) or "<root>"
            print(f"error: {location}: {err['msg']}", file=sys.stderr)
        return EXIT_INVALID
    except InfeasibleDesignError as e:
        print(f"error: infeasible design ({e.constraint}): {e}", file=sys.stderr)
        return EXIT_INVALID
    except (CovertLabError, FileNotFoundError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
