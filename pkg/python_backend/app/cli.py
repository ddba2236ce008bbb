"""
命令列入口
python -m app.cli {sweep,profiles,rates,selftest}
結束碼：0 成功、2 設定錯誤、3 數值錯誤、4 門檻未過
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Type, TypeVar

from pydantic import BaseModel, ValidationError

from .config.env import config
from .models.config import ProfilesConfig, SweepConfig
from .models.errors import ConfigError, GateFailure, NumericalError, ShockLensError
from .services.gates import evaluate_gate
from .services.selftest import run_selftest
from .services.sweep_runner import PROFILE_HEADER, SweepResult, sweep_runner
from .utils.csv_io import read_csv, render_csv, write_csv, write_json
from .utils.logger import configure_logging, get_logger

logger = get_logger()

M = TypeVar("M", bound=BaseModel)


def load_config(path: Path, model: Type[M], overrides: Optional[dict] = None) -> M:
    """讀取 JSON 設定；語法錯誤回報行列，欄位錯誤回報位置"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError("cannot read config", path=str(path), error=str(e))
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("config is not valid JSON", path=str(path), line=e.lineno, column=e.colno, error=e.msg)
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object", path=str(path))
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return model.model_validate(raw)
    except ValidationError as e:
        fields = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise ConfigError("config validation failed", path=str(path), fields=fields)


def _check_gates(payload: dict, gates: Sequence[str]) -> None:
    failed = []
    for expression in gates:
        result = evaluate_gate(payload, expression)
        logger.info("gate_evaluated", **result.to_dict())
        if not result.passed:
            failed.append(result)
    if failed:
        raise GateFailure(
            "acceptance gate failed",
            gates="; ".join(f"{r.expression} (measured {r.measured:.6g})" for r in failed),
        )


# -------- 子命令 --------
def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, SweepConfig, {"datum": args.datum})
    threads = config.resolve_threads(args.threads)
    result: SweepResult = sweep_runner.run(cfg, threads=threads)
    out_dir = Path(args.out) if args.out else config.SHOCKLENS_OUTPUT_DIR
    sweep_runner.write(result, out_dir)
    _check_gates(result.report.model_dump(), args.gate or [])
    return 0


def cmd_profiles(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, ProfilesConfig, {"datum": args.datum})
    threads = config.resolve_threads(args.threads)
    rows = sweep_runner.profiles(cfg, threads=threads)
    if args.out:
        write_csv(Path(args.out), PROFILE_HEADER, rows)
    else:
        sys.stdout.write(render_csv(PROFILE_HEADER, rows))
    return 0


def cmd_rates(args: argparse.Namespace) -> int:
    try:
        records = read_csv(Path(args.errors))
    except OSError as e:
        raise ConfigError("cannot read errors table", path=str(args.errors), error=str(e))
    if not records:
        raise ConfigError("errors table is empty", path=str(args.errors))
    header = list(records[0].keys())
    if header[:2] != ["nu", "alpha"]:
        raise ConfigError("errors table must start with nu,alpha columns", header=",".join(header))
    try:
        rows: List[List[float]] = [[float(r[h]) for h in header] for r in records]
    except ValueError as e:
        raise ConfigError("errors table holds a non-numeric value", error=str(e))

    alphas: List[float] = []
    for row in rows:
        if row[1] not in alphas:
            alphas.append(row[1])
    result = SweepResult(header=header, rows=rows)
    report = sweep_runner.fit(result, alphas)
    payload = report.model_dump()
    if args.out:
        write_json(Path(args.out), payload)
    else:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    _check_gates(payload, args.gate or [])
    return 0


def cmd_selftest(args: argparse.Namespace) -> int:
    results = run_selftest(full=args.full)
    sys.stdout.write(json.dumps([r.to_dict() for r in results], indent=2) + "\n")
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise GateFailure("selftest checks failed", checks=",".join(failed))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shocklens", description="Small-viscosity Burgers expansion toolkit")
    parser.add_argument("--log-level", default=None, help="override LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="error norms and convergence rates over a viscosity sweep")
    sweep.add_argument("config", help="sweep config JSON")
    sweep.add_argument("--out", default=None, help="output directory for errors.csv and rates.json")
    sweep.add_argument("--datum", default=None, help="built-in datum name, overrides the config")
    sweep.add_argument("--threads", type=int, default=None)
    sweep.add_argument("--gate", action="append", help="acceptance gate, e.g. 'rates.linf.exponent in [0.22, 0.28]'")
    sweep.set_defaults(handler=cmd_sweep)

    profiles = sub.add_parser("profiles", help="tabulate fields on a grid")
    profiles.add_argument("config", help="profiles config JSON")
    profiles.add_argument("--out", default=None, help="CSV path, stdout when omitted")
    profiles.add_argument("--datum", default=None)
    profiles.add_argument("--threads", type=int, default=None)
    profiles.set_defaults(handler=cmd_profiles)

    rates = sub.add_parser("rates", help="refit convergence rates from an errors.csv")
    rates.add_argument("errors", help="errors.csv written by sweep")
    rates.add_argument("--out", default=None, help="rates.json path, stdout when omitted")
    rates.add_argument("--gate", action="append")
    rates.set_defaults(handler=cmd_rates)

    selftest = sub.add_parser("selftest", help="run the invariant suite")
    selftest.add_argument("--full", action="store_true", help="include the finite-volume and rate checks")
    selftest.set_defaults(handler=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except ShockLensError as e:
        logger.error("command_failed", command=args.command, detail=e.to_detail())
        return e.exit_code
    except Exception as e:
        # 非預期的數值函式庫錯誤一律視為數值錯誤
        logger.error("command_crashed", command=args.command, error=str(e), error_type=type(e).__name__, exc_info=True)
        return NumericalError.exit_code


if __name__ == "__main__":
    sys.exit(main())
