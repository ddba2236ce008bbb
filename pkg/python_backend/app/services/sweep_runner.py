"""
掃描執行器
對每個 ν（與 α）取樣 u^ν、u⁰、u^app，計算誤差範數、擬合收斂率並輸出 errors.csv / rates.json
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..models.config import ApproxConfig, ProfilesConfig, SweepConfig
from ..models.errors import ConfigError
from ..models.field import FieldSample, RateReport
from ..utils.csv_io import write_csv, write_json
from ..utils.logger import get_logger
from ..utils.pool import ordered_map
from .approx import cutoff_theta, residual_E, residual_E_closed_form, u_app
from .data import InitialDatum, load_datum, load_tabulated
from .inner import U0
from .inviscid import entropy_solution
from .metrics import (
    fit_log_corrected,
    fit_rate,
    grid_norm,
    holder_seminorm,
    inner_times,
    spatial_grid,
    time_ladder,
    value_trend,
)
from .outer import u10_closed_form, u1_exact
from .viscous import reference_colehopf

logger = get_logger()

PROFILE_HEADER = ("t", "x", "field", "value")
MIN_RATE_POINTS = 3


@dataclass
class SweepResult:
    """一次掃描的表格與擬合結果"""

    header: List[str]
    rows: List[List[float]]
    report: RateReport = field(default_factory=RateReport)
    datum: Dict[str, object] = field(default_factory=dict)

    def column(self, name: str, alpha: Optional[float] = None) -> List[Tuple[float, float]]:
        i = self.header.index(name)
        return [(row[0], row[i]) for row in self.rows if alpha is None or row[1] == alpha]


def resolve_datum(datum: str, datum_table: Optional[str]) -> InitialDatum:
    if datum_table:
        path = Path(datum_table)
        if not path.exists():
            raise ConfigError("datum table not found", path=str(path))
        return load_tabulated(path)
    return load_datum(datum)


# -------- 工作函式（模組層級，供行程池 pickle） --------
def viscous_slice(d: InitialDatum, nu: float, xs: np.ndarray, tol: float, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """單一時間切片的 u^ν 與 u⁰"""
    u_nu = np.asarray(reference_colehopf(d, nu, float(t), xs, tol), dtype=float)
    u0 = np.asarray(entropy_solution(d, float(t), xs), dtype=float)
    return u_nu, u0


def app_slice(acfg: ApproxConfig, d: InitialDatum, xs: np.ndarray, t: float) -> np.ndarray:
    return np.asarray(u_app(acfg, d, float(t), xs), dtype=float)


def profile_rows(cfg: ProfilesConfig, d: InitialDatum, xs: np.ndarray, t: float) -> List[List[object]]:
    """單一時間切片上所有要求欄位的長表列"""
    t = float(t)
    acfg = cfg.approx_config()
    params = d.profile_params()
    tol = cfg.tolerances.quad_tol
    rows: List[List[object]] = []
    for name in cfg.fields:
        if name == "u0":
            values = entropy_solution(d, t, xs)
        elif name == "u_nu":
            values = reference_colehopf(d, cfg.nu, t, xs, tol)
        elif name == "u_app":
            values = u_app(acfg, d, t, xs)
        elif name == "U0":
            values = U0(params, np.full(xs.shape, t), xs, tol)
        elif name == "theta":
            values = cutoff_theta(acfg, params, t, xs)
        elif name == "u1":
            values = u1_exact(d, t, xs)
        elif name == "u10":
            values = u10_closed_form(params, t, xs)
        else:
            # E 與其封閉形式成對輸出，M 區的封閉形式留空
            for x in xs:
                rows.append([t, float(x), "E", residual_E(acfg, d, t, float(x))])
                rows.append([t, float(x), "E_closed", residual_E_closed_form(acfg, d, t, float(x))])
            continue
        for x, v in zip(xs, np.atleast_1d(values)):
            rows.append([t, float(x), name, float(v)])
    return rows


class SweepRunner:
    """誤差掃描主類"""

    def __init__(self):
        self.logger = logger

    # -------- 取樣 --------
    def sample_times(self, d: InitialDatum, cfg: SweepConfig, nu: float) -> np.ndarray:
        extra = inner_times(nu, cfg.grid.inner_times)
        return np.array(time_ladder(d.t0, cfg.tolerances.eps_t, cfg.grid.t_slices, extra))

    def sample_viscous(
        self, d: InitialDatum, cfg: SweepConfig, nu: float, workers: int
    ) -> Tuple[np.ndarray, np.ndarray, FieldSample, FieldSample]:
        times = self.sample_times(d, cfg, nu)
        xs = spatial_grid(nu, cfg.grid.x_halfwidth, cfg.grid.x_points, cfg.grid.cluster, cfg.grid.cluster_per_octave)
        task = partial(viscous_slice, d, nu, xs, cfg.tolerances.quad_tol)
        slices = ordered_map(task, [float(t) for t in times], workers)
        u_nu = FieldSample("u_nu", times, xs, np.vstack([s[0] for s in slices]), nu=nu)
        u0 = FieldSample("u0", times, xs, np.vstack([s[1] for s in slices]), nu=nu)
        return times, xs, u_nu, u0

    def sample_app(self, d: InitialDatum, acfg: ApproxConfig, times: np.ndarray, xs: np.ndarray, workers: int) -> FieldSample:
        rows = ordered_map(partial(app_slice, acfg, d, xs), [float(t) for t in times], workers)
        return FieldSample("u_app", times, xs, np.vstack(rows), nu=acfg.nu, K=acfg.K)

    def measure(self, f: FieldSample, norms: Sequence[str], gamma: float) -> Dict[str, float]:
        out: Dict[str, float] = {}
        for norm in norms:
            if norm == "holder":
                out[norm] = holder_seminorm(f, gamma)
            else:
                out[norm] = grid_norm(f, norm)
        return out

    # -------- 掃描 --------
    def run(self, cfg: SweepConfig, threads: int = 1) -> SweepResult:
        d = resolve_datum(cfg.datum, cfg.datum_table)
        alphas = cfg.alpha_values()
        header = ["nu", "alpha"] + [f"{target}_{norm}" for target in cfg.targets for norm in cfg.norms]
        rows: List[List[float]] = []

        self.logger.info("sweep_start", datum=d.name, nus=len(cfg.nus), alphas=len(alphas), workers=threads)
        for nu in cfg.nus:
            times, xs, u_nu, u0 = self.sample_viscous(d, cfg, nu, threads)
            # 與 α 無關的量每個 ν 只算一次
            base: Dict[str, float] = {}
            if "u0" in cfg.targets:
                base.update({f"u0_{k}": v for k, v in self.measure(u_nu - u0, cfg.norms, cfg.holder_gamma).items()})
            if "u_nu" in cfg.targets:
                base.update({f"u_nu_{k}": v for k, v in self.measure(u_nu, cfg.norms, cfg.holder_gamma).items()})
            for alpha in alphas:
                measured = dict(base)
                if "app" in cfg.targets:
                    app = self.sample_app(d, cfg.approx_config(nu, alpha), times, xs, threads)
                    measured.update({f"app_{k}": v for k, v in self.measure(u_nu - app, cfg.norms, cfg.holder_gamma).items()})
                rows.append([float(nu), float(alpha)] + [measured[name] for name in header[2:]])
            self.logger.info("sweep_nu_done", datum=d.name, nu=nu, slices=int(times.size), points=int(xs.size))

        result = SweepResult(header=header, rows=rows, datum=d.summary())
        result.report = self.fit(result, alphas)
        self.logger.info("sweep_done", datum=d.name, rows=len(rows))
        return result

    def fit(self, result: SweepResult, alphas: Sequence[float]) -> RateReport:
        report = RateReport()
        nus = {row[0] for row in result.rows}
        if len(nus) < MIN_RATE_POINTS:
            self.logger.warning("rates_skipped", reason="fewer than three viscosities", nus=len(nus))
            return report

        primary = alphas[0]
        for name in result.header[2:]:
            target, norm = name.rsplit("_", 1)
            table = result.column(name, primary)
            key = norm if target == "u0" else name
            report.rates[key] = fit_rate(table)
            report.trends[name] = value_trend(table)
            if target != "u_nu" and norm == "l1" and all(nu < 1.0 for nu, _ in table):
                report.log_corrected[name] = fit_log_corrected(table)
            if target == "app" and len(alphas) > 1:
                for alpha in alphas:
                    report.alpha_scan.setdefault(format(alpha, ".17g"), {})[norm] = fit_rate(result.column(name, alpha))
        return report

    def write(self, result: SweepResult, out_dir: Path) -> Tuple[Path, Path]:
        out_dir = Path(out_dir)
        errors = write_csv(out_dir / "errors.csv", result.header, result.rows)
        rates = write_json(out_dir / "rates.json", result.report.model_dump())
        self.logger.info("sweep_written", errors=str(errors), rates=str(rates))
        return errors, rates

    # -------- 剖面 --------
    def profiles(self, cfg: ProfilesConfig, threads: int = 1) -> List[List[object]]:
        d = resolve_datum(cfg.datum, cfg.datum_table)
        xs = np.asarray(cfg.grid.xs(), dtype=float)
        chunks = ordered_map(partial(profile_rows, cfg, d, xs), [float(t) for t in cfg.grid.t_values], threads)
        rows = [row for chunk in chunks for row in chunk]
        self.logger.info("profiles_done", datum=d.name, rows=len(rows), fields=list(cfg.fields))
        return rows


# 創建全域實例
sweep_runner = SweepRunner()
