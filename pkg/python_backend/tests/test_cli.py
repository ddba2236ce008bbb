import csv
import io
import json
import math

import pytest

from app.cli import load_config, main
from app.config.env import config
from app.models.config import SweepConfig
from app.models.errors import ConfigError
from app.services import selftest
from app.services.sweep_runner import sweep_runner

SMALL_GRID = {"x_halfwidth": 1.0, "x_points": 5, "t_slices": 2, "cluster": False}


@pytest.fixture(autouse=True)
def _no_thread_override(monkeypatch):
    monkeypatch.delenv("SHOCKLENS_THREADS", raising=False)


def _write_json(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def _sweep_config(tmp_path, **extra):
    payload = {"datum": "gaussian-odd", "nus": [1e-2, 5e-3], "norms": ["linf"], "grid": SMALL_GRID}
    payload.update(extra)
    return _write_json(tmp_path / "sweep.json", payload)


def test_sweep_writes_tables(tmp_path):
    out = tmp_path / "run"
    assert main(["sweep", _sweep_config(tmp_path), "--out", str(out), "--threads", "1"]) == 0

    text = (out / "errors.csv").read_bytes().decode("utf-8")
    assert text.startswith("nu,alpha,u0_linf,app_linf\r\n")
    rows = list(csv.reader(io.StringIO(text)))[1:]
    assert [float(r[0]) for r in rows] == [1e-2, 5e-3]
    assert all(float(v) > 0.0 for r in rows for v in r[2:])

    report = json.loads((out / "rates.json").read_text())
    assert report == {"alpha_scan": {}, "log_corrected": {}, "rates": {}, "trends": {}}


def test_sweep_is_reproducible_across_thread_counts(tmp_path):
    cfg = _sweep_config(tmp_path)
    assert main(["sweep", cfg, "--out", str(tmp_path / "one"), "--threads", "1"]) == 0
    assert main(["sweep", cfg, "--out", str(tmp_path / "two"), "--threads", "2"]) == 0
    for name in ("errors.csv", "rates.json"):
        assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "two" / name).read_bytes()


@pytest.mark.parametrize(
    "payload",
    [
        {"nus": []},
        {"nus": [1e-2, -1e-3]},
        {"nus": [1e-2], "datum": "sawtooth"},
        {"nus": [1e-2], "norms": ["h1"]},
        {"nus": [1e-2], "unknown_key": 1},
    ],
)
def test_sweep_config_errors(tmp_path, payload):
    assert main(["sweep", _write_json(tmp_path / "bad.json", payload), "--out", str(tmp_path)]) == 2


def test_malformed_json_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"nus": [0.01,\n  ]', encoding="utf-8")
    with pytest.raises(ConfigError) as excinfo:
        load_config(path, SweepConfig)
    assert excinfo.value.context["line"] == 2
    assert main(["sweep", str(path)]) == 2


def test_datum_override(tmp_path):
    cfg = load_config(_sweep_config(tmp_path), SweepConfig, {"datum": "compact"})
    assert cfg.datum == "compact"
    cfg = load_config(_sweep_config(tmp_path), SweepConfig, {"datum": None})
    assert cfg.datum == "gaussian-odd"


def _errors_table(tmp_path):
    lines = ["nu,alpha,u0_linf"]
    for nu in (1e-2, 1e-3, 1e-4, 1e-5):
        lines.append(f"{nu!r},0.2,{2.0 * nu ** 0.25!r}")
    path = tmp_path / "errors.csv"
    path.write_text("\r\n".join(lines) + "\r\n", encoding="utf-8")
    return str(path)


def test_rates_refit_and_gates(tmp_path, capsys):
    errors = _errors_table(tmp_path)
    assert main(["rates", errors, "--gate", "rates.linf.exponent in [0.22, 0.28]"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["rates"]["linf"]["exponent"] == pytest.approx(0.25, rel=1e-12)

    assert main(["rates", errors, "--gate", "rates.linf.exponent >= 0.3"]) == 4
    assert main(["rates", errors, "--gate", "rates.l2.exponent > 0"]) == 2
    assert main(["rates", errors, "--gate", "rates.linf.exponent is big"]) == 2


def test_rates_writes_file(tmp_path):
    out = tmp_path / "rates.json"
    assert main(["rates", _errors_table(tmp_path), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["rates"]["linf"]["r_squared"] == pytest.approx(1.0)


def test_rates_rejects_bad_tables(tmp_path):
    path = tmp_path / "errors.csv"
    path.write_text("alpha,nu\r\n0.2,0.01\r\n", encoding="utf-8")
    assert main(["rates", str(path)]) == 2
    assert main(["rates", str(tmp_path / "missing.csv")]) == 2


def test_profiles_to_stdout(tmp_path, capsys):
    cfg = _write_json(
        tmp_path / "profiles.json",
        {"nu": 1e-3, "fields": ["U0", "theta"], "grid": {"t_values": [-0.5], "x_values": [0.0]}},
    )
    assert main(["profiles", cfg, "--threads", "1"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["t", "x", "field", "value"]
    values = {r[2]: float(r[3]) for r in rows[1:]}
    assert abs(values["U0"]) <= 1e-12
    assert values["theta"] == 0.0


def test_profiles_residual_rows(tmp_path):
    cfg = _write_json(
        tmp_path / "profiles.json",
        {"nu": 1e-2, "fields": ["E"], "grid": {"t_values": [-0.3], "x_values": [0.0]}},
    )
    out = tmp_path / "profiles.csv"
    assert main(["profiles", cfg, "--out", str(out)]) == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))[1:]
    assert [r[2] for r in rows] == ["E", "E_closed"]
    assert rows[1][3] == ""


def test_profiles_rejects_repeated_fields(tmp_path):
    cfg = _write_json(
        tmp_path / "profiles.json",
        {"fields": ["u0", "u0"], "grid": {"t_values": [-0.5]}},
    )
    assert main(["profiles", cfg]) == 2


def test_thread_override_from_environment(monkeypatch):
    monkeypatch.setenv("SHOCKLENS_THREADS", "3")
    assert config.resolve_threads(1) == 3
    monkeypatch.setenv("SHOCKLENS_THREADS", "many")
    assert config.resolve_threads(2) == 2


def test_quick_selftest(capsys):
    assert main(["selftest"]) == 0
    checks = json.loads(capsys.readouterr().out)
    assert all(c["passed"] for c in checks)
    assert {c["check"] for c in checks} >= {"quartic_gamma_identity", "tanh_limit_T25"}


def test_unexpected_error_exits_as_numerical_failure(tmp_path, monkeypatch):
    def crash(cfg, threads=1):
        raise ValueError("rtol too small")

    monkeypatch.setattr(sweep_runner, "run", crash)
    assert main(["sweep", _sweep_config(tmp_path), "--out", str(tmp_path)]) == 3


def test_selftest_reports_crashing_check(monkeypatch, capsys):
    def crash():
        raise ValueError("rtol too small")

    monkeypatch.setattr(selftest, "QUICK_CHECKS", [("crashing", crash, 1.0)])
    results = selftest.run_selftest()
    assert [r.name for r in results] == ["crashing"]
    assert not results[0].passed
    assert math.isnan(results[0].measured)
    assert main(["selftest"]) == 4
    assert json.loads(capsys.readouterr().out)[0]["passed"] is False


@pytest.mark.slow
def test_inviscid_rate_gate(tmp_path):
    cfg = _write_json(
        tmp_path / "rate.json",
        {"datum": "gaussian-odd", "nus": [1e-2, 3e-3, 1e-3, 3e-4, 1e-4], "targets": ["u0"], "norms": ["linf"]},
    )
    assert main(["sweep", cfg, "--out", str(tmp_path), "--gate", "rates.linf.exponent in [0.22, 0.28]"]) == 0
