import json
import subprocess
import sys

import pytest

from towertalk.cli import main
from towertalk.config import config_from_dict, default_config, load_config
from towertalk.errors import ConfigParseError, ConfigValidationError, EmptyInputError
from towertalk.results import OutputRow, read_results, write_results


def rows_sample():
    return [
        OutputRow("sim-abstraction", "beta_u=1", 1, "program_length", 6.0, 300, 0.0),
        OutputRow("sim-abstraction", "beta_u=1", 4, "program_length", 2.586667, 300, 1.244),
    ]


def test_csv_round_trip(tmp_path):
    path = tmp_path / "out.csv"
    write_results(rows_sample(), str(path), "csv")
    text = path.read_text()
    lines = text.splitlines()
    assert lines[0] == "experiment,condition,repetition,metric,value,n,sd"
    assert "\r" not in text
    assert lines[1].endswith(",6.000000,300,0.000000")
    back = read_results(str(path))
    for a, b in zip(back, rows_sample()):
        assert (a.experiment, a.condition, a.repetition, a.metric, a.n) == (
            b.experiment, b.condition, b.repetition, b.metric, b.n)
        assert a.value == pytest.approx(b.value, abs=1e-6)
        assert a.sd == pytest.approx(b.sd, abs=1e-6)


def test_json_round_trip(tmp_path):
    path = tmp_path / "out.json"
    write_results(rows_sample(), str(path), "json")
    payload = json.loads(path.read_text())
    assert payload[0]["metric"] == "program_length"
    back = read_results(str(path))
    assert back[1].value == pytest.approx(2.586667, abs=1e-6)


def test_write_empty_rows_rejected(tmp_path):
    with pytest.raises(EmptyInputError):
        write_results([], str(tmp_path / "x.csv"), "csv")


def test_single_row_gives_two_line_csv(tmp_path):
    path = tmp_path / "one.csv"
    write_results([OutputRow("fit", "r1", 0, "best_loss", 3.0, 10)], str(path), "csv")
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert lines[1] == "fit,r1,0,best_loss,3.000000,10,0.000000"


def test_default_configs_validate():
    for experiment in ("sim-abstraction", "sim-modality", "fit"):
        cfg = default_config(experiment)
        assert cfg.experiment == experiment
    sim1 = default_config("sim-abstraction")
    assert [c.theta.beta_u for c in sim1.abstraction_conditions] == [0.1, 0.5, 1.0]
    assert sim1.abstraction_conditions[0].theta.beta_i == 0.3
    assert sim1.n_runs == 100
    sim2 = default_config("sim-modality")
    assert sim2.n_runs == 200
    assert {c.label for c in sim2.modality_conditions} == {"prefer_u", "prefer_h"}


def test_config_bound_violation():
    raw = {
        "experiment": "sim-abstraction",
        "conditions": [{"label": "x", "theta": {"beta_i": 0.3, "beta_u": 50}}],
    }
    with pytest.raises(ConfigValidationError) as err:
        config_from_dict(raw)
    assert "beta_u" in str(err.value) and "40" in str(err.value)


def test_config_parse_error_has_location(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"experiment": "fit",}')
    with pytest.raises(ConfigParseError) as err:
        load_config(str(path))
    assert ":1:" in str(err.value)


def test_fit_target_renormalized_with_warning(tmp_path, caplog):
    raw = {
        "experiment": "fit",
        "targets": [{"label": "r1", "observed": [0.81, 0.12, 0.06]}],
    }
    with caplog.at_level("WARNING"):
        cfg = config_from_dict(raw)
    assert "renormalizing" in caplog.text
    observed = cfg.fit_targets[0].target.observed
    assert observed.p_r == pytest.approx(0.8182, abs=1e-4)
    assert observed.p_u == pytest.approx(0.1212, abs=1e-4)
    assert observed.p_c == pytest.approx(0.0606, abs=1e-4)


def test_fix_x_from_must_reference_earlier_label():
    raw = {
        "experiment": "fit",
        "targets": [{"label": "a", "observed": [0.4, 0.4, 0.2], "fix_x_from": "missing"}],
    }
    with pytest.raises(ConfigValidationError):
        config_from_dict(raw)


def sim1_args(tmp_path, name, extra=()):
    out = tmp_path / name
    return ["sim-abstraction", "--runs", "6", "--seed", "11", "--beta-u", "1.0",
            "--out", str(out), *extra], out


def test_cli_sim_abstraction_runs_and_is_deterministic(tmp_path, capsys):
    args1, out1 = sim1_args(tmp_path, "a.csv")
    args2, out2 = sim1_args(tmp_path, "b.csv")
    assert main(args1) == 0
    assert main(args2) == 0
    assert out1.read_bytes() == out2.read_bytes()
    rows = read_results(str(out1))
    assert len(rows) == 4  # one condition x four repetitions
    assert {r.condition for r in rows} == {"beta_u=1"}
    assert capsys.readouterr().out.count("wrote") == 2


def test_cli_default_sweep_row_shape(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sim-abstraction", "--runs", "4", "--seed", "0", "--out", str(out)]) == 0
    rows = read_results(str(out))
    assert len(rows) == 3 * 4  # three cost conditions x four repetitions
    assert {r.condition for r in rows} == {"beta_u=0.1", "beta_u=0.5", "beta_u=1"}
    assert all(r.metric == "program_length" for r in rows)


def test_cli_validation_failure_exit_code(tmp_path, capsys):
    code = main(["sim-abstraction", "--beta-u", "99", "--out", str(tmp_path / "x.csv")])
    assert code == 1
    assert "beta-u" in capsys.readouterr().err


def test_cli_config_experiment_mismatch(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"experiment": "fit"}))
    assert main(["sim-modality", "--config", str(path)]) == 1


def test_cli_fit_with_config(tmp_path):
    cfg = {
        "experiment": "fit",
        "seed": 3,
        "n_init": 10,
        "n_iter": 30,
        "output_path": str(tmp_path / "fit.json"),
        "format": "json",
        "targets": [{"label": "r1", "observed": [0.5, 0.3, 0.2]}],
    }
    path = tmp_path / "fit.json.cfg"
    path.write_text(json.dumps(cfg))
    assert main(["fit", "--config", str(path)]) == 0
    rows = read_results(str(tmp_path / "fit.json"))
    metrics = {r.metric for r in rows}
    assert {"best_beta_u", "best_beta_h", "best_x_u", "best_x_h", "best_loss"} <= metrics


def test_cli_module_invocation(tmp_path):
    out = tmp_path / "m.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "towertalk", "sim-modality", "--runs", "5",
         "--seed", "2", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    rows = read_results(str(out))
    assert {r.metric for r in rows} == {"p_redundant", "p_language_only", "p_complementary"}
    assert len(rows) == 2 * 4 * 3
