import csv
import json
import math

import pytest

from wavelab import cli


def run(tmp_path, *args, config=None):
    argv = list(args) + ["--out", str(tmp_path / "out")]
    if config is not None:
        path = tmp_path / "cfg.json"
        path.write_text(config if isinstance(config, str) else json.dumps(config, indent=1))
        argv += ["--config", str(path)]
    return cli.main(argv)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_analytic_shape(tmp_path):
    cfg = {"line": {"beta_target": 0.5}, "analytic": {"n_max": 40, "t": 0.0}}
    assert run(tmp_path, "analytic", config=cfg) == 0
    rows = read_csv(tmp_path / "out" / "analytic.csv")
    assert rows[0] == ["n", "delta", "y"]
    assert len(rows) == 41


def test_csv_line_endings(tmp_path):
    assert run(tmp_path, "analytic") == 0
    data = (tmp_path / "out" / "analytic.csv").read_bytes()
    assert b"\r" not in data and data.endswith(b"\n")


def test_csv_round_trip_is_bit_exact(tmp_path):
    from wavelab.analytic import forced_profile
    from wavelab.lattice import LineParams

    assert run(tmp_path, "analytic", "--beta-target", "0.37", "--alpha", "0.9") == 0
    rows = read_csv(tmp_path / "out" / "analytic.csv")[1:]
    params = cli.line_params(cli.load_config(None, {"beta_target": 0.37, "alpha": 0.9}))
    _, d, y = forced_profile(params, len(rows), 0.0)
    assert [float(r[1]) for r in rows] == list(d)
    assert [float(r[2]) for r in rows] == list(y)


@pytest.mark.parametrize("mode", ["analytic", "oracle", "orbit", "implicit"])
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_modes_are_deterministic(tmp_path, mode, fmt):
    outputs = []
    for rep in range(2):
        d = tmp_path / f"r{rep}"
        assert cli.main([mode, "--out", str(d), "--format", fmt, "--svg", "--beta-target", "0.5"]) == 0
        outputs.append({p.name: p.read_bytes() for p in d.iterdir()})
    assert outputs[0] == outputs[1]
    assert any(name.endswith(".svg") for name in outputs[0])


def test_json_output(tmp_path):
    assert run(tmp_path, "oracle", "--format", "json", "--beta-target", "1.25") == 0
    doc = json.loads((tmp_path / "out" / "oracle.json").read_text())
    assert doc["columns"][:3] == ["n", "delta_re", "delta_im"]
    assert len(doc["rows"]) == 100
    assert max(r[5] for r in doc["rows"]) < 1e-12


def test_simulate_mode(tmp_path):
    assert run(tmp_path, "simulate", "--beta-target", "0.5", "--periods", "120") == 0
    rows = read_csv(tmp_path / "out" / "simulate.csv")
    header, first = rows[0], dict(zip(rows[0], rows[1]))
    assert header[0] == "n" and len(rows) == 21
    assert float(first["amp_delta"]) == pytest.approx(float(first["analytic_amp_delta"]), rel=0.01)


def test_orbit_aperiodic_has_no_lag(tmp_path):
    assert run(tmp_path, "orbit", "--beta-target", "1.25") == 0
    rows = read_csv(tmp_path / "out" / "orbit.csv")
    assert all(r[-1] == "nan" for r in rows[1:])


def test_negative_mass_rejected(tmp_path, capsys):
    assert run(tmp_path, "analytic", config={"line": {"m": -1}}) == 1
    err = capsys.readouterr().err
    assert "cfg.json:" in err and "m must be > 0" in err


def test_unknown_key_is_line_anchored(tmp_path, capsys):
    text = '{\n  "line": {\n    "m": 1.0,\n    "mass": 2.0\n  }\n}\n'
    assert run(tmp_path, "analytic", config=text) == 1
    assert "cfg.json:4: unknown key line.mass" in capsys.readouterr().err


def test_unknown_section(tmp_path, capsys):
    assert run(tmp_path, "analytic", config='{\n "plot": {}\n}\n') == 1
    assert "cfg.json:2: unknown section" in capsys.readouterr().err


def test_malformed_json_is_line_anchored(tmp_path, capsys):
    assert run(tmp_path, "analytic", config='{\n "line": {\n  "m": 1,\n }\n}\n') == 1
    assert "cfg.json:4: invalid JSON" in capsys.readouterr().err


def test_wrong_type(tmp_path, capsys):
    assert run(tmp_path, "analytic", config='{"analytic": {"n_max": "ten"}}') == 1
    assert "analytic.n_max" in capsys.readouterr().err


def test_flag_overrides_file(tmp_path):
    cfg = {"line": {"beta_target": 0.9}, "analytic": {"n_max": 5}}
    assert run(tmp_path, "analytic", "--beta-target", "0.5", config=cfg) == 0
    rows = read_csv(tmp_path / "out" / "analytic.csv")
    # beta = 0.5 with unit m, s, F0 and alpha = pi/6: delta_1 = -cos(pi/6)/2
    assert float(rows[1][1]) == pytest.approx(-math.cos(math.pi / 6) / 2, abs=1e-15)
    assert len(rows) == 6


def test_flag_validation_names_flag(tmp_path, capsys):
    assert run(tmp_path, "simulate", "--dt", "5") == 1
    assert "--dt" in capsys.readouterr().err


def test_kernel_error_exit_code(tmp_path, capsys):
    cfg = {
        "line": {"omega": 2 * math.sin(math.pi / 8)},
        "oracle": {"N": 4, "termination": "free", "n_report": 4},
    }
    assert run(tmp_path, "oracle", config=cfg) == 2
    assert "wavelab.oracle: SingularSystemError" in capsys.readouterr().err


def test_verification_failure_exit_code(tmp_path, monkeypatch):
    from wavelab import verify

    monkeypatch.setattr(
        verify, "run_all", lambda: [verify.CheckResult("forced", 1.0, 0.5, False, "")]
    )
    assert run(tmp_path, "verify-all") == 3
    rows = read_csv(tmp_path / "out" / "verify-all.csv")
    assert rows[1][:4] == ["forced", "1", "0.5", "false"]
