import json

import pytest

from rsskit.cli import main

PARAMS = {"rho": 0.3, "a_max": 2.0, "a_brake_min": 4.0, "a_brake_max": 8.0}


@pytest.fixture
def params_file(tmp_path):
    path = tmp_path / "params.json"
    path.write_text(json.dumps(PARAMS))
    return str(path)


def test_safe_distance_prints_value(params_file, capsys):
    rc = main(["safe-distance", "--params", params_file, "--v-r", "20", "--v-f", "20"])
    assert rc == 0
    assert "34.135" in capsys.readouterr().out


def test_params_via_env(params_file, capsys, monkeypatch):
    monkeypatch.setenv("RSSKIT_PARAMS", params_file)
    assert main(["safe-distance", "--v-r", "10", "--v-f", "0"]) == 0
    assert "17.135" in capsys.readouterr().out


def test_missing_params_is_usage_error(capsys, monkeypatch):
    monkeypatch.delenv("RSSKIT_PARAMS", raising=False)
    assert main(["safe-distance", "--v-r", "10", "--v-f", "0"]) == 2


def test_negative_velocity_is_usage_error(params_file):
    assert main(["safe-distance", "--params", params_file, "--v-r", "-1", "--v-f", "20"]) == 2


def test_bad_params_file_is_usage_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["safe-distance", "--params", str(path), "--v-r", "1", "--v-f", "1"]) == 2


def test_unknown_subcommand_exits_2(params_file):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_simulate_unsafe_start_exits_3(params_file, tmp_path):
    rc = main([
        "simulate", "--params", params_file,
        "--gap", "30", "--v-r", "20", "--v-f", "20",
        "--out", str(tmp_path / "t.csv"),
    ])
    assert rc == 3


def test_simulate_audit_round_trip(params_file, tmp_path, capsys):
    traj = tmp_path / "traj.csv"
    rc = main([
        "simulate", "--params", params_file,
        "--gap", "40", "--v-r", "20", "--v-f", "20",
        "--ac", "adversarial", "--pov", "worst",
        "--out", str(traj),
    ])
    assert rc == 0
    assert "collision: no" in capsys.readouterr().out

    report = tmp_path / "audit.json"
    metric = tmp_path / "metric.csv"
    rc = main([
        "audit", "--params", params_file, "--trajectory", str(traj),
        "--out", str(report), "--metric-csv", str(metric),
    ])
    assert rc == 0
    data = json.loads(report.read_text())
    assert data["outcome"]["compliant"] is True
    assert data["outcome"]["liability"] == "None"
    assert metric.read_text().startswith("t,margin")


def test_simulate_negative_control_then_audit_fails(params_file, tmp_path, capsys):
    traj = tmp_path / "traj.csv"
    rc = main([
        "simulate", "--params", params_file,
        "--gap", "40", "--v-r", "20", "--v-f", "20",
        "--ac", "adversarial", "--pov", "worst", "--no-supervisor",
        "--out", str(traj),
    ])
    assert rc == 0
    assert "collision: yes" in capsys.readouterr().out
    rc = main(["audit", "--params", params_file, "--trajectory", str(traj)])
    assert rc == 1
    out = capsys.readouterr().out
    assert "SvLiable" in out


def test_simulate_random_pov(params_file, tmp_path):
    rc = main([
        "simulate", "--params", params_file,
        "--gap", "60", "--v-r", "15", "--v-f", "15",
        "--pov", "random:3", "--out", str(tmp_path / "t.csv"),
    ])
    assert rc == 0


def test_verify_and_falsify_reports(params_file, tmp_path, capsys):
    campaign = tmp_path / "campaign.json"
    campaign.write_text(json.dumps({"seed": 5, "n_trials": 50}))

    out = tmp_path / "verify.json"
    rc = main(["verify", "--params", params_file, "--campaign", str(campaign),
               "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["outcome"]["n_counterexamples"] == 0
    assert "config_hash" in rep

    out = tmp_path / "falsify.json"
    rc = main(["falsify", "--params", params_file, "--campaign", str(campaign),
               "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["outcome"]["n_counterexamples"] == 0


def test_verify_supervised_kind(params_file, tmp_path):
    campaign = tmp_path / "campaign.json"
    campaign.write_text(json.dumps({"seed": 5, "n_trials": 10}))
    rc = main(["verify", "--params", params_file, "--campaign", str(campaign),
               "--kind", "supervised"])
    assert rc == 0


def test_verify_bad_campaign_is_usage_error(params_file, tmp_path):
    campaign = tmp_path / "campaign.json"
    campaign.write_text(json.dumps({"seed": 5, "bogus_key": 1}))
    assert main(["verify", "--params", params_file, "--campaign", str(campaign)]) == 2


def test_report_files_byte_identical_modulo_timestamp(params_file, tmp_path):
    campaign = tmp_path / "campaign.json"
    campaign.write_text(json.dumps({"seed": 5, "n_trials": 30}))
    bodies = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert main(["verify", "--params", params_file,
                     "--campaign", str(campaign), "--out", str(out)]) == 0
        rep = json.loads(out.read_text())
        rep.pop("generated_at")
        bodies.append(json.dumps(rep, sort_keys=True))
    assert bodies[0] == bodies[1]
