import json
import os
import subprocess
import sys

CLI = [sys.executable, "-m", "orbitsieve.cli"]


def run_cli(*args, env=None):
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, timeout=300, env=env
    )


def test_enumerate_writes_ball(tmp_path):
    res = run_cli("enumerate", "--out-dir", str(tmp_path), "--T", "40")
    assert res.returncode == 0
    meta = json.loads((tmp_path / "ball.json").read_text())
    assert meta == {"T": 40.0, "count": 111, "label": "default"}
    lines = (tmp_path / "ball.csv").read_text().splitlines()
    assert lines[0] == "a,b,c,d,norm_sq,word"
    assert lines[1] == "1,0,0,1,2,"
    assert len(lines) == 112


def test_delta_fits_growth(tmp_path):
    res = run_cli(
        "delta", "--out-dir", str(tmp_path),
        "--t-start", "31.25", "--doublings", "3",
    )
    assert res.returncode == 0
    meta = json.loads((tmp_path / "growth.json").read_text())
    assert meta["counts"] == [81, 215, 517, 1393]
    assert meta["thresholds"] == [31.25, 62.5, 125.0, 250.0]
    assert abs(meta["delta_hat"] - 0.678910811993772) < 1e-9
    assert (tmp_path / "growth.png").stat().st_size > 1000


def test_strong_approx_scan(tmp_path):
    res = run_cli("strong-approx", "--out-dir", str(tmp_path), "--pmax", "13")
    assert res.returncode == 0
    meta = json.loads((tmp_path / "strong_approx.json").read_text())
    assert meta["bad_primes"] == [2, 11]
    by_prime = {row["prime"]: row for row in meta["rows"]}
    assert sorted(by_prime) == [3, 5, 7, 11, 13]
    assert not by_prime[11]["surjective"]
    assert by_prime[11]["order_reached"] == 110
    assert by_prime[13]["surjective"]


def test_local_verify_battery(tmp_path):
    res = run_cli("local-verify", "--out-dir", str(tmp_path), "--pmax", "13", "--seed", "1")
    assert res.returncode == 0
    meta = json.loads((tmp_path / "local_verify.json").read_text())
    lemmas = [row["lemma"] for row in meta["rows"]]
    assert lemmas == [
        "s1_vanishing",
        "s4_closed_form",
        "s5_bound",
        "s3_factorization",
        "rho1_identity",
        "dispersion_identity",
    ]
    assert all(row["pass"] for row in meta["rows"])


def test_sieve_run_report(tmp_path):
    res = run_cli(
        "sieve-run", "--out-dir", str(tmp_path),
        "--X", "100", "--Y1", "1.5", "--Y2", "1.5", "--Q", "30",
    )
    assert res.returncode == 0
    meta = json.loads((tmp_path / "sieve_summary.json").read_text())
    assert meta["mass"] == 407
    assert meta["q_max"] == 30
    assert abs(meta["E"] - 5443 / 315) < 1e-9
    assert abs(meta["alpha_hat"] - 0.31398950620245386) < 1e-9
    assert meta["alpha_hat_caveat"] == "desk-scale, not asymptotic"
    assert (tmp_path / "sieve_rows.csv").read_text().startswith("q,mass,main_term,remainder")
    assert (tmp_path / "remainders.png").stat().st_size > 1000


def test_almost_primes_classification(tmp_path):
    res = run_cli("almost-primes", "--out-dir", str(tmp_path), "--T", "60")
    assert res.returncode == 0
    meta = json.loads((tmp_path / "hypotenuses.json").read_text())
    assert meta["elements"] == 191
    assert meta["prime_hypotenuses"] == 70
    assert meta["r_almost_hypotenuses"] == 188
    assert len((tmp_path / "hypotenuses.csv").read_text().splitlines()) == 192
    assert (tmp_path / "triples.png").stat().st_size > 1000


def test_feasibility_report(tmp_path):
    res = run_cli(
        "feasibility", "--out-dir", str(tmp_path),
        "--delta", "0.999999999999999", "--theta", "0.8333333333333334", "--eps", "0.03",
    )
    assert res.returncode == 0
    meta = json.loads((tmp_path / "feasibility.json").read_text())
    assert meta["feasible"] is True
    assert meta["R"] == 4
    assert len(meta["checks"]) == 5


def test_feasibility_reports_failure_without_gap(tmp_path):
    res = run_cli(
        "feasibility", "--out-dir", str(tmp_path),
        "--delta", "0.9", "--theta", "0.9", "--eps", "0.03",
    )
    assert res.returncode == 0
    meta = json.loads((tmp_path / "feasibility.json").read_text())
    assert meta["feasible"] is False


def test_out_dir_env_var(tmp_path):
    env = dict(os.environ, ORBITSIEVE_OUT=str(tmp_path / "envout"))
    res = run_cli("enumerate", "--T", "10", env=env)
    assert res.returncode == 0
    assert (tmp_path / "envout" / "ball.json").exists()


def test_bad_threshold_exits_nonzero(tmp_path):
    res = run_cli("enumerate", "--out-dir", str(tmp_path), "--T", "1")
    assert res.returncode == 2
    assert "error:" in res.stderr


def test_unknown_command_exits_nonzero():
    res = run_cli("no-such-command")
    assert res.returncode == 2


def test_custom_group_file(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"label": "custom", "generators": [[2, 1, 3, 2]]}))
    res = run_cli("enumerate", "--out-dir", str(tmp_path), "--group", str(path), "--T", "20")
    assert res.returncode == 0
    meta = json.loads((tmp_path / "ball.json").read_text())
    assert meta["label"] == "custom"
    assert meta["count"] == 5  # powers of a single hyperbolic generator
