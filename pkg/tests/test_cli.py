import csv
import json
import math
import subprocess
import sys

import pytest

from etoc import cli
from etoc.output import HEADER_COSTATE, HEADER_FIXEDV, SUMMARY_KEYS


def run(*argv):
    return cli.main([str(a) for a in argv])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_plan_appendix(tmp_path):
    assert run("plan", "--mu", 0.5, "--r", 1, "--alpha-deg", 30, "--formulation", "form1",
               "--out", tmp_path) == 0
    doc = json.loads((tmp_path / "summary.json").read_text())
    assert tuple(doc) == SUMMARY_KEYS
    assert tuple(doc["target"]) == ("r", "alpha_rad")
    assert doc["params"]["q"] == pytest.approx(1.21, abs=0.01)
    assert doc["tf"] == pytest.approx(0.94, abs=0.01)
    assert doc["cost"] == pytest.approx(doc["tf"], abs=1e-6)  # 2 T_f (1 - mu) at mu = 1/2
    assert doc["verification"]["passed"] is True
    rows = read_csv(tmp_path / "trajectory.csv")
    assert tuple(rows[0]) == HEADER_COSTATE
    assert len(rows) == 202
    assert (tmp_path / "trajectory.svg").stat().st_size > 0


def test_plan_straight_line_fixedv(tmp_path):
    assert run("plan", "--r", 1, "--alpha-deg", 0, "--formulation", "fixedv",
               "--out", tmp_path) == 0
    doc = json.loads((tmp_path / "summary.json").read_text())
    assert doc["tf"] == pytest.approx(0.70711, abs=1e-5)
    # infinite limits are stored as null
    assert doc["params"]["eta"] is None
    rows = read_csv(tmp_path / "trajectory.csv")
    assert tuple(rows[0]) == HEADER_FIXEDV
    assert {r[4] for r in rows[1:]} == {"1.4142135623730951"}


def test_seventeen_significant_digits(tmp_path):
    run("plan", "--r", 1, "--alpha-deg", 30, "--samples", 5, "--out", tmp_path,
        "--figures", "none")
    rows = read_csv(tmp_path / "trajectory.csv")
    assert rows[2][0] == "0.25"
    assert rows[2][1] == format(float(rows[2][1]), ".17g")


def test_stdout_mode_prints_only_data(capsys):
    assert run("plan", "--r", 1, "--alpha-deg", 45, "--samples", 3, "--format", "stdout") == 0
    out, err = capsys.readouterr()
    lines = out.strip().splitlines()
    assert lines[0] == ",".join(HEADER_COSTATE) and len(lines) == 4
    assert "verification passed" in err


def test_json_trajectory(tmp_path):
    assert run("plan", "--r", 1, "--alpha-deg", 30, "--format", "json", "--samples", 4,
               "--out", tmp_path, "--figures", "none") == 0
    doc = json.loads((tmp_path / "trajectory.json").read_text())
    assert doc["columns"] == list(HEADER_COSTATE)
    assert len(doc["data"]["tau"]) == 4


@pytest.mark.parametrize("argv", [
    ("plan", "--mu", 1.0, "--r", 1, "--alpha-deg", 0),
    ("plan", "--r", 1),
    ("plan", "--x", 1, "--r", 1, "--alpha-deg", 3),
    ("plan", "--x", 1),
    ("plan", "--r", 1, "--alpha-deg", 30, "--guess", "1.2"),
    ("plan", "--r", 1, "--alpha-deg", 30, "--guess", "a,b"),
    ("plan", "--r", 1, "--alpha-deg", 30, "--formulation", "form9"),
    ("plan", "--r", 1, "--alpha-deg", 30, "--samples", 1),
    ("plan", "--r", 1, "--alpha-deg", 30, "--bogus"),
    ("plan", "--x", 0, "--y", 0),
    ("frobnicate",),
])
def test_usage_errors_exit_1(argv, capsys):
    assert run(*argv) == 1
    assert "usage error" in capsys.readouterr().err


def test_nonconvergence_exits_2(tmp_path):
    # r = 5 at 2 degrees needs Q beyond the solver box on both branches
    assert run("plan", "--r", 5, "--alpha-deg", 2, "--out", tmp_path) == 2
    assert not (tmp_path / "summary.json").exists()


def test_higher_branch_warning(tmp_path, capsys):
    assert run("plan", "--r", 5, "--alpha-deg", 10, "--out", tmp_path, "--figures", "none") == 0
    assert "higher-branch" in capsys.readouterr().err


def test_run_config_rejects_unknown_keys():
    with pytest.raises(cli.UsageError, match="unknown"):
        cli.RunConfig.from_mapping({"command": "plan", "colour": "red"})


def test_verify_fresh_and_cross(capsys):
    assert run("verify", "--r", 1, "--alpha-deg", 30) == 0
    assert json.loads(capsys.readouterr().out)["passed"] is True
    assert run("verify", "--r", 1, "--alpha-deg", 60, "--cross") == 0
    doc = json.loads(capsys.readouterr().out)
    names = [c["name"] for c in doc["cross"]["checks"]]
    assert "tf_agreement" in names and doc["cross"]["passed"]


def test_verify_solution_round_trip_and_corruption(tmp_path, capsys):
    run("plan", "--r", 1, "--alpha-deg", 30, "--out", tmp_path, "--figures", "none")
    path = tmp_path / "summary.json"
    assert run("verify", "--solution", path, "--out", tmp_path) == 0
    assert json.loads((tmp_path / "verification.json").read_text())["passed"]
    capsys.readouterr()
    doc = json.loads(path.read_text())
    doc["params"]["tf"] += 1e-3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert run("verify", "--solution", bad) == 3
    out, err = capsys.readouterr()
    failed = [c["name"] for c in json.loads(out)["checks"] if not c["passed"]]
    assert "terminal_position" in failed and "terminal_position" in err


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(extra=1),
    lambda d: d["params"].update(colour=1),
    lambda d: d["params"].pop("q"),
    lambda d: d.update(formulation="form7"),
])
def test_malformed_solution_files(tmp_path, mutate):
    run("plan", "--r", 1, "--alpha-deg", 30, "--out", tmp_path, "--figures", "none")
    doc = json.loads((tmp_path / "summary.json").read_text())
    mutate(doc)
    path = tmp_path / "m.json"
    path.write_text(json.dumps(doc))
    assert run("verify", "--solution", path) == 1


def test_sweep_eighteen_steps(tmp_path):
    assert run("sweep", "--mu", 0.5, "--alpha-start", 5, "--alpha-end", 90,
               "--alpha-steps", 18, "--out", tmp_path) == 0
    rows = read_csv(tmp_path / "sweep.csv")
    head, body = rows[0], rows[1:]
    assert len(body) == 18 and all(r[head.index("converged")] == "1" for r in body)
    v1 = [float(r[head.index("v_final")]) for r in body]
    assert max(v1) - min(v1) < 1e-12 and v1[0] == pytest.approx(math.sqrt(2), abs=1e-12)
    assert all(abs(float(r[head.index("omega_final")])) < 1e-12 for r in body)
    tc = [float(r[head.index("transition_condition")]) for r in body]
    assert sum((a < 0) != (b < 0) for a, b in zip(tc, tc[1:])) == 1
    for r in body:
        assert tuple(read_csv(tmp_path / r[head.index("file")])[0]) == HEADER_COSTATE
    doc = json.loads((tmp_path / "sweep.json").read_text())
    assert doc["transition_sign_changes"] == 1
    for name in ("sweep_paths.svg", "control_cylinder.svg", "sweep_summary.svg"):
        assert (tmp_path / name).exists()


def test_sweep_parallel_matches_sequential(tmp_path, monkeypatch):
    args = ["sweep", "--alpha-steps", 4, "--formulation", "form2", "--figures", "none"]
    assert run(*args, "--out", tmp_path / "a") == 0
    monkeypatch.setenv("ETOC_NUM_THREADS", "2")
    assert run(*args, "--out", tmp_path / "b") == 0
    for name in ("sweep.csv", "sweep.json", "trajectory_003.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_sweep_failure_is_recorded(tmp_path):
    assert run("sweep", "--r", 5, "--alpha-start", 2, "--alpha-end", 10,
               "--alpha-steps", 2, "--out", tmp_path, "--figures", "none") == 2
    rows = read_csv(tmp_path / "sweep.csv")
    assert [r[2] for r in rows[1:]] == ["0", "1"]


@pytest.mark.parametrize("value", ["x", "-1"])
def test_bad_thread_setting(monkeypatch, value):
    monkeypatch.setenv("ETOC_NUM_THREADS", value)
    assert run("sweep", "--alpha-steps", 2, "--figures", "none") == 1


def test_bench_is_deterministic(tmp_path):
    args = ["bench", "--nlp-starts", 20, "--shooting-starts", 6, "--shooting-steps", 2000]
    assert run(*args, "--out", tmp_path / "a") == 0
    assert run(*args, "--out", tmp_path / "b") == 0
    for name in ("bench_grid.csv", "bench_random.csv", "bench_grid.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    doc = json.loads((tmp_path / "a" / "bench.json").read_text())
    assert doc["grid"]["converged"] == 25
    assert doc["grid"]["root_min"] == pytest.approx([1.21, 0.94], abs=0.01)
    assert doc["grid"]["root_max"] == pytest.approx([1.21, 0.94], abs=0.01)
    assert "wall_time" not in (tmp_path / "a" / "bench_random.csv").read_text()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "etoc", "plan", "--mu", "2"],
                         capture_output=True, text=True)
    assert out.returncode == 1 and "usage error" in out.stderr
