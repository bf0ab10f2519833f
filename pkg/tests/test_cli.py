import io
import subprocess
import sys

import pytest

from conftest import GOLDEN
from lotsizer.cli import main
from lotsizer.formats import read_schedule


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_solve_bundled_wagner_whitin(tmp_path):
    target = tmp_path / "plan.csv"
    code, text = run("solve", "wagner_whitin.json", "--output", str(target))
    assert code == 0
    assert text.startswith("objective 864, status optimal\n")
    assert "total 864" in text
    sched, costs = read_schedule(target.read_text())
    assert costs["total"] == 864 and sched.shape == (12, 1)


def test_solve_writes_schedule_to_stdout():
    code, text = run("solve", "steady_state.json", "--formulation", "general")
    assert code == 0
    assert "period,product,produced" in text


def test_warm_start_from_schedule(tmp_path):
    code, _ = run("solve", "wagner_whitin.json", "--warm-start",
                  str(GOLDEN / "wagner_whitin.csv"), "--output", str(tmp_path / "x.csv"))
    assert code == 0
    bad = tmp_path / "bad.csv"
    bad.write_text("nonsense\n")
    assert run("solve", "wagner_whitin.json", "--warm-start", str(bad))[0] == 65


def test_solve_elsp_reports_daily_cost():
    code, text = run("solve", "bomberger.json", "--tau", "120")
    assert code == 0
    assert "daily cost 7.333333" in text


def test_time_limit_exit_code():
    code, text = run("solve", "bomberger.json", "--tau", "20", "--initial-inventory-days",
                     "10", "--time-limit", "0.001")
    assert code == 3
    assert "status time_limit" in text


def test_infeasible_exit_code(tmp_path):
    doc = tmp_path / "inf.json"
    doc.write_text('{"kind": "dls", "demand": [[20]], "holding_cost": ["1"], '
                   '"setup_cost": ["1"], "batch_size": [10], "quantity_mode": "single-batch"}')
    code, text = run("solve", str(doc))
    assert code == 2
    assert "status infeasible" in text


def test_check_figures():
    code, text = run("check", "bomberger.json", "--tau", "20")
    assert code == 2
    assert "max utilization 0.2615 (product 8)" in text
    assert "total required 21.3983 days" in text
    assert text.rstrip().endswith("required 21.4 days > 20: infeasible without initial inventory")
    code, text = run("check", "bomberger.json", "--tau", "40")
    assert code == 0 and "feasible" in text


def test_check_rejects_dls_instances():
    assert run("check", "wagner_whitin.json")[0] == 64


def test_oracle_output():
    code, text = run("oracle", "steady_state.json")
    assert code == 0
    lines = text.splitlines()
    assert lines[1] == "setups 6"
    assert lines[2] == "lots " + " ".join(f"t{t}:105" for t in range(1, 12, 2))


def test_export_formats_match_fixtures(tmp_path):
    for fmt in ("mps", "lp"):
        code, text = run("export", "wagner_whitin.json", "--format", fmt, "--formulation",
                         "dls1p")
        assert code == 0
        assert text == (GOLDEN / f"wagner_whitin.{fmt}").read_text()


def test_bench_wagner_table_and_csv(tmp_path):
    target = tmp_path / "bench.csv"
    code, text = run("bench", "--suite", "wagner", "--no-timing", "--output", str(target))
    assert code == 0
    assert "2 out of 2 instances solved to optimality" in text
    rows = target.read_text().splitlines()
    assert rows[0] == "instance,n,m,formulation,status,objective,bound,gap,nodes"
    assert len(rows) == 7


@pytest.mark.parametrize("argv, code", [
    (["solve"], 64),
    (["frobnicate"], 64),
    (["export", "wagner_whitin.json", "--format", "xls"], 64),
    (["solve", "wagner_whitin.json", "--time-limit", "-1"], 64),
    (["solve", "wagner_whitin.json", "--tau", "20"], 64),
    (["bench", "--suite", "synthetic", "--grid", "2by2"], 64),
    (["solve", "no_such_file.json"], 65),
])
def test_usage_and_input_errors(argv, code):
    assert run(*argv)[0] == code


def test_malformed_instance_exit_code(tmp_path):
    doc = tmp_path / "bad.json"
    doc.write_text('{"kind": "dls", "demand": [[1]], "holding_cost": ["-1"], "setup_cost": [1]}')
    assert run("solve", str(doc))[0] == 65


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "lotsizer", "oracle", "wagner_whitin.json"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.startswith("optimal cost 864")
