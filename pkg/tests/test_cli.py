import subprocess
import sys

import pytest

from tauca.cli import compare, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ca_first_rows(capsys):
    code, out, _ = run_cli(capsys, "ca", "--N", "100", "--a-max", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "a,n_a,t,u,v,variant"
    assert lines[1] == "0,0,0,1,0,full"
    assert len(lines) == 1 + 4 + 1


def test_trace_zero_steps(capsys):
    code, out, _ = run_cli(capsys, "trace", "--steps", "0")
    assert code == 0
    assert out == "n,a1,a2,a3,b1,b2,b3,d2,d3,w2,w3\n0,0,0,0,0,0,0,,,,\n# N=100 p=3 steps=0\n"


def test_trace_p4_generic(capsys):
    code, out, _ = run_cli(capsys, "trace", "--N", "50", "--p", "4", "--steps", "3")
    assert code == 0
    assert out.splitlines()[0] == "n,a1,a2,a3,a4,b1,b2,b3,b4,d2,d3,d4,w2,w3,w4"


def test_oracle(capsys):
    code, out, _ = run_cli(capsys, "oracle", "--t-max", "0.1", "--h", "0.01", "--stride", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "t,u,v"
    assert lines[1] == "0,1,0"
    assert lines[-2].startswith("0.1")


def test_compare_order():
    report, footer = compare([100, 200, 400], 0.5)
    assert report.fitted_exponent == pytest.approx(-1.0, abs=0.1)
    assert footer["extrapolated_error"] < footer["best_single_error"]
    assert footer["observed_order_v"] == pytest.approx(1.0, abs=0.1)


def test_lln(capsys):
    code, out, _ = run_cli(capsys, "lln", "--steps", "3000")
    assert code == 0
    assert "# steps_used=2327" in out
    assert "# tau_constant=" in out


def test_rng_stats(capsys):
    code, out, _ = run_cli(capsys, "rng-stats", "--count", "10000")
    assert code == 0
    assert out.splitlines()[0] == "statistic,value,ideal"
    assert out.splitlines()[-1] == "# b=16807 c=0 P=2147483647 seed=1 count=10000"


@pytest.mark.parametrize(
    "argv",
    [
        ["ca", "--a-max", "100", "--N", "100"],
        ["ca", "--variant", "asymptotic", "--a-max", "50"],
        ["trace", "--N", "1"],
        ["trace", "--steps", "-3"],
        ["compare", "--N", "100,100,200"],
        ["compare", "--N", "100,200"],
        ["rng-stats", "--lcg-b", "5", "--lcg-p", "3"],
        ["oracle", "--h", "nan"],
        ["ca", "--out", "/nonexistent/dir/x.csv"],
        ["bogus"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_runtime_error_exit_code(capsys):
    # the averaged curve stops short of t_max at small N
    code, _, err = run_cli(capsys, "compare", "--N", "10,20,30", "--t-max", "50")
    assert code == 1
    assert err.startswith("tauca compare: error:")
    assert len(err.strip().splitlines()) == 1


@pytest.mark.parametrize("argv", [["trace", "--steps", "300"], ["ca", "--a-max", "60"]])
def test_repeat_runs_byte_identical(tmp_path, argv):
    blobs = []
    for i in range(2):
        path = tmp_path / f"out{i}.csv"
        subprocess.run([sys.executable, "-m", "tauca", *argv, "--out", str(path)], check=True)
        blobs.append(path.read_bytes())
    assert blobs[0] == blobs[1]
    assert blobs[0]
