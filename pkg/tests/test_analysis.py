import numpy as np
import pytest

from tauca import analysis as an
from tauca import ca_solver as cs
from tauca.errors import DegenerateFitError, EmptyTraceError, GridError
from tauca.oracle import Trajectory, rk4_solve
from tauca.tau_arith import TauRadix
from tauca.tau_machine import paper_system, run

SYS = paper_system()


def test_fit_power_law_exact():
    xs = np.array([1.0, 2.0, 4.0, 8.0])
    k, c = an.fit_power_law(xs, 10 / xs)
    assert k == pytest.approx(-1.0, abs=1e-12)
    assert c == pytest.approx(10.0, rel=1e-12)
    k, c = an.fit_power_law(xs, 3 / xs**2)
    assert k == pytest.approx(-2.0, abs=1e-12)
    assert c == pytest.approx(3.0, rel=1e-12)


def test_fit_power_law_degenerate():
    with pytest.raises(DegenerateFitError):
        an.fit_power_law([1, 2], [1, 0.5])
    with pytest.raises(DegenerateFitError):
        an.fit_power_law([1, 2, 4], [1, 0.0, 0.25])


def test_error_report_skips_zeros():
    rep = an.error_report([1, 2, 4, 8], [0.0, 0.5, 0.25, 0.125])
    assert rep.zero_xs == (1.0,)
    assert rep.fitted_exponent == pytest.approx(-1.0)


def test_lln_errors_zero_when_expectation_matches():
    rec = np.array([1, 0, 1, 0, 1, 0], dtype=float)
    assert np.all(an.lln_errors(rec, rec) == 0)


def test_lln_errors_alternating_carries():
    rec = np.tile([1.0, 0.0], 500)
    e = an.lln_errors(rec, np.full(rec.size, 0.5))
    n = np.arange(1, rec.size + 1)
    assert np.all(e <= 1 / n + 1e-15)


def test_lln_error_on_machine_trace():
    trace = run(SYS, TauRadix(100, 3), 3000)
    rep = an.lln_error(trace)
    assert rep.meta["steps_used"] == 2327
    assert rep.xs[-1] == 2048
    n = np.arange(1, 2328)
    rec, exp = an.carry_sequences(trace)
    e = an.lln_errors(rec[:2327], exp[:2327])
    assert np.all(e <= 1 / n + rep.tau_constant / 100 + 1e-12)
    # measured: averaging error settles at O(tau) rather than 1/n
    assert rep.tau_constant == pytest.approx(0.947, abs=0.01)


def test_lln_error_empty_trace():
    with pytest.raises(EmptyTraceError):
        an.lln_error(run(SYS, TauRadix(100, 3), 0))
    with pytest.raises(ValueError):
        an.lln_error(run(SYS, TauRadix(100, 3), 10), N=50)


def test_carry_sequences_first_step():
    trace = run(SYS, TauRadix(100, 3), 4)
    rec, exp = an.carry_sequences(trace, "omega")
    assert rec.shape == exp.shape == (4,)
    assert exp[0] == 0.0  # E_omega(0, 0) = 1


def test_lcg_constant_stream():
    p = an.LcgParams(b=1, c=0, P=97, seed=13)
    assert an.lcg_stream(p, 5).tolist() == [13] * 5


def test_lcg_small_example():
    assert an.lcg_stream(an.LcgParams(5, 3, 16, 1), 4).tolist() == [8, 11, 10, 5]


def test_minstd():
    xs = an.lcg_stream(an.MINSTD, 100_000)
    assert xs[0] == 16807
    assert xs[1] == 282475249
    assert np.unique(xs).size == xs.size


def test_lcg_params_validation():
    with pytest.raises(ValueError):
        an.LcgParams(16807, 0, 1, 1)
    with pytest.raises(ValueError):
        an.LcgParams(16807, 0, 2**31 - 1, 2**31 - 1)


def test_moment_stats():
    assert an.moment_stats([0.0, 1.0]) == (0.5, 0.5)
    mean, var = an.moment_stats([2.0, 2.0, 2.0])
    assert (mean, var) == (2.0, 0.0)
    with pytest.raises(ValueError):
        an.moment_stats([1.0])


def test_curve_error():
    t = np.linspace(0, 1, 11)
    ref = Trajectory(t, np.column_stack([1 - t, t]), 0.1)
    curve = cs.CaCurve(10, "full", np.arange(11), t * 10, t, 1 - t, t.copy())
    assert an.curve_error(curve, ref, 1.0) == 0.0
    shifted = cs.CaCurve(10, "full", np.arange(11), t * 10, t, 1 - t + 3e-3, t + 4e-3)
    assert an.curve_error(shifted, ref, 0.5) == pytest.approx(5e-3, rel=1e-12)
    with pytest.raises(GridError):
        an.curve_error(curve, ref, 1.5)


def test_curve_error_decreases_like_one_over_n():
    ref = rk4_solve(SYS, 0.5)
    errs = [an.curve_error(cs.solve_to_time(0.5, N), ref, 0.5) for N in (100, 200, 400)]
    rep = an.error_report([100, 200, 400], errs)
    assert rep.fitted_exponent == pytest.approx(-1.0, abs=0.1)


def test_report_csv():
    rep = an.error_report([1, 2, 4], [1.0, 0.5, 0.25])
    lines = an.report_csv(rep, {"N": 100}).splitlines()
    assert lines[:4] == ["x,error", "1,1", "2,0.5", "4,0.25"]
    assert lines[4].startswith("# exponent=-1.0")
    assert lines[5] == "# N=100"
