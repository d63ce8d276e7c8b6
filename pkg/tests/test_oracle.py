import numpy as np
import pytest

from tauca.errors import GridError, NonFiniteError
from tauca.oracle import euler_float, rk4_solve, sample, trajectory_csv
from tauca.tau_arith import SignPattern
from tauca.tau_machine import PolySystem, paper_system

SYS = paper_system()


def test_zero_horizon():
    traj = rk4_solve(SYS, 0.0, 1e-3)
    assert len(traj) == 1
    assert traj.states[0].tolist() == [1.0, 0.0]


def test_small_time_taylor():
    # u'' = 2 and v'' = -4 at t = 0, so u = 1 - t + t^2, v = t - 2 t^2 + O(t^3)
    traj = rk4_solve(SYS, 1e-3, 1e-5)
    u, v = traj.states[-1]
    assert u == pytest.approx(1 - 1e-3 + 1e-6, abs=1e-8)
    assert v == pytest.approx(1e-3 - 2e-6, abs=1e-8)


def test_last_node_is_t_end():
    traj = rk4_solve(SYS, 0.3, 0.07)
    assert traj.times[-1] == 0.3
    assert len(traj) == 6
    assert np.all(np.diff(traj.times) > 0)


def test_linear_system_matches_exponential():
    sys = PolySystem(1, ({(1,): -1},), (1.0,), (SignPattern((1, 1, 1, 1)),))
    traj = rk4_solve(sys, 1.0, 1e-3)
    np.testing.assert_allclose(traj.states[:, 0], np.exp(-traj.times), rtol=1e-12)


def test_rk4_self_convergence_order_four():
    hs = np.array([0.1, 0.05, 0.025, 0.0125])
    errs = []
    for h in hs:
        coarse = rk4_solve(SYS, 1.0, h).states[-1]
        fine = rk4_solve(SYS, 1.0, h / 10).states[-1]
        errs.append(np.max(np.abs(coarse - fine)))
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert slope == pytest.approx(4.0, abs=0.2)


def test_euler_one_step():
    traj = euler_float(SYS, 1, 0.01)
    assert traj.states[1].tolist() == pytest.approx([0.99, 0.01], abs=1e-16)


def test_euler_first_order():
    ref = rk4_solve(SYS, 1.0, 1e-5).states[-1]
    taus = np.array([1e-2, 1e-3, 1e-4])
    errs = [np.max(np.abs(euler_float(SYS, round(1 / t), t).states[-1] - ref)) for t in taus]
    slope = np.polyfit(np.log(taus), np.log(errs), 1)[0]
    assert slope == pytest.approx(1.0, abs=0.2)


def test_sample_nodes_and_midpoints():
    traj = rk4_solve(SYS, 0.5, 0.1)
    np.testing.assert_array_equal(sample(traj, traj.times), traj.states)
    mid = sample(traj, 0.25)
    assert mid.shape == (2,)
    np.testing.assert_allclose(mid, 0.5 * (traj.states[2] + traj.states[3]), rtol=1e-14)


def test_sample_outside_range():
    traj = rk4_solve(SYS, 0.5, 0.1)
    with pytest.raises(GridError):
        sample(traj, 0.6)
    with pytest.raises(GridError):
        sample(traj, [-0.1, 0.2])


def test_blow_up_raises():
    # y' = y^2 from y = 1 blows up at t = 1
    sys = PolySystem(1, ({(2,): 1},), (1.0,), (SignPattern((1, 1, 1, 1)),))
    with pytest.raises(NonFiniteError):
        rk4_solve(sys, 5.0, 0.01)


def test_bad_arguments():
    with pytest.raises(ValueError):
        rk4_solve(SYS, 1.0, 0.0)
    with pytest.raises(ValueError):
        rk4_solve(SYS, -1.0, 0.1)
    with pytest.raises(ValueError):
        euler_float(SYS, -1, 0.1)


def test_trajectory_csv():
    traj = rk4_solve(SYS, 0.5, 0.1)
    lines = trajectory_csv(traj, stride=2).splitlines()
    assert lines[0] == "t,u,v"
    assert lines[1] == "0,1,0"
    assert len(lines) == 1 + 4 + 1  # nodes 0, 2, 4 and the last one
    assert lines[-2].startswith("0.5,")
    assert lines[-1].startswith("# h=")
