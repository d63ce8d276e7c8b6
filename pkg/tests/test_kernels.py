import os
import subprocess
import sys

import numpy as np
import pytest

from tauca import kernels
from tauca._accel import HAS_NUMBA


def _packed():
    from tauca.tau_machine import paper_system

    return paper_system().packed()


@pytest.mark.parametrize("pair", [(kernels.rk4_poly, kernels.rk4_poly_py), (kernels.euler_poly, kernels.euler_poly_py)])
def test_integrators_match(pair):
    coefs, exps, comp = _packed()
    out = []
    for fn in pair:
        states = np.empty((501, 2))
        assert fn(np.array([1.0, 0.0]), 0.002, 500, coefs, exps, comp, states) == -1
        out.append(states)
    np.testing.assert_allclose(out[0], out[1], rtol=1e-13, atol=1e-15)


def test_v_sum_of_products_match():
    np.testing.assert_allclose(kernels.v_sum_of_products(150, 400), kernels.v_sum_of_products_py(150, 400), rtol=1e-12)


def test_expected_layers_match():
    res = []
    for fn in (kernels.expected_layers, kernels.expected_layers_py):
        n, b = np.zeros(100), np.zeros(100)
        res.append((fn(99, 100, 1e-6, n, b), n, b))
    assert res[0][0] == res[1][0]
    np.testing.assert_array_equal(res[0][1], res[1][1])
    np.testing.assert_array_equal(res[0][2], res[1][2])


def test_lcg_match():
    a, b = np.empty(1000, np.int64), np.empty(1000, np.int64)
    kernels.lcg_stream(16807, 0, 2**31 - 1, 1, 1000, a)
    kernels.lcg_stream_py(16807, 0, 2**31 - 1, 1, 1000, b)
    assert np.array_equal(a, b)


SCRIPT = """
import hashlib
import tauca
from tauca import ca_solver, tau_machine
from tauca.tau_arith import TauRadix
t = tau_machine.run(tau_machine.paper_system(), TauRadix(100, 3), 500)
c = ca_solver.solve(40, 100)
print(tauca.HAS_NUMBA, hashlib.sha256(t.digits.tobytes() + c.v.tobytes()).hexdigest())
"""


def _run_script(disable):
    env = dict(os.environ)
    env.pop("TAUCA_DISABLE_NUMBA", None)
    if disable:
        env["TAUCA_DISABLE_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True, check=True)
    return out.stdout.split()


def test_env_flag_selects_fallback():
    flag_off, digest_off = _run_script(disable=True)
    assert flag_off == "False"
    flag_on, digest_on = _run_script(disable=False)
    assert flag_on == str(HAS_NUMBA)
    assert digest_on == digest_off
