"""Hot loops.

Every kernel exists as a plain Python/numpy function (suffix ``_py``) and as
the public name, which is the numba-compiled version unless acceleration is
off (see :mod:`tauca._accel`). Keeping both lets the benchmark time them side
by side in one process.
"""

import numpy as np

from ._accel import HAS_NUMBA, jit

__all__ = [
    "HAS_NUMBA",
    "system4_run",
    "poly_rhs",
    "rk4_poly",
    "euler_poly",
    "v_sum_of_products",
    "expected_layers",
    "lcg_stream",
]


# --------------------------------------------------------------------------
# tau-machine for du/dt = v^2 - u^2, dv/dt = u^2 - 2v at p = 3
# --------------------------------------------------------------------------

def system4_run_py(N, n_steps, u_init, v_init, digits, carries):
    """Digit recursion written out term by term.

    u = a0 - a1 t + a2 t^2 - a3 t^3 and v = b0 + b1 t - b2 t^2 + b3 t^3 with
    t = 1/N. The raw digits are the coefficients of u + t(v^2 - u^2) and
    v + t(u^2 - 2v) up to t^3, expressed in each sign pattern; with a0 = 1 and
    b0 = 0 they reduce to a1 + 1, a2 + 2a1, a3 - b1^2 + a1^2 + 2a2 for u and
    b1 + 1, b2 + 2a1 + 2b1, b3 + a1^2 + 2a2 + 2b2 for v.

    Fills ``digits[0..n]`` and ``carries[0..n-1]``; returns the index of the
    first step whose carry leaves digit 0, or -1.
    """
    for i in range(4):
        digits[0, 0, i] = u_init[i]
        digits[0, 1, i] = v_init[i]
    for n in range(n_steps):
        a0 = digits[n, 0, 0]
        a1 = digits[n, 0, 1]
        a2 = digits[n, 0, 2]
        a3 = digits[n, 0, 3]
        b0 = digits[n, 1, 0]
        b1 = digits[n, 1, 1]
        b2 = digits[n, 1, 2]
        b3 = digits[n, 1, 3]

        # u, signs + - + -
        s3 = a3 - b1 * b1 + 2 * b0 * b2 + a1 * a1 + 2 * a0 * a2
        d3 = s3 // N
        s2 = a2 + 2 * b0 * b1 + 2 * a0 * a1 - d3
        d2 = s2 // N
        s1 = a1 + a0 * a0 - b0 * b0 - d2
        d1 = s1 // N
        s0 = a0 - d1
        d0 = s0 // N
        digits[n + 1, 0, 3] = s3 - d3 * N
        digits[n + 1, 0, 2] = s2 - d2 * N
        digits[n + 1, 0, 1] = s1 - d1 * N
        digits[n + 1, 0, 0] = s0 - d0 * N
        carries[n, 0, 0] = d0
        carries[n, 0, 1] = d1
        carries[n, 0, 2] = d2
        carries[n, 0, 3] = d3

        # v, signs + + - +
        r3 = b3 + a1 * a1 + 2 * a0 * a2 + 2 * b2
        w3 = r3 // N
        r2 = b2 + 2 * a0 * a1 + 2 * b1 - w3
        w2 = r2 // N
        r1 = b1 + a0 * a0 - 2 * b0 - w2
        w1 = r1 // N
        r0 = b0 + w1
        w0 = r0 // N
        digits[n + 1, 1, 3] = r3 - w3 * N
        digits[n + 1, 1, 2] = r2 - w2 * N
        digits[n + 1, 1, 1] = r1 - w1 * N
        digits[n + 1, 1, 0] = r0 - w0 * N
        carries[n, 1, 0] = w0
        carries[n, 1, 1] = w1
        carries[n, 1, 2] = w2
        carries[n, 1, 3] = w3

        if d0 != 0 or w0 != 0:
            return n
    return -1


system4_run = jit(system4_run_py)


# --------------------------------------------------------------------------
# floating-point oracles for polynomial right-hand sides
# --------------------------------------------------------------------------
# A system is packed as parallel arrays: term j adds coefs[j] * prod(y**exps[j])
# to component comp[j].

def poly_rhs_py(y, coefs, exps, comp, out):
    for i in range(out.shape[0]):
        out[i] = 0.0
    for j in range(coefs.shape[0]):
        term = coefs[j]
        for k in range(y.shape[0]):
            e = exps[j, k]
            for _ in range(e):
                term *= y[k]
        out[comp[j]] += term


poly_rhs = jit(poly_rhs_py)


def _make_rk4(rhs):
    def rk4_poly(y0, h, n_steps, coefs, exps, comp, states):
        dim = y0.shape[0]
        k1 = np.empty(dim)
        k2 = np.empty(dim)
        k3 = np.empty(dim)
        k4 = np.empty(dim)
        tmp = np.empty(dim)
        for i in range(dim):
            states[0, i] = y0[i]
        for n in range(n_steps):
            y = states[n]
            rhs(y, coefs, exps, comp, k1)
            for i in range(dim):
                tmp[i] = y[i] + 0.5 * h * k1[i]
            rhs(tmp, coefs, exps, comp, k2)
            for i in range(dim):
                tmp[i] = y[i] + 0.5 * h * k2[i]
            rhs(tmp, coefs, exps, comp, k3)
            for i in range(dim):
                tmp[i] = y[i] + h * k3[i]
            rhs(tmp, coefs, exps, comp, k4)
            for i in range(dim):
                nxt = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
                if not np.isfinite(nxt):
                    return n + 1
                states[n + 1, i] = nxt
        return -1

    return rk4_poly


def _make_euler(rhs):
    def euler_poly(y0, tau, n_steps, coefs, exps, comp, states):
        dim = y0.shape[0]
        k = np.empty(dim)
        for i in range(dim):
            states[0, i] = y0[i]
        for n in range(n_steps):
            rhs(states[n], coefs, exps, comp, k)
            for i in range(dim):
                nxt = states[n, i] + tau * k[i]
                if not np.isfinite(nxt):
                    return n + 1
                states[n + 1, i] = nxt
        return -1

    return euler_poly


rk4_poly_py = _make_rk4(poly_rhs_py)
euler_poly_py = _make_euler(poly_rhs_py)
rk4_poly = jit(_make_rk4(poly_rhs))
euler_poly = jit(_make_euler(poly_rhs))


# --------------------------------------------------------------------------
# averaged solver
# --------------------------------------------------------------------------

def _v_sum_of_products_loop(a_max, N):
    # v_a = tau + tau * sum_{m=1}^{a-1} prod_{k=m+1}^{a-1} (1 - 2 tau / (1 - k tau)^2)
    tau = 1.0 / N
    f = np.empty(a_max + 1)
    for k in range(a_max + 1):
        f[k] = 1.0 - 2.0 * tau / (1.0 - k * tau) ** 2
    v = np.zeros(a_max + 1)
    for a in range(1, a_max + 1):
        total = 0.0
        prod = 1.0
        for m in range(a - 1, 0, -1):
            total += prod
            prod *= f[m]
        v[a] = tau + tau * total
    return v


def v_sum_of_products_py(a_max, N):
    """Vectorized fallback: each inner sum is a reversed cumulative product."""
    tau = 1.0 / N
    k = np.arange(a_max + 1, dtype=np.float64)
    f = 1.0 - 2.0 * tau / (1.0 - k * tau) ** 2
    v = np.zeros(a_max + 1)
    for a in range(1, a_max + 1):
        if a == 1:
            total = 0.0
        else:
            total = 1.0 + np.cumprod(f[a - 1:1:-1]).sum()
        v[a] = tau + tau * total
    return v


v_sum_of_products = jit(_v_sum_of_products_loop) if HAS_NUMBA else v_sum_of_products_py


def expected_layers_py(a_max, N, eps_stop, n_out, b_out):
    """Layer recursion with both expectations evaluated at the current (a, b_a).

    n_{a+1} = n_a + 1 / E_delta(a, b_a),  b_{a+1} = b_a + E_omega(a, b_a) / E_delta(a, b_a).
    Returns the first layer whose E_delta is <= eps_stop, or -1.
    """
    tau = 1.0 / N
    n_out[0] = 0.0
    b_out[0] = 0.0
    for a in range(a_max):
        u = 1.0 - a * tau
        bt = b_out[a] * tau
        e_delta = u * u - bt * bt
        if e_delta <= eps_stop:
            return a
        e_omega = u * u - 2.0 * bt
        n_out[a + 1] = n_out[a] + 1.0 / e_delta
        b_out[a + 1] = b_out[a] + e_omega / e_delta
    return -1


expected_layers = jit(expected_layers_py)


# --------------------------------------------------------------------------
# linear congruential generator
# --------------------------------------------------------------------------

def lcg_stream_py(b, c, P, seed, count, out):
    x = seed
    for m in range(count):
        x = (b * x + c) % P
        out[m] = x


lcg_stream = jit(lcg_stream_py)
