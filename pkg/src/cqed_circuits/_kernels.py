"""Compiled fixed-step integrators for the resonator-Bloch equations.

Parameter vector layout: ``[omega_r, omega_q, g, gamma, 1/T1, 1/T2,
linear, lambda3_0]`` where ``linear`` is 1.0 to pin the inversion.
"""

import math

import numpy as np
from numba import njit

RK4 = 0
GAUSS4 = 1

_SQ3 = math.sqrt(3.0)
_A11 = 0.25
_A12 = 0.25 - _SQ3 / 6.0
_A21 = 0.25 + _SQ3 / 6.0
_A22 = 0.25

_BLOWUP = 1e100
_MAX_ITER = 40


@njit(cache=True, nogil=True)
def rhs(y, p, out):
    w_r, w_q, g, gamma, r1, r2, linear, lam0 = p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7]
    l1, l2, l3, v, i = y[0], y[1], y[2], y[3], y[4]
    if linear != 0.0:
        l3 = lam0
    out[0] = -w_q * l2 - r2 * l1
    out[1] = w_q * l1 - g * l3 * v - r2 * l2
    if linear != 0.0:
        out[2] = 0.0
    else:
        out[2] = g * l2 * v - r1 * (l3 + 1.0)
    out[3] = w_r * i - gamma * v
    out[4] = -w_r * v - g * l1


@njit(cache=True, nogil=True)
def _rk4_step(y, p, dt, k1, k2, k3, k4, tmp):
    n = y.shape[0]
    rhs(y, p, k1)
    for j in range(n):
        tmp[j] = y[j] + 0.5 * dt * k1[j]
    rhs(tmp, p, k2)
    for j in range(n):
        tmp[j] = y[j] + 0.5 * dt * k2[j]
    rhs(tmp, p, k3)
    for j in range(n):
        tmp[j] = y[j] + dt * k3[j]
    rhs(tmp, p, k4)
    for j in range(n):
        y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])


@njit(cache=True, nogil=True)
def _gauss4_step(y, p, dt, k1, k2, n1, n2, y1, y2):
    # two-stage Gauss-Legendre collocation, stage equations by fixed point
    n = y.shape[0]
    rhs(y, p, k1)
    for j in range(n):
        k2[j] = k1[j]
    scale = 0.0
    for j in range(n):
        scale = max(scale, abs(y[j]))
    tol = 1e-16 * max(scale, 1e-300)
    for _ in range(_MAX_ITER):
        for j in range(n):
            y1[j] = y[j] + dt * (_A11 * k1[j] + _A12 * k2[j])
            y2[j] = y[j] + dt * (_A21 * k1[j] + _A22 * k2[j])
        rhs(y1, p, n1)
        rhs(y2, p, n2)
        change = 0.0
        for j in range(n):
            change = max(change, abs(n1[j] - k1[j]), abs(n2[j] - k2[j]))
            k1[j] = n1[j]
            k2[j] = n2[j]
        if change * dt <= tol:
            break
    for j in range(n):
        y[j] += 0.5 * dt * (k1[j] + k2[j])


@njit(cache=True, nogil=True)
def integrate_fixed(y0, p, dt, n_steps, decimation, method, out):
    """Advance ``y0`` by ``n_steps`` and record every ``decimation``-th state.

    Returns -1 on success or the index of the first step producing a
    non-finite (or runaway) state.
    """
    n = y0.shape[0]
    y = y0.copy()
    if p[6] != 0.0:
        y[2] = p[7]
    a = np.empty(n)
    b = np.empty(n)
    c = np.empty(n)
    d = np.empty(n)
    e = np.empty(n)
    f = np.empty(n)
    for j in range(n):
        out[0, j] = y[j]
    row = 1
    for step in range(1, n_steps + 1):
        if method == 0:
            _rk4_step(y, p, dt, a, b, c, d, e)
        else:
            _gauss4_step(y, p, dt, a, b, c, d, e, f)
        for j in range(n):
            if not (abs(y[j]) < _BLOWUP):
                return step
        if step % decimation == 0:
            for j in range(n):
                out[row, j] = y[j]
            row += 1
    return -1
