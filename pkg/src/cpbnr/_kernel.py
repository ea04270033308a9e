"""Compiled fixed-step RK4 loops for the ladder equations of motion.

Two variants share one entry point:

* lab frame: classical RK4 applied to the amplitude equations as written;
* interaction frame (Lawson RK4): the diagonal part of the generator
  (free phases and losses) is integrated exactly and RK4 only sees the
  pair coupling, which oscillates at the detuning rather than at
  ``n * omega0``.

Both record lab-frame amplitudes every ``record_every`` steps.
"""

import math

import numpy as np
from numba import njit

from .model import KIND_CONSTANT, KIND_SINUSOID


@njit(cache=True, nogil=True)
def _f(kind, a, b, t):
    if kind == KIND_CONSTANT:
        return a
    if kind == KIND_SINUSOID:
        return a * math.sin(b * t)
    return 0.0


@njit(cache=True, nogil=True)
def _f_int(kind, a, b, t):
    if kind == KIND_CONSTANT:
        return a * t
    if kind == KIND_SINUSOID:
        s = math.sin(0.5 * b * t)
        return 2.0 * a * s * s / b
    return 0.0


@njit(cache=True, nogil=True)
def _lam(lambda0, omega0, kind, a, b, t):
    f = _f(kind, a, b, t)
    if f == 0.0:
        return lambda0
    return lambda0 * math.sqrt(1.0 + f / omega0)


@njit(cache=True, nogil=True)
def _to_lab(be, bg, out_e, out_g, t, omega0, omega_c, gamma, delta, kind, a, b):
    w = omega0 * t + _f_int(kind, a, b, t)
    half = 0.5 * omega_c * t
    for n in range(be.size):
        ph_e = n * w + half
        ph_g = (n + 1) * w - half
        amp_e = math.exp(-gamma * t - n * delta * t)
        amp_g = math.exp(-(n + 1) * delta * t)
        out_e[n] = be[n] * amp_e * complex(math.cos(ph_e), -math.sin(ph_e))
        out_g[n] = bg[n] * amp_g * complex(math.cos(ph_g), -math.sin(ph_g))


@njit(cache=True, nogil=True)
def _coupling_factors(t, omega0, omega_c, lambda0, gamma, delta, kind, a, b):
    # returns (u_e, u_g) with dB_e/dt = u_e (n+1) B_g and dB_g/dt = u_g (n+1) B_e
    lam = _lam(lambda0, omega0, kind, a, b, t)
    theta = (omega0 - omega_c) * t + _f_int(kind, a, b, t)
    rho = (gamma - delta) * t
    g = math.exp(rho)
    c = math.cos(theta)
    s = math.sin(theta)
    p = complex(g * c, -g * s)
    q = complex(c / g, s / g)
    return -1j * lam * p, -1j * lam * q


@njit(cache=True, nogil=True)
def _is_finite(x):
    for v in x:
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            return False
    return True


@njit(cache=True, nogil=True)
def _lab_rhs(t, ce, cg, de, dg, omega0, omega_c, lambda0, gamma, delta, kind, a, b):
    w = omega0 + _f(kind, a, b, t)
    lam = _lam(lambda0, omega0, kind, a, b, t)
    for n in range(ce.size):
        k = n + 1.0
        de[n] = complex(-gamma - n * delta, -(n * w + 0.5 * omega_c)) * ce[n] - 1j * lam * k * cg[n]
        dg[n] = complex(-k * delta, -(k * w - 0.5 * omega_c)) * cg[n] - 1j * lam * k * ce[n]


@njit(cache=True, nogil=True)
def propagate(c_e0, c_g0, omega0, omega_c, lambda0, gamma, delta, kind, a, b,
              h, n_steps, record_every, lab):
    n = c_e0.size
    n_rec = n_steps // record_every + 1
    rec_e = np.zeros((n_rec, n), dtype=np.complex128)
    rec_g = np.zeros((n_rec, n), dtype=np.complex128)
    ye = c_e0.copy()
    yg = c_g0.copy()
    k1e = np.empty(n, np.complex128)
    k1g = np.empty(n, np.complex128)
    k2e = np.empty(n, np.complex128)
    k2g = np.empty(n, np.complex128)
    k3e = np.empty(n, np.complex128)
    k3g = np.empty(n, np.complex128)
    k4e = np.empty(n, np.complex128)
    k4g = np.empty(n, np.complex128)
    te = np.empty(n, np.complex128)
    tg = np.empty(n, np.complex128)
    status = -1
    rec_e[0, :] = ye
    rec_g[0, :] = yg
    r = 1
    for step in range(n_steps):
        t = step * h
        if lab:
            _lab_rhs(t, ye, yg, k1e, k1g, omega0, omega_c, lambda0, gamma, delta, kind, a, b)
            for j in range(n):
                te[j] = ye[j] + 0.5 * h * k1e[j]
                tg[j] = yg[j] + 0.5 * h * k1g[j]
            _lab_rhs(t + 0.5 * h, te, tg, k2e, k2g, omega0, omega_c, lambda0, gamma, delta, kind, a, b)
            for j in range(n):
                te[j] = ye[j] + 0.5 * h * k2e[j]
                tg[j] = yg[j] + 0.5 * h * k2g[j]
            _lab_rhs(t + 0.5 * h, te, tg, k3e, k3g, omega0, omega_c, lambda0, gamma, delta, kind, a, b)
            for j in range(n):
                te[j] = ye[j] + h * k3e[j]
                tg[j] = yg[j] + h * k3g[j]
            _lab_rhs(t + h, te, tg, k4e, k4g, omega0, omega_c, lambda0, gamma, delta, kind, a, b)
        else:
            u1e, u1g = _coupling_factors(t, omega0, omega_c, lambda0, gamma, delta, kind, a, b)
            u2e, u2g = _coupling_factors(t + 0.5 * h, omega0, omega_c, lambda0, gamma, delta, kind, a, b)
            u4e, u4g = _coupling_factors(t + h, omega0, omega_c, lambda0, gamma, delta, kind, a, b)
            for j in range(n):
                k = j + 1.0
                k1e[j] = u1e * k * yg[j]
                k1g[j] = u1g * k * ye[j]
                k2e[j] = u2e * k * (yg[j] + 0.5 * h * k1g[j])
                k2g[j] = u2g * k * (ye[j] + 0.5 * h * k1e[j])
                k3e[j] = u2e * k * (yg[j] + 0.5 * h * k2g[j])
                k3g[j] = u2g * k * (ye[j] + 0.5 * h * k2e[j])
                k4e[j] = u4e * k * (yg[j] + h * k3g[j])
                k4g[j] = u4g * k * (ye[j] + h * k3e[j])
        for j in range(n):
            ye[j] = ye[j] + h / 6.0 * (k1e[j] + 2.0 * k2e[j] + 2.0 * k3e[j] + k4e[j])
            yg[j] = yg[j] + h / 6.0 * (k1g[j] + 2.0 * k2g[j] + 2.0 * k3g[j] + k4g[j])
        if (step + 1) % record_every == 0:
            if lab:
                rec_e[r, :] = ye
                rec_g[r, :] = yg
            else:
                _to_lab(ye, yg, rec_e[r], rec_g[r], (step + 1) * h,
                        omega0, omega_c, gamma, delta, kind, a, b)
            if not (_is_finite(rec_e[r]) and _is_finite(rec_g[r])):
                status = r
                break
            r += 1
    return rec_e, rec_g, status
