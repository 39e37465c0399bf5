"""Compiled method-of-lines RK4 kernels for the continuum equations.

The public right-hand sides in :mod:`spinsoliton.continuum` are the numpy
reference; these loops compute the same expressions point by point and are
checked against them in the tests.
"""

import numpy as np
from numba import njit

MODE_NLS = 0
MODE_FULL = 1
MODE_FULL_VARIANT = 2

# layout of the ``coef`` array
KIN, V, C1, C2S, C3, S, HBAR, OMEGA = range(8)


@njit(cache=True, error_model="numpy")
def _laplacian_into(lr, li, psi, periodic):
    n = psi.size
    for j in range(1, n - 1):
        lr[j] = psi[j - 1].real + psi[j + 1].real - 2.0 * psi[j].real
        li[j] = psi[j - 1].imag + psi[j + 1].imag - 2.0 * psi[j].imag
    if periodic:
        lr[0] = psi[n - 1].real + psi[1].real - 2.0 * psi[0].real
        li[0] = psi[n - 1].imag + psi[1].imag - 2.0 * psi[0].imag
        lr[n - 1] = psi[n - 2].real + psi[0].real - 2.0 * psi[n - 1].real
        li[n - 1] = psi[n - 2].imag + psi[0].imag - 2.0 * psi[n - 1].imag
    else:
        lr[0] = 0.0
        li[0] = 0.0
        lr[n - 1] = 0.0
        li[n - 1] = 0.0


@njit(cache=True, error_model="numpy")
def rhs_into(out, psi, t, coef, mode, periodic):
    n = psi.size
    kin = coef[KIN]
    v = coef[V]
    c1 = coef[C1]
    ih = 1.0 / coef[HBAR]
    om = coef[OMEGA]
    lr = np.empty(n)
    li = np.empty(n)
    _laplacian_into(lr, li, psi, periodic)
    for j in range(n):
        pr = psi[j].real
        pi = psi[j].imag
        g = v - 2.0 * c1 * (pr * pr + pi * pi)
        fr = -kin * lr[j] + g * pr
        fi = -kin * li[j] + g * pi
        # -i f / hbar + i om psi
        out[j] = complex(fi * ih - om * pi, -fr * ih + om * pr)
    if mode != MODE_NLS:
        _add_extra(out, psi, t, coef, mode)
    if not periodic:  # held edges must not move inside the RK stages either
        out[0] = 0.0
        out[n - 1] = 0.0


@njit(cache=True, error_model="numpy")
def _add_extra(out, psi, t, coef, mode):
    n = psi.size
    c2s = coef[C2S]
    c3 = coef[C3]
    s = coef[S]
    ih = 1.0 / coef[HBAR]
    om = coef[OMEGA]
    ph = np.exp(-1j * om * t)
    phc = ph.conjugate()
    for j in range(n):
        p = psi[j] * ph
        pc = p.conjugate()
        p2 = p * p
        a2 = p.real * p.real + p.imag * p.imag
        bracket = c2s * (2.5 * a2 + 1.25 * p2 - s)
        if mode == MODE_FULL_VARIANT:
            bracket = bracket * p
        extra = phc * (bracket - c3 * (4.0 * s * pc - 3.0 * pc * a2 - p2 * p))
        out[j] += -1j * ih * extra


@njit(cache=True, error_model="numpy")
def march(psi, t, steps, coef, mode, periodic, ceiling):
    """Advance ``psi`` in place over the given step sizes.

    Returns (number of completed steps, index of first bad site or -1).
    """
    n = psi.size
    k1 = np.empty_like(psi)
    k2 = np.empty_like(psi)
    k3 = np.empty_like(psi)
    k4 = np.empty_like(psi)
    tmp = np.empty_like(psi)
    left_edge = psi[0]
    right_edge = psi[n - 1]
    c2 = ceiling * ceiling
    for m in range(steps.size):
        h = steps[m]
        rhs_into(k1, psi, t, coef, mode, periodic)
        for j in range(n):
            tmp[j] = psi[j] + 0.5 * h * k1[j]
        rhs_into(k2, tmp, t + 0.5 * h, coef, mode, periodic)
        for j in range(n):
            tmp[j] = psi[j] + 0.5 * h * k2[j]
        rhs_into(k3, tmp, t + 0.5 * h, coef, mode, periodic)
        for j in range(n):
            tmp[j] = psi[j] + h * k3[j]
        rhs_into(k4, tmp, t + h, coef, mode, periodic)
        bad = -1
        for j in range(n):
            z = psi[j] + (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            psi[j] = z
            a2 = z.real * z.real + z.imag * z.imag
            if bad < 0 and not a2 <= c2:
                bad = j
        if not periodic:
            psi[0] = left_edge
            psi[n - 1] = right_edge
        t += h
        if bad >= 0:
            return m + 1, bad
    return steps.size, -1
