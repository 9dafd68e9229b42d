# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: stochastic Heun macrospin stepping and trapezoidal
RC-ladder stepping.

The arithmetic mirrors ``_ref.py`` operation for operation; together with
-ffp-contract=off this keeps both backends bit-identical.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

BACKEND = "cython"


def llg_heun_run(m, drive, noise, double sigma, double dt, coeff,
                 double stop_thr, bint stop, record):
    """See melink._kernels._ref.llg_heun_run for the contract."""
    cdef double[::1] mv = np.ascontiguousarray(m, dtype=np.float64)
    cdef double[::1] dv = np.ascontiguousarray(drive, dtype=np.float64)
    cdef double[::1] cv = np.ascontiguousarray(coeff, dtype=np.float64)
    cdef double[:, ::1] nz_mv
    cdef double[:, ::1] rec_mv
    cdef bint has_noise = noise is not None
    cdef bint has_rec = record is not None
    if has_noise:
        nz_mv = noise
    if has_rec:
        rec_mv = record

    cdef double nxx = cv[0], nyy = cv[1], nzz = cv[2], ms = cv[3]
    cdef double hic = cv[4], hmv = cv[5], alpha = cv[6], gamma_b = cv[7]
    cdef double pref = -gamma_b / (1.0 + alpha * alpha)
    cdef double cx = -ms * nxx
    cdef double cy = -ms * nyy
    cdef double cz = -ms * nzz + hic

    cdef double mx = mv[0], my = mv[1], mz = mv[2]
    cdef Py_ssize_t n = dv.shape[0]
    cdef Py_ssize_t k
    cdef long cross = -1
    cdef bint up = stop_thr > 0.0
    cdef double hme, tx, ty, tz
    cdef double hx, hy, hz, ax, ay, az, bx, by, bz
    cdef double k1x, k1y, k1z, k2x, k2y, k2z, px, py, pz, inv

    if has_rec:
        rec_mv[0, 0] = mx
        rec_mv[0, 1] = my
        rec_mv[0, 2] = mz

    with nogil:
        for k in range(n):
            hme = hmv * dv[k]
            if has_noise:
                tx = sigma * nz_mv[k, 0]
                ty = sigma * nz_mv[k, 1]
                tz = sigma * nz_mv[k, 2]
            else:
                tx = 0.0
                ty = 0.0
                tz = 0.0

            hx = cx * mx + hme + tx
            hy = cy * my + ty
            hz = cz * mz + tz
            ax = my * hz - mz * hy
            ay = mz * hx - mx * hz
            az = mx * hy - my * hx
            bx = my * az - mz * ay
            by = mz * ax - mx * az
            bz = mx * ay - my * ax
            k1x = pref * (ax + alpha * bx)
            k1y = pref * (ay + alpha * by)
            k1z = pref * (az + alpha * bz)
            px = mx + dt * k1x
            py = my + dt * k1y
            pz = mz + dt * k1z

            hx = cx * px + hme + tx
            hy = cy * py + ty
            hz = cz * pz + tz
            ax = py * hz - pz * hy
            ay = pz * hx - px * hz
            az = px * hy - py * hx
            bx = py * az - pz * ay
            by = pz * ax - px * az
            bz = px * ay - py * ax
            k2x = pref * (ax + alpha * bx)
            k2y = pref * (ay + alpha * by)
            k2z = pref * (az + alpha * bz)

            mx = mx + dt * 0.5 * (k1x + k2x)
            my = my + dt * 0.5 * (k1y + k2y)
            mz = mz + dt * 0.5 * (k1z + k2z)
            inv = 1.0 / sqrt(mx * mx + my * my + mz * mz)
            mx *= inv
            my *= inv
            mz *= inv

            if has_rec:
                rec_mv[k + 1, 0] = mx
                rec_mv[k + 1, 1] = my
                rec_mv[k + 1, 2] = mz
            if cross < 0 and stop_thr != 0.0:
                if (up and mx >= stop_thr) or ((not up) and mx <= stop_thr):
                    cross = k + 1
                    if stop:
                        break

    return np.array([mx, my, mz]), cross


def rc_factor(low, diag, up):
    """Thomas elimination factors; see _ref.rc_factor."""
    cdef double[::1] lo = np.ascontiguousarray(low, dtype=np.float64)
    cdef double[::1] di = np.ascontiguousarray(diag, dtype=np.float64)
    cdef double[::1] u = np.ascontiguousarray(up, dtype=np.float64)
    cdef Py_ssize_t n = di.shape[0]
    cp_arr = np.zeros(n)
    denom_arr = np.zeros(n)
    cdef double[::1] cp = cp_arr
    cdef double[::1] denom = denom_arr
    cdef Py_ssize_t i
    denom[0] = di[0]
    if denom[0] == 0.0:
        raise ZeroDivisionError("singular tridiagonal system")
    cp[0] = u[0] / denom[0]
    for i in range(1, n):
        denom[i] = di[i] - lo[i] * cp[i - 1]
        if denom[i] == 0.0:
            raise ZeroDivisionError("singular tridiagonal system")
        if i < n - 1:
            cp[i] = u[i] / denom[i]
    return cp_arr, denom_arr


def rc_trapezoid_run(low, cp, denom, bl, bd, bu, src, vin, v0):
    """See melink._kernels._ref.rc_trapezoid_run for the contract."""
    cdef double[::1] lo = np.ascontiguousarray(low, dtype=np.float64)
    cdef double[::1] cpv = np.ascontiguousarray(cp, dtype=np.float64)
    cdef double[::1] den = np.ascontiguousarray(denom, dtype=np.float64)
    cdef double[::1] blv = np.ascontiguousarray(bl, dtype=np.float64)
    cdef double[::1] bdv = np.ascontiguousarray(bd, dtype=np.float64)
    cdef double[::1] buv = np.ascontiguousarray(bu, dtype=np.float64)
    cdef double[::1] srcv = np.ascontiguousarray(src, dtype=np.float64)
    cdef double[::1] vinv = np.ascontiguousarray(vin, dtype=np.float64)
    cdef double[::1] v0v = np.ascontiguousarray(v0, dtype=np.float64)

    cdef Py_ssize_t n = v0v.shape[0]
    cdef Py_ssize_t steps = vinv.shape[0] - 1
    out_arr = np.zeros((steps + 1, n))
    cdef double[:, ::1] out = out_arr
    v_arr = np.array(v0, dtype=np.float64)
    rhs_arr = np.zeros(n)
    dp_arr = np.zeros(n)
    cdef double[::1] v = v_arr
    cdef double[::1] rhs = rhs_arr
    cdef double[::1] dp = dp_arr
    cdef Py_ssize_t i, k
    cdef double vbar, acc

    for i in range(n):
        out[0, i] = v[i]

    with nogil:
        for k in range(steps):
            vbar = 0.5 * (vinv[k] + vinv[k + 1])
            for i in range(n):
                acc = bdv[i] * v[i]
                if i > 0:
                    acc += blv[i] * v[i - 1]
                if i < n - 1:
                    acc += buv[i] * v[i + 1]
                rhs[i] = acc + srcv[i] * vbar
            dp[0] = rhs[0] / den[0]
            for i in range(1, n):
                dp[i] = (rhs[i] - lo[i] * dp[i - 1]) / den[i]
            v[n - 1] = dp[n - 1]
            for i in range(n - 2, -1, -1):
                v[i] = dp[i] - cpv[i] * v[i + 1]
            for i in range(n):
                out[k + 1, i] = v[i]

    return out_arr
