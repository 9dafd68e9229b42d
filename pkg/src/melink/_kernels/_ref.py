"""Pure Python reference kernels.

These mirror the compiled kernels in ``_core.pyx`` operation for operation:
the arithmetic is written in the same order so both backends produce
bit-identical results (the extension is compiled with -ffp-contract=off for
this reason). They are the import-time fallback when the extension is not
built; expect them to be orders of magnitude slower on long runs.
"""

import numpy as np

BACKEND = "python"


def llg_heun_run(m, drive, noise, sigma, dt, coeff, stop_thr, stop, record):
    """Integrate the macrospin over len(drive) Heun steps.

    m         : float64[3], initial unit magnetization; not modified.
    drive     : float64[n], ME-capacitor voltage held during each step.
    noise     : float64[n,3] standard normal draws, or None for T = 0.
    sigma     : thermal field scale in A/m (multiplies the draws).
    dt        : time step in seconds.
    coeff     : float64[8] = (nxx, nyy, nzz, ms, h_int_coeff, h_me_per_volt,
                alpha, gamma_b); field model
                  hx = -ms*nxx*mx + h_me_per_volt*v
                  hy = -ms*nyy*my
                  hz = (-ms*nzz + h_int_coeff)*mz
                and dm/dt = -gamma_b/(1+alpha^2) * (m x h + alpha m x (m x h)).
    stop_thr  : crossing threshold on mx; sign selects direction. 0 disables
                crossing detection.
    stop      : end integration at the first crossing.
    record    : float64[n+1, 3] output trajectory buffer, or None.

    Returns (m_final, cross_idx); cross_idx is the 1-based step index of the
    first crossing, or -1. When stop is set, steps after the crossing are not
    executed and record rows beyond it are left untouched.
    """
    nxx, nyy, nzz, ms, hic, hmv, alpha, gamma_b = (float(c) for c in coeff)
    pref = -gamma_b / (1.0 + alpha * alpha)
    cx = -ms * nxx
    cy = -ms * nyy
    cz = -ms * nzz + hic
    sig = float(sigma)

    mx = float(m[0])
    my = float(m[1])
    mz = float(m[2])
    n = len(drive)
    if record is not None:
        record[0, 0] = mx
        record[0, 1] = my
        record[0, 2] = mz
    cross = -1
    up = stop_thr > 0.0

    for k in range(n):
        hme = hmv * float(drive[k])
        if noise is not None:
            tx = sig * float(noise[k, 0])
            ty = sig * float(noise[k, 1])
            tz = sig * float(noise[k, 2])
        else:
            tx = ty = tz = 0.0

        # predictor
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

        # corrector with the same thermal sample
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
        inv = 1.0 / np.sqrt(mx * mx + my * my + mz * mz)
        mx *= inv
        my *= inv
        mz *= inv

        if record is not None:
            record[k + 1, 0] = mx
            record[k + 1, 1] = my
            record[k + 1, 2] = mz
        if cross < 0 and stop_thr != 0.0:
            if (up and mx >= stop_thr) or (not up and mx <= stop_thr):
                cross = k + 1
                if stop:
                    break

    return np.array([mx, my, mz]), cross


def rc_factor(low, diag, up):
    """Precompute the Thomas elimination factors of a tridiagonal matrix.

    Returns (cp, denom): modified superdiagonal and elimination denominators.
    """
    n = len(diag)
    cp = np.zeros(n)
    denom = np.zeros(n)
    denom[0] = diag[0]
    if denom[0] == 0.0:
        raise ZeroDivisionError("singular tridiagonal system")
    cp[0] = up[0] / denom[0]
    for i in range(1, n):
        denom[i] = diag[i] - low[i] * cp[i - 1]
        if denom[i] == 0.0:
            raise ZeroDivisionError("singular tridiagonal system")
        if i < n - 1:
            cp[i] = up[i] / denom[i]
    return cp, denom


def rc_trapezoid_run(low, cp, denom, bl, bd, bu, src, vin, v0):
    """Step the trapezoidal linear update of a tridiagonal RC network.

    Solves A v_{k+1} = B v_k + src*(vin_k + vin_{k+1})/2 for each step, where
    A = C/dt + G/2 is given prefactored (low, cp, denom from rc_factor) and
    B = C/dt - G/2 by its three diagonals (bl, bd, bu).

    vin holds the source voltage at every step edge (length steps+1); v0 is
    the initial node-voltage vector. Returns the (steps+1, n) voltage matrix.
    """
    n = len(v0)
    steps = len(vin) - 1
    out = np.zeros((steps + 1, n))
    v = [float(x) for x in v0]
    out[0] = v
    lowl = [float(x) for x in low]
    cpl = [float(x) for x in cp]
    denl = [float(x) for x in denom]
    bll = [float(x) for x in bl]
    bdl = [float(x) for x in bd]
    bul = [float(x) for x in bu]
    srcl = [float(x) for x in src]
    rhs = [0.0] * n
    dp = [0.0] * n

    for k in range(steps):
        vbar = 0.5 * (float(vin[k]) + float(vin[k + 1]))
        for i in range(n):
            acc = bdl[i] * v[i]
            if i > 0:
                acc += bll[i] * v[i - 1]
            if i < n - 1:
                acc += bul[i] * v[i + 1]
            rhs[i] = acc + srcl[i] * vbar
        dp[0] = rhs[0] / denl[0]
        for i in range(1, n):
            dp[i] = (rhs[i] - lowl[i] * dp[i - 1]) / denl[i]
        v[n - 1] = dp[n - 1]
        for i in range(n - 2, -1, -1):
            v[i] = dp[i] - cpl[i] * v[i + 1]
        out[k + 1] = v

    return out
