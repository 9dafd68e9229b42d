"""Benchmark the compiled kernels against the pure Python reference.

Run:  python benchmarks/bench_backends.py [--quick]

Covers the two hot paths: stochastic Heun stepping of the magnetization and
trapezoidal stepping of the wire ladder, plus an end-to-end Monte Carlo
switching point. The reference backend is expected to be orders of magnitude
slower on the magnetization loop; it exists for portability, not speed.
"""

import argparse
import time

import numpy as np

from melink._kernels import _ref
from melink.config import load_config
from melink.magnet import thermal_sigma
from melink.wire import build_network

try:
    from melink._kernels import _core
except ImportError:
    _core = None


def time_fn(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_llg(impl, n_steps, noise, sigma, coeff, dt):
    m0 = np.array([-1.0, 0.0, 0.0])
    drive = np.full(n_steps, 0.2)

    def run():
        impl.llg_heun_run(m0, drive, noise, sigma, dt, coeff, 0.0, False, None)

    return time_fn(run)


def bench_rc(impl, net, steps):
    dt = 1e-12
    a_low = net.c_low / dt + 0.5 * net.g_low
    a_diag = net.c_diag / dt + 0.5 * net.g_diag
    a_up = net.c_up / dt + 0.5 * net.g_up
    b_low = net.c_low / dt - 0.5 * net.g_low
    b_diag = net.c_diag / dt - 0.5 * net.g_diag
    b_up = net.c_up / dt - 0.5 * net.g_up
    cp, den = impl.rc_factor(a_low, a_diag, a_up)
    vin = np.ones(steps + 1)
    vin[0] = 0.0
    v0 = np.zeros(net.n_nodes)

    def run():
        impl.rc_trapezoid_run(a_low, cp, den, b_low, b_diag, b_up,
                              net.src, vin, v0)

    return time_fn(run)


def bench_mc_point(impl, coeff, sigma, dt, n_steps, n_trials, seed=7):
    drive = np.full(n_steps, 0.15)
    m0 = np.array([-1.0, 0.0, 0.0])

    def run():
        hits = 0
        for trial in range(n_trials):
            rng = np.random.Generator(np.random.Philox(
                np.random.SeedSequence(seed, spawn_key=(0, trial))))
            noise = rng.standard_normal((n_steps, 3))
            _, cross = impl.llg_heun_run(m0, drive, noise, sigma, dt, coeff,
                                         0.9, True, None)
            hits += cross >= 0
        return hits

    return time_fn(run, repeat=1)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true",
                    help="shrink workloads ~10x")
    args = ap.parse_args()

    cfg = load_config()
    params = cfg.magnet_params()
    coeff = params.kernel_coeff()
    dt = 1e-13
    sigma = thermal_sigma(params, dt)
    net = build_network(cfg.wire_params(), cfg.link_electrical())

    n_llg = 2_000 if args.quick else 20_000
    n_rc = 2_500 if args.quick else 25_000
    n_trials = 10 if args.quick else 100

    rng = np.random.default_rng(0)
    noise = rng.standard_normal((n_llg, 3))

    impls = [("python", _ref)]
    if _core is not None:
        impls.append(("cython", _core))
    else:
        print("compiled kernels not built; benchmarking the reference only")

    rows = []
    for name, impl in impls:
        t_det = bench_llg(impl, n_llg, None, 0.0, coeff, dt)
        t_sto = bench_llg(impl, n_llg, noise, sigma, coeff, dt)
        t_rc = bench_rc(impl, net, n_rc)
        t_mc = bench_mc_point(impl, coeff, sigma, dt, n_llg, n_trials)
        rows.append((name, t_det, t_sto, t_rc, t_mc))

    print(f"\nworkloads: {n_llg} Heun steps | {n_rc} ladder steps "
          f"({net.n_nodes} nodes) | {n_trials}-trial MC point")
    print(f"{'backend':<8} {'heun T=0':>12} {'heun 300K':>12} "
          f"{'rc ladder':>12} {'mc point':>12}")
    for name, t_det, t_sto, t_rc, t_mc in rows:
        print(f"{name:<8} {t_det*1e3:>10.2f}ms {t_sto*1e3:>10.2f}ms "
              f"{t_rc*1e3:>10.2f}ms {t_mc*1e3:>10.2f}ms")
    if len(rows) == 2:
        py, cy = rows[0], rows[1]
        print(f"{'speedup':<8} {py[1]/cy[1]:>11.1f}x {py[2]/cy[2]:>11.1f}x "
              f"{py[3]/cy[3]:>11.1f}x {py[4]/cy[4]:>11.1f}x")


if __name__ == "__main__":
    main()
