"""Seeded, reproducible Monte Carlo and sweep engine.

Every trial owns a counter-derived random stream keyed by (master seed,
point index, trial index), so results are independent of execution order and
of how trials are distributed over workers. Common random numbers across
swept voltages: trial i replays the identical noise stream at every voltage,
which keeps the empirical switching curve monotone up to estimator noise.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .config import RunConfig
from .errors import NumericalError, ParameterError
from .magnet import MagnetParams, thermal_sigma, tilted_state
from .wire import build_network, transient_solve, LinkElectrical, WireParams
from .mtj import me_capacitance

__all__ = [
    "SweepPoint",
    "SweepResult",
    "VariationReport",
    "switching_probability_sweep",
    "variation_analysis",
    "convergence_study",
    "wilson_interval",
]


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054):
    """95% Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ParameterError("trials must be > 0")
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = z * np.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return float(lo), float(hi)


@dataclass(frozen=True)
class SweepPoint:
    v_me: float
    n_trials: int
    n_switched: int
    probability: float
    ci_low: float
    ci_high: float


@dataclass
class SweepResult:
    points: list
    seed: int
    window: float
    dt: float

    def rows(self):
        return [(p.v_me * 1e3, p.n_trials, p.n_switched, p.probability,
                 p.ci_low, p.ci_high) for p in self.points]


def _trial_stream(seed: int, point: int, trial: int):
    """Counter-based per-trial stream, independent of execution order."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(point, trial))))


def _run_trial_block(args):
    (coeff, sigma, dt, n_steps, v_me, threshold, seed, point, t0, t1) = args
    drive = np.full(n_steps, v_me)
    m0 = np.array([-1.0, 0.0, 0.0])
    hits = 0
    for trial in range(t0, t1):
        rng = _trial_stream(seed, point, trial)
        noise = rng.standard_normal((n_steps, 3))
        _, cross = _kernels.llg_heun_run(
            m0, drive, noise, sigma, dt, coeff, threshold, True, None)
        if cross >= 0:
            hits += 1
    return point, hits


def switching_probability_sweep(params: MagnetParams, v_values, n_trials: int,
                                window: float, seed: int, dt: float = 1e-13,
                                threshold: float = 0.9,
                                threads: int = 1) -> SweepResult:
    """Thermal switching probability at each drive voltage.

    Trials start from the reset orientation (-x); success is crossing the
    detection threshold within the window. threads > 1 (or 0 for auto) fans
    trial blocks out to worker processes; results are identical for any
    worker count.
    """
    if n_trials < 100:
        raise ParameterError("n_trials must be >= 100 for a meaningful estimate")
    if window <= 0 or dt <= 0:
        raise ParameterError("window and dt must be > 0")
    v_values = [float(v) for v in v_values]
    n_steps = int(round(window / dt))
    coeff = params.kernel_coeff()
    sigma = thermal_sigma(params, dt)
    if params.temperature == 0.0:
        raise ParameterError("sweep requires finite temperature (T > 0)")

    if threads == 0:
        threads = os.cpu_count() or 1
    block = 125 if threads > 1 else n_trials
    jobs = []
    for point, v in enumerate(v_values):
        for t0 in range(0, n_trials, block):
            jobs.append((coeff, sigma, dt, n_steps, v, threshold, seed,
                         point, t0, min(t0 + block, n_trials)))

    counts = {i: 0 for i in range(len(v_values))}
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for point, hits in pool.map(_run_trial_block, jobs):
                counts[point] += hits
    else:
        for job in jobs:
            point, hits = _run_trial_block(job)
            counts[point] += hits

    points = []
    for i, v in enumerate(v_values):
        k = counts[i]
        lo, hi = wilson_interval(k, n_trials)
        points.append(SweepPoint(v, n_trials, k, k / n_trials, lo, hi))
    return SweepResult(points=points, seed=seed, window=window, dt=dt)


@dataclass
class VariationReport:
    spread: float
    trials: list          # (trial index, peak v_me, passed)
    samples: list         # per-trial drawn scale factors, same order
    threshold: float
    nominal_peak: float

    @property
    def min_peak(self) -> float:
        return min(t[1] for t in self.trials)

    @property
    def pass_rate(self) -> float:
        return sum(1 for t in self.trials if t[2]) / len(self.trials)

    def rows(self):
        return [(i, pk * 1e3, int(ok)) for i, pk, ok in self.trials]


_V_ME_PASS_THRESHOLD = 0.2  # V, drive level guaranteeing deterministic switching


def _peak_v_me(cfg: RunConfig, scale: dict, dt: float) -> float:
    base_wire = cfg.wire_params()
    wire = WireParams(
        length_mm=base_wire.length_mm,
        r_per_mm=base_wire.r_per_mm * scale.get("r", 1.0),
        c_per_mm=base_wire.c_per_mm * scale.get("c", 1.0),
        n_segments=base_wire.n_segments,
    )
    m = cfg.magnet_params()
    c_me = me_capacitance(m.length * scale.get("len", 1.0),
                          m.width * scale.get("wid", 1.0),
                          m.t_me * scale.get("tme", 1.0), m.eps_r_me)
    elec = LinkElectrical(
        c_s=cfg["link.cs_ratio"] * base_wire.c_total * scale.get("cs", 1.0),
        c_l=c_me * scale.get("cl", 1.0),
        r_driver=cfg["link.r_driver_ohm"],
        vdd=cfg["drive.vdd"],
    )
    net = build_network(wire, elec)
    tau = (elec.r_driver + wire.r_total) * (elec.c_s + wire.c_total + elec.c_l)
    res = transient_solve(net, elec.vdd, dt, max(12 * tau, 200 * dt))
    return float(res.v_out.max())


def _variation_block(args):
    cfg, spread, seed, t0, t1, dt = args
    out = []
    for i in range(t0, t1):
        rng = _trial_stream(seed, 0, i)
        u = lambda: 1.0 + spread * (2.0 * rng.random() - 1.0)
        scale = {"cs": u(), "r": u(), "c": u(), "cl": u(),
                 "len": u(), "wid": u(), "tme": u()}
        # alpha_me scales the field, not the electrical peak; drawn for
        # completeness so the stream layout matches the documented contract
        scale["alpha_me"] = u()
        peak = _peak_v_me(cfg, scale, dt)
        out.append(((i, peak, peak > _V_ME_PASS_THRESHOLD), scale))
    return out


def variation_analysis(cfg: RunConfig, spread: float, n_trials: int,
                       seed: int, threads: int = 1) -> VariationReport:
    """Uniform +/-spread draws on the electrical path; records peak drive.

    Each trial independently scales the series capacitor, wire r and c per
    length, receiver load, magnet in-plane dimensions, oxide thickness, and
    the magnetoelectric coefficient, then solves the wire transient for a
    held-high input. A trial passes when the peak receiving-end voltage
    clears the deterministic switching threshold. Trials own counter-keyed
    streams, so the report is identical for any worker count.
    """
    if not 0.0 <= spread <= 0.5:
        raise ParameterError("spread must be within [0, 0.5]")
    if n_trials < 100:
        raise ParameterError("n_trials must be >= 100 for a meaningful estimate")
    dt = cfg["sim.dt_circuit_ps"] * 1e-12
    nominal = _peak_v_me(cfg, {}, dt)
    if threads == 0:
        threads = os.cpu_count() or 1
    block = 50 if threads > 1 else n_trials
    jobs = [(cfg, spread, seed, t0, min(t0 + block, n_trials), dt)
            for t0 in range(0, n_trials, block)]
    records = []
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for chunk in pool.map(_variation_block, jobs):
                records.extend(chunk)
    else:
        for job in jobs:
            records.extend(_variation_block(job))
    records.sort(key=lambda r: r[0][0])
    trials = [r[0] for r in records]
    samples = [r[1] for r in records]
    return VariationReport(spread=spread, trials=trials, samples=samples,
                           threshold=_V_ME_PASS_THRESHOLD, nominal_peak=nominal)


def convergence_study(params: MagnetParams, dt_values, v_me: float = 0.2,
                      duration: float = 0.5e-9, tilt_deg: float = 1.0):
    """Self-convergence of the deterministic integrator.

    Integrates the same reversal at each step size against a reference at
    one quarter of the finest requested step and reports the maximum angular
    error. Errors must shrink monotonically; the observed order accompanies
    the table.
    """
    dts = sorted(float(d) for d in dt_values)
    if len(dts) < 3:
        raise ParameterError("need at least three dt values")
    if params.temperature != 0.0:
        params = replace(params, temperature=0.0)

    coeff = params.kernel_coeff()
    m0 = tilted_state(-1.0, tilt_deg).m

    def run(dt):
        n = int(round(duration / dt))
        drive = np.full(n, v_me)
        rec = np.zeros((n + 1, 3))
        _kernels.llg_heun_run(m0, drive, None, 0.0, dt, coeff, 0.0, False, rec)
        return rec

    dt_ref = dts[0] / 4.0
    ref = run(dt_ref)
    rows = []
    for dt in dts:
        path = run(dt)
        stride = int(round(dt / dt_ref))
        ref_sub = ref[::stride]
        dots = np.clip(np.sum(path * ref_sub, axis=1), -1.0, 1.0)
        err = float(np.degrees(np.max(np.arccos(dots))))
        rows.append((dt, err))

    errs = [e for _, e in rows]
    if any(errs[i] <= errs[i - 1] for i in range(1, len(errs))):
        raise NumericalError("trajectory error is not monotone in dt")
    orders = [np.log(errs[i] / errs[i - 1]) / np.log(dts[i] / dts[i - 1])
              for i in range(1, len(errs))]
    return rows, float(np.mean(orders))
