"""End-to-end link co-simulation: digital input, series-capacitor wire,
magnetoelectric write, divider read, clocked sense, reset.

Each clock cycle has three phases (write/read/reset). The input drives the
wire for the write and read phases and returns low for reset; the wire
transient is solved once for the whole pattern on its own grid and the
receiving-node waveform is interpolated onto the finer magnetization grid
(one-way electrical-to-magnetic coupling). The reset phase applies the full
negative rail directly across the write capacitor; the reset path is local to
the receiver and is charged as one full-swing capacitor cycle per clock.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels, mtj
from .config import RunConfig
from .errors import LinkFailure, MeasurementError, ParameterError
from .magnet import MagnetParams, thermal_sigma
from .mtj import MtjParams, MeCapacitor
from .wire import LinkElectrical, WireParams, build_network, delay_50pct, transient_solve
from .cmos import fullswing_baseline, lowswing_capacitive_baseline

__all__ = [
    "LinkConfig",
    "LinkTrace",
    "simulate_link",
    "energy_per_bit",
    "propagation_delay",
    "compare_methods",
]


@dataclass(frozen=True)
class LinkConfig:
    """Everything one link run needs."""

    magnet: MagnetParams
    mtj: MtjParams
    wire: WireParams
    elec: LinkElectrical
    me_cap: MeCapacitor
    t_write: float
    t_read: float
    t_reset: float
    dt_llg: float
    dt_circuit: float
    threshold: float
    tilt_deg: float
    seed: int = 0

    @property
    def period(self) -> float:
        return self.t_write + self.t_read + self.t_reset

    @classmethod
    def from_run_config(cls, cfg: RunConfig, seed: int = 0,
                        length_mm: float | None = None) -> "LinkConfig":
        t_w, t_r, t_rst = cfg.phase_times()
        # read dissipation integrates over the actual read window
        return cls(
            magnet=cfg.magnet_params(),
            mtj=replace(cfg.mtj_params(), t_read=t_r),
            wire=cfg.wire_params(length_mm),
            elec=cfg.link_electrical(length_mm),
            me_cap=cfg.me_capacitor(),
            t_write=t_w,
            t_read=t_r,
            t_reset=t_rst,
            dt_llg=cfg["sim.dt_llg_ps"] * 1e-12,
            dt_circuit=cfg["sim.dt_circuit_ps"] * 1e-12,
            threshold=cfg["sim.threshold_mx"],
            tilt_deg=cfg["magnet.initial_tilt_deg"],
            seed=seed,
        )


@dataclass
class LinkTrace:
    """Per-cycle records plus optional waveforms from one link run."""

    bits: list
    decoded_bits: list
    output_bits: list               # latch sampled at cycle starts (1 + n_cycles)
    switch_times: list              # s from cycle start, None for 0-bits
    reset_times: list               # s from reset-phase start
    wire_t50: float                 # s, measured 50% step delay of this wire
    e_line: np.ndarray              # J per cycle
    e_read: np.ndarray
    e_reset: np.ndarray
    length_mm: float
    period: float
    waveforms: dict = field(default_factory=dict)

    @property
    def n_cycles(self) -> int:
        return len(self.bits)


def _input_waveform(bits, cfg: LinkConfig, times: np.ndarray) -> np.ndarray:
    """NRZ-over-the-cycle drive: high through write+read for 1-bits, low in reset."""
    vin = np.zeros_like(times)
    hold = cfg.t_write + cfg.t_read
    for k, bit in enumerate(bits):
        if bit:
            t0 = k * cfg.period
            mask = (times > t0) & (times <= t0 + hold)
            vin[mask] = cfg.elec.vdd
    return vin


def simulate_link(cfg: LinkConfig, bit_pattern, record_waveforms: bool = False) -> LinkTrace:
    """Run the full co-simulation for a bit pattern.

    Raises LinkFailure if a written one fails to cross the detection
    threshold within the write phase or the magnet is not back below the
    reset threshold by the end of any reset phase.
    """
    bits = [int(b) for b in bit_pattern]
    if len(bits) == 0:
        raise ParameterError("bit pattern must be non-empty")
    if any(b not in (0, 1) for b in bits):
        raise ParameterError("bit pattern entries must be 0 or 1")

    # phases must tile both time grids so cycle boundaries land on samples
    for name, span, step in (
        ("write+read", cfg.t_write + cfg.t_read, cfg.dt_llg),
        ("reset", cfg.t_reset, cfg.dt_llg),
        ("period", cfg.period, cfg.dt_circuit),
        ("circuit/llg step ratio", cfg.dt_circuit, cfg.dt_llg),
    ):
        ratio = span / step
        if abs(ratio - round(ratio)) > 1e-6:
            raise ParameterError(
                f"{name} ({span:.3e} s) is not an integer multiple of the "
                f"step ({step:.3e} s)")

    net = build_network(cfg.wire, cfg.elec)

    # timing guard: the write phase must cover the wire delay plus the
    # magnet reversal budget
    tau_bound = (cfg.elec.r_driver + cfg.wire.r_total) * (
        cfg.elec.c_s + cfg.wire.c_total + cfg.elec.c_l)
    probe = transient_solve(net, cfg.elec.vdd, cfg.dt_circuit,
                            max(12 * tau_bound, 200 * cfg.dt_circuit))
    wire_t50 = delay_50pct(probe)
    if cfg.t_write < wire_t50 + 500e-12:
        raise ParameterError(
            f"write phase {cfg.t_write*1e12:.0f} ps shorter than wire delay "
            f"{wire_t50*1e12:.0f} ps + 500 ps reversal budget"
        )

    n_cycles = len(bits)
    duration = n_cycles * cfg.period
    steps_c = int(round(duration / cfg.dt_circuit))
    times_c = cfg.dt_circuit * np.arange(steps_c + 1)
    vin = _input_waveform(bits, cfg, times_c)
    res = transient_solve(net, vin, cfg.dt_circuit, duration)
    v_me_wire = res.v_out
    p_src = res.vin * res.source_current

    coeff = cfg.magnet.kernel_coeff()
    sigma = thermal_sigma(cfg.magnet, cfg.dt_llg)
    thermal = cfg.magnet.temperature > 0.0
    thr = cfg.threshold

    steps_wr = int(round((cfg.t_write + cfg.t_read) / cfg.dt_llg))
    steps_w = int(round(cfg.t_write / cfg.dt_llg))
    steps_rst = int(round(cfg.t_reset / cfg.dt_llg))
    spc = int(round(cfg.period / cfg.dt_circuit))  # circuit steps per cycle

    if thermal:
        m = np.array([-1.0, 0.0, 0.0])
    else:
        th = np.radians(cfg.tilt_deg)
        m = np.array([-np.cos(th), 0.0, np.sin(th)])

    decoded = []
    switch_times = []
    reset_times = []
    e_line = np.zeros(n_cycles)
    e_read = np.zeros(n_cycles)
    e_reset = np.zeros(n_cycles)
    mx_wave = np.zeros(steps_c + 1) if record_waveforms else None
    if record_waveforms:
        mx_wave[0] = m[0]

    for k, bit in enumerate(bits):
        rng = np.random.default_rng(
            np.random.SeedSequence(cfg.seed, spawn_key=(k,)))
        t0 = k * cfg.period

        # write + read phases driven by the wire waveform
        t_edges = t0 + cfg.dt_llg * np.arange(steps_wr)
        drive = np.interp(t_edges, times_c, v_me_wire)
        noise = rng.standard_normal((steps_wr, 3)) if thermal else None
        rec = np.zeros((steps_wr + 1, 3)) if record_waveforms else None
        m, cross = _kernels.llg_heun_run(
            m, drive, noise, sigma, cfg.dt_llg, coeff, thr, False, rec)
        if bit:
            if cross < 0 or cross > steps_w:
                raise LinkFailure(
                    f"cycle {k}: magnet did not cross mx >= {thr} within the "
                    "write phase")
            switch_times.append(cross * cfg.dt_llg)
        else:
            switch_times.append(None)

        # clocked sense at the end of the read phase
        r_dev = mtj.mtj_resistance(float(m[0]), cfg.mtj)
        v_m = mtj.read_voltage(r_dev, cfg.mtj)
        decoded.append(mtj.sense(v_m, cfg.elec.vdd))
        e_read[k] = mtj.read_energy(r_dev, cfg.mtj)

        if record_waveforms:
            stride = int(round(cfg.dt_circuit / cfg.dt_llg))
            seg = rec[::stride, 0]
            i0 = int(round(t0 / cfg.dt_circuit))
            mx_wave[i0 + 1:i0 + len(seg)] = seg[1:]

        # reset phase: full negative rail across the write capacitor
        drive_rst = np.full(steps_rst, -cfg.elec.vdd)
        noise = rng.standard_normal((steps_rst, 3)) if thermal else None
        rec = np.zeros((steps_rst + 1, 3)) if record_waveforms else None
        m, cross = _kernels.llg_heun_run(
            m, drive_rst, noise, sigma, cfg.dt_llg, coeff, -thr, False, rec)
        if float(m[0]) > -thr:
            raise LinkFailure(
                f"cycle {k}: magnet not reset below mx <= {-thr} by the end "
                "of the reset phase")
        reset_times.append(cross * cfg.dt_llg)
        e_reset[k] = mtj.reset_energy(cfg.me_cap, cfg.elec.vdd)

        if record_waveforms:
            stride = int(round(cfg.dt_circuit / cfg.dt_llg))
            seg = rec[::stride, 0]
            i0 = int(round((t0 + cfg.t_write + cfg.t_read) / cfg.dt_circuit))
            mx_wave[i0 + 1:i0 + len(seg)] = seg[1:]

        # line energy drawn from the source over this cycle
        s0, s1 = k * spc, (k + 1) * spc
        e_line[k] = np.trapezoid(p_src[s0:s1 + 1], dx=cfg.dt_circuit)

    # latch viewed at cycle starts: cycle k+1 start shows the bit read in k
    output_bits = [0] + decoded

    waveforms = {}
    if record_waveforms:
        v_node_m = np.zeros(steps_c + 1)
        v_out = np.zeros(steps_c + 1)
        read_start = cfg.t_write
        for k in range(n_cycles):
            i0 = int(round((k * cfg.period + read_start) / cfg.dt_circuit))
            i1 = int(round(((k + 1) * cfg.period - cfg.t_reset) / cfg.dt_circuit))
            for i in range(i0, min(i1 + 1, steps_c + 1)):
                r = mtj.mtj_resistance(float(mx_wave[i]), cfg.mtj)
                v_node_m[i] = mtj.read_voltage(r, cfg.mtj)
            v_out[i1:] = decoded[k] * cfg.elec.vdd
        waveforms = {
            "times": times_c,
            "v_in": res.vin,
            "v_me": v_me_wire,
            "mx": mx_wave,
            "v_node_m": v_node_m,
            "v_out": v_out,
        }

    return LinkTrace(
        bits=bits,
        decoded_bits=decoded,
        output_bits=output_bits,
        switch_times=switch_times,
        reset_times=reset_times,
        wire_t50=wire_t50,
        e_line=e_line,
        e_read=e_read,
        e_reset=e_reset,
        length_mm=cfg.wire.length_mm,
        period=cfg.period,
        waveforms=waveforms,
    )


def energy_per_bit(trace: LinkTrace) -> dict:
    """Average fJ/bit/mm with its additive breakdown."""
    if trace.n_cycles < 1:
        raise ParameterError("trace must hold at least one complete cycle")
    n = trace.n_cycles
    scale = 1e15 / (n * trace.length_mm)
    line = float(trace.e_line.sum()) * scale
    read = float(trace.e_read.sum()) * scale
    reset = float(trace.e_reset.sum()) * scale
    return {
        "line_fj_per_bit_per_mm": line,
        "read_fj_per_bit_per_mm": read,
        "reset_fj_per_bit_per_mm": reset,
        "total_fj_per_bit_per_mm": line + read + reset,
    }


def propagation_delay(trace: LinkTrace) -> dict:
    """Input-edge-to-valid-decision delay over the 0->1 data transitions.

    Ones preceded by ones are excluded: the wire may not have discharged
    fully through the short reset phase, which makes those cycles start from
    residual charge and finish early. The decision is valid once the free
    layer has crossed the detection threshold; the clocked sense that follows
    is ideal (no added latency), so the delay decomposes as wire 50% delay
    plus magnet switching time.
    """
    one_cycles = [k for k, b in enumerate(trace.bits)
                  if b == 1 and (k == 0 or trace.bits[k - 1] == 0)]
    if not one_cycles:
        raise MeasurementError("no 0->1 input transition in the pattern")
    switching = [trace.switch_times[k] - trace.wire_t50 for k in one_cycles]
    total = [trace.switch_times[k] for k in one_cycles]
    return {
        "delay_s": float(np.mean(total)),
        "wire_t50_s": trace.wire_t50,
        "switching_s": float(np.mean(switching)),
        "sense_s": 0.0,
    }


def compare_methods(cfg: RunConfig, length_mm: float | None = None,
                    seed: int = 0, n_bits: int = 32) -> list:
    """Energy/delay rows for the three signalling styles at one length."""
    wire = cfg.wire_params(length_mm)
    rows = []

    e_fs, d_fs = fullswing_baseline(wire, cfg.repeater_params())
    rows.append({"method": "full_swing_cmos", "length_mm": wire.length_mm,
                 "energy_fj_per_bit_per_mm": e_fs, "delay_ns": d_fs,
                 "energy_breakdown": {}})

    e_ls, d_ls = lowswing_capacitive_baseline(
        wire, cfg.amp_params(), dt=cfg["sim.dt_circuit_ps"] * 1e-12)
    rows.append({"method": "low_swing_capacitive_cmos",
                 "length_mm": wire.length_mm,
                 "energy_fj_per_bit_per_mm": e_ls, "delay_ns": d_ls,
                 "energy_breakdown": {}})

    # alternating data keeps the charging activity at exactly one half,
    # matching the convention the two baseline models use
    bits = ([1, 0] * ((n_bits + 1) // 2))[:n_bits]
    link_cfg = LinkConfig.from_run_config(cfg, seed=seed, length_mm=wire.length_mm)
    trace = simulate_link(link_cfg, bits)
    energy = energy_per_bit(trace)
    delay = propagation_delay(trace)
    rows.append({"method": "capacitive_me", "length_mm": wire.length_mm,
                 "energy_fj_per_bit_per_mm": energy["total_fj_per_bit_per_mm"],
                 "delay_ns": delay["delay_s"] * 1e9,
                 "energy_breakdown": energy,
                 "delay_breakdown": {
                     "wire_t50_ns": delay["wire_t50_s"] * 1e9,
                     "switching_ns": delay["switching_s"] * 1e9,
                     "sense_ns": 0.0,
                 }})
    return rows
