"""Run configuration: flat dotted keys, shipped defaults, strict validation.

A config file is a JSON object whose keys are the dotted names below.
Precedence is command-line flag > file > default. Unknown keys are rejected
so typos fail loudly before any simulation starts.
"""

import json
from dataclasses import dataclass, field

from .cmos import AmpParams, RepeaterParams
from .errors import ParameterError
from .magnet import MagnetParams
from .mtj import MeCapacitor, MtjParams
from .wire import LinkElectrical, WireParams

__all__ = ["DEFAULTS", "RunConfig", "load_config"]

# Every key the simulator understands, with its shipped default.
DEFAULTS = {
    # free layer and drive oxide
    "magnet.length_nm": 112.5,
    "magnet.width_nm": 45.0,
    "magnet.thickness_nm": 2.5,
    "magnet.ms_a_per_m": 1.0e6,
    "magnet.alpha": 0.03,
    "magnet.gamma_rad_per_s_t": 1.76e11,
    "magnet.ki_j_per_m2": 0.0,
    "magnet.t_me_nm": 5.0,
    "magnet.alpha_me_s_per_m": 0.5 / 3e8,
    "magnet.temperature_k": 300.0,
    "magnet.initial_tilt_deg": 1.0,
    "device.eps_r_me": 50.0,
    # read port
    "mtj.r_p_ohm": 10e3,
    "mtj.tmr": 1.0,
    "mtj.r_ref_ohm": 10e3 * 2.0 ** 0.5,
    "mtj.v_read": 1.0,
    "mtj.t_read_ns": 0.6,
    # wire and electrical link
    "wire.length_mm": 5.0,
    "wire.r_per_mm_ohm": 50.0,
    "wire.c_per_mm_ff_per_um": 0.25,
    "wire.n_segments": 50,
    "link.cs_ratio": 0.5,
    "link.r_driver_ohm": 650.0,
    "drive.vdd": 1.0,
    # clocking
    "clock.period_ns": 3.0,
    "clock.write_frac": 0.45,
    "clock.read_frac": 0.20,
    "clock.reset_frac": 0.35,
    # numerics
    "sim.dt_llg_ps": 0.1,
    "sim.dt_circuit_ps": 1.0,
    "sim.window_ns": 2.0,
    "sim.threshold_mx": 0.9,
    # behavioral CMOS baselines (calibrated once at 5 mm)
    "cmos.r0_ohm": 2.0e3,
    "cmos.c0_ff": 15.0,
    "cmos.repeater_count_scale": 0.5,
    "cmos.repeater_size_scale": 0.8,
    "cmos.activity": 0.5,
    "cmos.amp_bias_ua": 14.6,
    "cmos.amp_in_cap_ff": 2.0,
}

_INT_KEYS = {"wire.n_segments"}


@dataclass
class RunConfig:
    """Validated bag of all configuration values."""

    values: dict = field(default_factory=lambda: dict(DEFAULTS))

    def __getitem__(self, key):
        return self.values[key]

    def with_overrides(self, overrides: dict) -> "RunConfig":
        merged = dict(self.values)
        for key, val in overrides.items():
            if key not in DEFAULTS:
                raise ParameterError(f"unknown config key: {key!r}")
            if val is None:
                continue
            merged[key] = int(val) if key in _INT_KEYS else float(val)
        cfg = RunConfig(values=merged)
        cfg.validate()
        return cfg

    def validate(self):
        """Construct every parameter object so module preconditions run."""
        self.magnet_params()
        self.mtj_params()
        self.wire_params()
        self.link_electrical()
        self.repeater_params()
        self.amp_params()
        fr = (self["clock.write_frac"], self["clock.read_frac"],
              self["clock.reset_frac"])
        if any(f <= 0 for f in fr):
            raise ParameterError("clock phase fractions must be positive")
        if abs(sum(fr) - 1.0) > 1e-9:
            raise ParameterError("clock phase fractions must sum to 1")
        if self["clock.period_ns"] <= 0:
            raise ParameterError("clock.period_ns must be > 0")
        for key in ("sim.dt_llg_ps", "sim.dt_circuit_ps", "sim.window_ns"):
            if self[key] <= 0:
                raise ParameterError(f"{key} must be > 0")
        if int(self["wire.n_segments"]) < 10:
            raise ParameterError("wire.n_segments must be >= 10 for runs")
        if not 0.0 < self["sim.threshold_mx"] < 1.0:
            raise ParameterError("sim.threshold_mx must be in (0, 1)")

    def magnet_params(self) -> MagnetParams:
        return MagnetParams(
            length=self["magnet.length_nm"] * 1e-9,
            width=self["magnet.width_nm"] * 1e-9,
            thickness=self["magnet.thickness_nm"] * 1e-9,
            ms=self["magnet.ms_a_per_m"],
            alpha=self["magnet.alpha"],
            gamma=self["magnet.gamma_rad_per_s_t"],
            ki=self["magnet.ki_j_per_m2"],
            t_me=self["magnet.t_me_nm"] * 1e-9,
            alpha_me=self["magnet.alpha_me_s_per_m"],
            eps_r_me=self["device.eps_r_me"],
            temperature=self["magnet.temperature_k"],
        )

    def mtj_params(self) -> MtjParams:
        return MtjParams(
            r_p=self["mtj.r_p_ohm"],
            tmr=self["mtj.tmr"],
            r_ref=self["mtj.r_ref_ohm"],
            v_read=self["mtj.v_read"],
            t_read=self["mtj.t_read_ns"] * 1e-9,
        )

    def me_capacitor(self) -> MeCapacitor:
        m = self.magnet_params()
        return MeCapacitor(area=m.length * m.width, t_me=m.t_me, eps_r=m.eps_r_me)

    def wire_params(self, length_mm: float | None = None) -> WireParams:
        return WireParams(
            length_mm=self["wire.length_mm"] if length_mm is None else length_mm,
            r_per_mm=self["wire.r_per_mm_ohm"],
            c_per_mm=self["wire.c_per_mm_ff_per_um"] * 1e-12,
            n_segments=int(self["wire.n_segments"]),
        )

    def link_electrical(self, length_mm: float | None = None) -> LinkElectrical:
        wire = self.wire_params(length_mm)
        return LinkElectrical.from_wire(
            wire,
            cs_ratio=self["link.cs_ratio"],
            c_l=self.me_capacitor().capacitance,
            r_driver=self["link.r_driver_ohm"],
            vdd=self["drive.vdd"],
        )

    def repeater_params(self) -> RepeaterParams:
        return RepeaterParams(
            r0=self["cmos.r0_ohm"],
            c0=self["cmos.c0_ff"] * 1e-15,
            count_scale=self["cmos.repeater_count_scale"],
            size_scale=self["cmos.repeater_size_scale"],
            activity=self["cmos.activity"],
            vdd=self["drive.vdd"],
        )

    def amp_params(self) -> AmpParams:
        return AmpParams(
            i_bias=self["cmos.amp_bias_ua"] * 1e-6,
            c_in=self["cmos.amp_in_cap_ff"] * 1e-15,
            t_bit=self["clock.period_ns"] * 1e-9,
            activity=self["cmos.activity"],
            vdd=self["drive.vdd"],
            cs_ratio=self["link.cs_ratio"],
            r_driver=self["link.r_driver_ohm"],
        )

    def phase_times(self):
        """(write, read, reset) durations in seconds."""
        period = self["clock.period_ns"] * 1e-9
        return (period * self["clock.write_frac"],
                period * self["clock.read_frac"],
                period * self["clock.reset_frac"])


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Load defaults, then the file, then explicit overrides."""
    cfg = RunConfig()
    if path is not None:
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ParameterError("config file must hold a JSON object")
        cfg = cfg.with_overrides(data)
    if overrides:
        cfg = cfg.with_overrides(overrides)
    cfg.validate()
    return cfg
