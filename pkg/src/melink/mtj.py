"""Behavioral MTJ receiver: write capacitor, resistance, divider read, sense.

The device resistance interpolates linearly in conductance between the
parallel (mx = +1, low R) and anti-parallel (mx = -1, high R) endpoints. The
read divider places the device between node M and ground with the reference
resistor between the read supply and node M, so node M rises with device
resistance; the clocked comparator-plus-inverter then outputs 1 for the
parallel state.
"""

from dataclasses import dataclass
from math import sqrt

from .constants import EPS0
from .errors import ParameterError

__all__ = [
    "MtjParams",
    "MeCapacitor",
    "me_capacitance",
    "mtj_resistance",
    "read_voltage",
    "sense",
    "read_energy",
    "reset_energy",
]


@dataclass(frozen=True)
class MtjParams:
    r_p: float = 10e3          # ohm, parallel-state resistance
    tmr: float = 1.0           # R_AP = r_p * (1 + tmr)
    r_ref: float = 10e3 * sqrt(2.0)   # ohm, reference resistor
    v_read: float = 1.0        # V
    t_read: float = 0.6e-9     # s, read window

    def __post_init__(self):
        if self.r_p <= 0:
            raise ParameterError("r_p must be > 0")
        if self.tmr <= 0:
            raise ParameterError("tmr must be > 0")
        if not self.r_p < self.r_ref < self.r_ap:
            raise ParameterError("r_ref must lie strictly between R_P and R_AP")
        if self.v_read < 0:
            raise ParameterError("v_read must be >= 0")
        if self.t_read <= 0:
            raise ParameterError("t_read must be > 0")

    @property
    def r_ap(self) -> float:
        return self.r_p * (1.0 + self.tmr)


@dataclass(frozen=True)
class MeCapacitor:
    """Write-port capacitor formed by the drive oxide under the free layer."""

    area: float      # m^2
    t_me: float      # m
    eps_r: float

    def __post_init__(self):
        if self.area <= 0 or self.t_me <= 0 or self.eps_r <= 0:
            raise ParameterError("capacitor geometry values must be > 0")

    @property
    def capacitance(self) -> float:
        return EPS0 * self.eps_r * self.area / self.t_me


def me_capacitance(length: float, width: float, t_me: float, eps_r: float) -> float:
    """Parallel-plate capacitance of the write port, farads."""
    if length <= 0 or width <= 0:
        raise ParameterError("plate dimensions must be > 0")
    return MeCapacitor(area=length * width, t_me=t_me, eps_r=eps_r).capacitance


def mtj_resistance(m_x: float, params: MtjParams) -> float:
    """Device resistance as a function of the easy-axis projection m_x."""
    if abs(m_x) > 1.0:
        raise ParameterError("m_x must be within [-1, 1]")
    g_p = 1.0 / params.r_p
    g_ap = 1.0 / params.r_ap
    g = g_p * (1.0 + m_x) / 2.0 + g_ap * (1.0 - m_x) / 2.0
    return 1.0 / g


def read_voltage(r_device: float, params: MtjParams) -> float:
    """Node-M voltage of the read divider (device to ground)."""
    if r_device <= 0:
        raise ParameterError("r_device must be > 0")
    return params.v_read * r_device / (r_device + params.r_ref)


def sense(v_node: float, vdd: float) -> int:
    """Clocked comparator at vdd/2 followed by the inverter.

    A tie at exactly vdd/2 resolves to 0. Parallel state (node M below
    mid-rail) senses as 1.
    """
    if not 0.0 <= v_node <= vdd:
        raise ParameterError("v_node must be within [0, vdd]")
    return 0 if v_node >= vdd / 2.0 else 1


def read_energy(r_device: float, params: MtjParams) -> float:
    """Static divider dissipation over one read window, joules."""
    if r_device <= 0:
        raise ParameterError("r_device must be > 0")
    return params.v_read ** 2 / (r_device + params.r_ref) * params.t_read


def reset_energy(me_cap: MeCapacitor, vdd: float) -> float:
    """Energy to cycle the write capacitor once at full swing, joules."""
    if vdd < 0:
        raise ParameterError("vdd must be >= 0")
    return me_cap.capacitance * vdd ** 2
