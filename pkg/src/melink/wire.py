"""Capacitively driven distributed-RC wire: network build, transient solve,
delay and energy extraction.

The electrical model is the left half of the link: an ideal voltage source
behind a driver resistance, a series coupling capacitor, a pi-ladder of
n_segments RC sections, and a lumped receiver load at the far end. The
transient uses trapezoidal integration of the tridiagonal MNA system with the
matrix factored once per run, so each step costs O(nodes).
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import MeasurementError, NumericalError, ParameterError

__all__ = [
    "WireParams",
    "LinkElectrical",
    "RcNetwork",
    "TransientResult",
    "divider_estimate",
    "build_network",
    "transient_solve",
    "delay_50pct",
    "source_energy",
]


@dataclass(frozen=True)
class WireParams:
    length_mm: float = 5.0
    r_per_mm: float = 50.0          # ohm/mm
    c_per_mm: float = 0.25e-12      # F/mm (0.25 fF/um)
    n_segments: int = 50

    def __post_init__(self):
        if self.length_mm <= 0:
            raise ParameterError("length_mm must be > 0")
        if self.r_per_mm <= 0 or self.c_per_mm <= 0:
            raise ParameterError("per-length wire constants must be > 0")
        # single-segment lumped networks are allowed for analysis; production
        # configs are held to >= 10 segments at the config layer
        if self.n_segments < 1:
            raise ParameterError("n_segments must be >= 1")

    @property
    def r_total(self) -> float:
        return self.r_per_mm * self.length_mm

    @property
    def c_total(self) -> float:
        return self.c_per_mm * self.length_mm


@dataclass(frozen=True)
class LinkElectrical:
    c_s: float                      # F, series coupling capacitor
    c_l: float                      # F, receiver load
    r_driver: float = 650.0         # ohm
    vdd: float = 1.0                # V

    def __post_init__(self):
        if self.c_s <= 0:
            raise ParameterError("c_s must be > 0")
        if self.c_l < 0:
            raise ParameterError("c_l must be >= 0")
        if self.r_driver <= 0:
            raise ParameterError("r_driver must be > 0")
        if self.vdd <= 0:
            raise ParameterError("vdd must be > 0")

    @classmethod
    def from_wire(cls, wire: WireParams, cs_ratio: float = 0.5, c_l: float = 0.0,
                  r_driver: float = 650.0, vdd: float = 1.0) -> "LinkElectrical":
        """Series capacitor sized as a fraction of the total wire capacitance."""
        if cs_ratio <= 0:
            raise ParameterError("cs_ratio must be > 0")
        return cls(c_s=cs_ratio * wire.c_total, c_l=c_l, r_driver=r_driver, vdd=vdd)


@dataclass(frozen=True)
class RcNetwork:
    """Tridiagonal MNA description: C dv/dt + G v = src * vin(t).

    Node 0 sits between the driver resistance and the series capacitor;
    nodes 1..n_segments+1 are the wire taps, the last carrying the load.
    """

    g_low: np.ndarray
    g_diag: np.ndarray
    g_up: np.ndarray
    c_low: np.ndarray
    c_diag: np.ndarray
    c_up: np.ndarray
    src: np.ndarray
    wire: WireParams
    elec: LinkElectrical

    @property
    def n_nodes(self) -> int:
        return len(self.g_diag)

    def settled_output(self, vin: float) -> float:
        """DC value of the receiving node for a held input (no resistor drop)."""
        return divider_estimate(self.elec.c_s, self.wire.c_total, self.elec.c_l, vin)


def divider_estimate(c_s: float, c_w: float, c_l: float, v_in: float) -> float:
    """Steady-state receiving-end voltage of the capacitive divider."""
    if c_s <= 0:
        raise ParameterError("c_s must be > 0")
    if c_w < 0 or c_l < 0:
        raise ParameterError("capacitances must be >= 0")
    return v_in * c_s / (c_s + c_w + c_l)


def build_network(wire: WireParams, elec: LinkElectrical) -> RcNetwork:
    """Assemble the tridiagonal conductance/capacitance stamps of the link."""
    n_seg = wire.n_segments
    n = n_seg + 2
    g_low = np.zeros(n)
    g_diag = np.zeros(n)
    g_up = np.zeros(n)
    c_low = np.zeros(n)
    c_diag = np.zeros(n)
    c_up = np.zeros(n)

    g_drv = 1.0 / elec.r_driver
    g_diag[0] += g_drv

    # series coupling capacitor between node 0 and node 1
    c_diag[0] += elec.c_s
    c_diag[1] += elec.c_s
    c_up[0] -= elec.c_s
    c_low[1] -= elec.c_s

    r_seg = wire.r_total / n_seg
    c_seg = wire.c_total / n_seg
    g_seg = 1.0 / r_seg
    for k in range(n_seg):
        a, b = 1 + k, 2 + k
        g_diag[a] += g_seg
        g_diag[b] += g_seg
        g_up[a] -= g_seg
        g_low[b] -= g_seg
        c_diag[a] += c_seg / 2.0
        c_diag[b] += c_seg / 2.0

    c_diag[n - 1] += elec.c_l

    src = np.zeros(n)
    src[0] = g_drv
    return RcNetwork(g_low, g_diag, g_up, c_low, c_diag, c_up, src, wire, elec)


@dataclass
class TransientResult:
    times: np.ndarray        # s, uniform grid including t = 0
    voltages: np.ndarray     # (steps+1, n_nodes) V
    vin: np.ndarray          # source voltage at each grid point
    network: RcNetwork

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    @property
    def v_out(self) -> np.ndarray:
        """Receiving-node waveform."""
        return self.voltages[:, -1]

    @property
    def source_current(self) -> np.ndarray:
        return (self.vin - self.voltages[:, 0]) / self.network.elec.r_driver


def transient_solve(network: RcNetwork, input_waveform, dt: float,
                    duration: float) -> TransientResult:
    """Trapezoidal transient of the linear network.

    input_waveform: callable t -> volts, an ndarray of length steps+1 giving
    the source voltage at every grid point, or a scalar for a step applied at
    t = 0+ (vin(0) = 0, vin(t>0) = value).
    """
    if dt <= 0:
        raise ParameterError("dt must be > 0")
    if duration < dt:
        raise ParameterError("duration must be >= dt")
    steps = int(round(duration / dt))
    times = dt * np.arange(steps + 1)
    if callable(input_waveform):
        vin = np.array([float(input_waveform(t)) for t in times])
    elif isinstance(input_waveform, np.ndarray):
        if len(input_waveform) != steps + 1:
            raise ParameterError("input waveform array must match the grid")
        vin = np.asarray(input_waveform, dtype=float)
    else:
        vin = np.full(steps + 1, float(input_waveform))
        vin[0] = 0.0

    half = 0.5
    a_low = network.c_low / dt + half * network.g_low
    a_diag = network.c_diag / dt + half * network.g_diag
    a_up = network.c_up / dt + half * network.g_up
    b_low = network.c_low / dt - half * network.g_low
    b_diag = network.c_diag / dt - half * network.g_diag
    b_up = network.c_up / dt - half * network.g_up

    try:
        cp, denom = _kernels.rc_factor(a_low, a_diag, a_up)
    except ZeroDivisionError as exc:
        raise NumericalError(f"degenerate element values: {exc}") from exc
    if not np.all(np.isfinite(cp)) or not np.all(np.isfinite(denom)):
        raise NumericalError("degenerate element values: non-finite factorization")

    v0 = np.zeros(network.n_nodes)
    voltages = _kernels.rc_trapezoid_run(
        a_low, cp, denom, b_low, b_diag, b_up, network.src, vin, v0,
    )
    if not np.all(np.isfinite(voltages)):
        raise NumericalError("transient solve produced non-finite voltages")
    return TransientResult(times=times, voltages=voltages, vin=vin, network=network)


def delay_50pct(result: TransientResult, input_edge_time: float = 0.0,
                settle_rtol: float = 0.01) -> float:
    """Time from the input edge to the output crossing 50% of its swing.

    The settled level is the capacitive-divider value; a measurement error is
    raised if the waveform has not approached it by the end of the window or
    never crosses the midpoint.
    """
    vset = result.network.settled_output(result.vin[-1])
    vout = result.v_out
    if vset == 0.0:
        raise MeasurementError("settled swing is zero; no delay defined")
    if abs(vout[-1] - vset) > settle_rtol * abs(vset):
        raise MeasurementError("output has not settled within the solve window")
    half = 0.5 * vset
    after = result.times >= input_edge_time
    crossed = after & (vout >= half if vset > 0 else vout <= half)
    idx = np.flatnonzero(crossed)
    if len(idx) == 0:
        raise MeasurementError("output never crossed 50% of its settled swing")
    i = idx[0]
    if i == 0:
        return 0.0
    # linear interpolation between the bracketing samples
    t0, t1 = result.times[i - 1], result.times[i]
    y0, y1 = vout[i - 1], vout[i]
    tc = t0 + (half - y0) / (y1 - y0) * (t1 - t0) if y1 != y0 else t1
    return float(tc - input_edge_time)


def source_energy(result: TransientResult) -> float:
    """Energy delivered by the source, trapezoidal quadrature of v*i."""
    p = result.vin * result.source_current
    return float(np.trapezoid(p, dx=result.dt))


def stored_energy(result: TransientResult, step: int = -1) -> float:
    """Energy held in all capacitors at the given step."""
    net = result.network
    v = result.voltages[step]
    e = 0.5 * net.elec.c_s * (v[0] - v[1]) ** 2
    n_seg = net.wire.n_segments
    c_seg = net.wire.c_total / n_seg
    for k in range(n_seg):
        e += 0.5 * (c_seg / 2.0) * v[1 + k] ** 2
        e += 0.5 * (c_seg / 2.0) * v[2 + k] ** 2
    e += 0.5 * net.elec.c_l * v[-1] ** 2
    return float(e)


def dissipated_energy(result: TransientResult) -> float:
    """Energy burned in the driver and wire resistances over the window."""
    net = result.network
    dt = result.dt
    v = result.voltages
    p = (result.vin - v[:, 0]) ** 2 / net.elec.r_driver
    r_seg = net.wire.r_total / net.wire.n_segments
    for k in range(net.wire.n_segments):
        p = p + (v[:, 1 + k] - v[:, 2 + k]) ** 2 / r_seg
    return float(np.trapezoid(p, dx=dt))


def write_waveform_csv(result: TransientResult, path, include_nodes: bool = False):
    """Emit the transient as CSV: time_ps, v_in_mv, v_me_mv (+ node columns)."""
    from ._csvio import write_csv

    header = ["time_ps", "v_in_mv", "v_me_mv"]
    cols = [result.times * 1e12, result.vin * 1e3, result.v_out * 1e3]
    if include_nodes:
        for j in range(result.network.n_nodes):
            header.append(f"v_node{j}_mv")
            cols.append(result.voltages[:, j] * 1e3)
    write_csv(path, header, zip(*cols))
