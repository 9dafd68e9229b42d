"""Behavioral stand-ins for the two conventional interconnect styles.

These are closed-form models, not transistor simulations: a repeated
full-swing line using the classical repeater-insertion expressions, and a
differential low-swing capacitively driven line with a biased amplifier
receiver. Driver/repeater constants are calibration knobs fixed once against
the 5 mm reference row; see the README calibration notes.
"""

from dataclasses import dataclass
from math import sqrt

from .errors import ParameterError
from .wire import LinkElectrical, WireParams, build_network, delay_50pct, transient_solve

__all__ = [
    "RepeaterParams",
    "AmpParams",
    "fullswing_baseline",
    "lowswing_capacitive_baseline",
]


@dataclass(frozen=True)
class RepeaterParams:
    """Full-swing driver/repeater behavioral constants."""

    r0: float = 2.0e3           # ohm, unit driver resistance
    c0: float = 15e-15          # F, unit driver input capacitance
    count_scale: float = 0.5    # stage-count derating off the delay-optimal point
    size_scale: float = 0.8     # stage-size derating off the delay-optimal point
    activity: float = 0.5       # charging transitions per bit
    vdd: float = 1.0

    def __post_init__(self):
        if self.r0 <= 0 or self.c0 <= 0:
            raise ParameterError("r0 and c0 must be > 0")
        if self.count_scale <= 0 or self.size_scale <= 0:
            raise ParameterError("sizing scales must be > 0")
        if not 0.0 <= self.activity <= 1.0:
            raise ParameterError("activity must be within [0, 1]")


@dataclass(frozen=True)
class AmpParams:
    """Differential receiver behavioral constants."""

    i_bias: float = 14.6e-6     # A, static amplifier bias
    c_in: float = 2e-15         # F, amplifier input capacitance per wire
    t_bit: float = 3.0e-9       # s, bit period converting bias power to energy
    activity: float = 0.5
    vdd: float = 1.0
    cs_ratio: float = 0.5
    r_driver: float = 650.0

    def __post_init__(self):
        if self.i_bias < 0:
            raise ParameterError("i_bias must be >= 0")
        if self.c_in < 0:
            raise ParameterError("c_in must be >= 0")
        if self.t_bit <= 0:
            raise ParameterError("t_bit must be > 0")
        if not 0.0 <= self.activity <= 1.0:
            raise ParameterError("activity must be within [0, 1]")


def _repeated_line_delay(wire: WireParams, rep: RepeaterParams):
    """Classical repeated-line delay with derated stage count and size.

    Returns (delay_s, n_stages, stage_size, total_repeater_cap_F). With zero
    stages the expression reduces to the single-driver lumped estimate.
    """
    r = wire.r_per_mm * 1e3          # ohm/m
    c = wire.c_per_mm * 1e3          # F/m
    length = wire.length_mm * 1e-3   # m
    rw = r * length
    cw = c * length

    k_opt = length * sqrt(0.38 * r * c / (0.69 * rep.r0 * rep.c0))
    h_opt = sqrt(rep.r0 * c / (r * rep.c0))
    k = max(1, round(rep.count_scale * k_opt))
    h = max(1.0, rep.size_scale * h_opt)

    seg_r = rw / k
    seg_c = cw / k
    stage = (
        0.69 * (rep.r0 / h) * (h * rep.c0)
        + 0.69 * (rep.r0 / h) * seg_c
        + 0.38 * seg_r * seg_c
        + 0.69 * seg_r * (h * rep.c0)
    )
    total_rep_cap = k * h * rep.c0
    return k * stage, k, h, total_rep_cap


def fullswing_baseline(wire: WireParams, rep: RepeaterParams | None = None):
    """Energy (fJ/bit/mm) and delay (ns) of the repeated full-swing line."""
    rep = rep or RepeaterParams()
    delay_s, _, _, rep_cap = _repeated_line_delay(wire, rep)
    energy_j = rep.activity * (wire.c_total + rep_cap) * rep.vdd ** 2
    energy_fj_per_mm = energy_j * 1e15 / wire.length_mm
    return energy_fj_per_mm, delay_s * 1e9


def lowswing_capacitive_baseline(wire: WireParams, amp: AmpParams | None = None,
                                 dt: float = 1e-12):
    """Energy (fJ/bit/mm) and delay (ns) of the differential low-swing line.

    The line pair is driven through series capacitors exactly like the main
    link; the delay is the simulated 50% crossing of one wire loaded by the
    amplifier input. Energy combines both wires' source energy per charging
    transition with the receiver's static bias over one bit period.
    """
    amp = amp or AmpParams()
    elec = LinkElectrical.from_wire(
        wire, cs_ratio=amp.cs_ratio, c_l=amp.c_in,
        r_driver=amp.r_driver, vdd=amp.vdd,
    )
    net = build_network(wire, elec)
    duration = max(40.0 * wire.r_total * wire.c_total, 200 * dt)
    res = transient_solve(net, amp.vdd, dt, duration)
    delay_s = delay_50pct(res)

    c_eff = elec.c_s * (wire.c_total + elec.c_l) / (elec.c_s + wire.c_total + elec.c_l)
    line_j = amp.activity * 2.0 * c_eff * amp.vdd ** 2
    static_j = amp.i_bias * amp.vdd * amp.t_bit
    energy_fj_per_mm = (line_j + static_j) * 1e15 / wire.length_mm
    return energy_fj_per_mm, delay_s * 1e9
