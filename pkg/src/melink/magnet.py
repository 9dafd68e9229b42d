"""Mono-domain stochastic magnetization dynamics.

Field model (all fields in A/m):
  demag       -Ms * (Nxx mx, Nyy my, Nzz mz), factors from Aharoni's
              closed-form expressions for a rectangular prism
              (J. Appl. Phys. 83, 3432 (1998))
  interface   (0, 0, 2 Ki / (mu0 Ms t_fl) * mz)
  thermal     zeta_i * sqrt(2 alpha kB T / (gamma_b mu0 Ms V dt))
  drive       (alpha_me * (v / t_me) / mu0, 0, 0)

Precession uses gamma_b = gamma * mu0 so that A/m fields convert directly to
angular rates. Time stepping is stochastic Heun with the same thermal sample
in the predictor and corrector stages (Stratonovich-consistent); the
magnetization is renormalized after every corrector stage.
"""

from dataclasses import dataclass
from math import atan, log, pi, radians, sqrt

import numpy as np

from . import _kernels
from .constants import GAMMA_E, KB, MU0
from .errors import ParameterError

__all__ = [
    "MagnetParams",
    "SpinState",
    "DemagFactors",
    "FieldSample",
    "demag_factors",
    "thermal_sigma",
    "thermal_field_sample",
    "effective_field",
    "llg_rhs",
    "heun_step",
    "simulate_trajectory",
    "energy_density",
    "tilted_state",
]

# detection threshold on mx shared with the harness and link modules
SWITCH_THRESHOLD = 0.9


@dataclass(frozen=True)
class MagnetParams:
    """Geometry, material, and drive constants of the free layer."""

    length: float = 112.5e-9        # m, easy axis (x)
    width: float = 45e-9            # m, in-plane hard axis (y)
    thickness: float = 2.5e-9       # m, out-of-plane (z), t_FL
    ms: float = 1.0e6               # A/m saturation magnetization
    alpha: float = 0.03             # Gilbert damping
    gamma: float = GAMMA_E          # rad/(s*T)
    ki: float = 0.0                 # J/m^2 interfacial anisotropy
    t_me: float = 5e-9              # m, drive-oxide thickness
    alpha_me: float = 0.5 / 3e8     # s/m, magnetoelectric coefficient
    eps_r_me: float = 50.0          # drive-oxide relative permittivity
    temperature: float = 300.0      # K

    def __post_init__(self):
        for name in ("length", "width", "thickness", "t_me"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be > 0")
        if self.ms <= 0:
            raise ParameterError("ms must be > 0")
        if not 0.0 < self.alpha < 1.0:
            raise ParameterError("alpha must be in (0, 1)")
        if self.gamma <= 0:
            raise ParameterError("gamma must be > 0")
        if self.temperature < 0:
            raise ParameterError("temperature must be >= 0")
        if self.alpha_me <= 0:
            raise ParameterError("alpha_me must be > 0")
        if self.eps_r_me <= 0:
            raise ParameterError("eps_r_me must be > 0")
        if self.ki < 0:
            raise ParameterError("ki must be >= 0")

    @property
    def volume(self) -> float:
        """Free-layer volume in m^3."""
        return self.length * self.width * self.thickness

    @property
    def gamma_b(self) -> float:
        """Precession constant for A/m fields, rad/s per A/m."""
        return self.gamma * MU0

    def demag(self) -> "DemagFactors":
        return demag_factors((self.length, self.width, self.thickness))

    def h_interface_coeff(self) -> float:
        """Out-of-plane interface-anisotropy field per unit mz, A/m."""
        return 2.0 * self.ki / (MU0 * self.ms * self.thickness)

    def h_me_per_volt(self) -> float:
        """Drive field along +x per volt across the oxide, A/m per V."""
        return self.alpha_me / (self.t_me * MU0)

    def kernel_coeff(self) -> np.ndarray:
        """Coefficient vector consumed by the integration kernels."""
        n = self.demag()
        return np.array([
            n.nxx, n.nyy, n.nzz, self.ms,
            self.h_interface_coeff(), self.h_me_per_volt(),
            self.alpha, self.gamma_b,
        ])


@dataclass
class SpinState:
    """Unit magnetization vector plus simulation clock."""

    m: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.m = np.asarray(self.m, dtype=float)
        norm = float(np.linalg.norm(self.m))
        if norm == 0.0:
            raise ParameterError("magnetization vector must be nonzero")
        if abs(norm - 1.0) > 1e-9:
            self.m = self.m / norm


@dataclass(frozen=True)
class DemagFactors:
    nxx: float
    nyy: float
    nzz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.nxx, self.nyy, self.nzz])


@dataclass(frozen=True)
class FieldSample:
    """Effective-field decomposition, A/m."""

    h_demag: np.ndarray
    h_interface: np.ndarray
    h_thermal: np.ndarray
    h_me: np.ndarray

    def total(self) -> np.ndarray:
        return self.h_demag + self.h_interface + self.h_thermal + self.h_me


def _aharoni_axis_factor(a: float, b: float, c: float) -> float:
    """Demagnetizing factor along the c edge of an a x b x c prism."""
    r = sqrt(a * a + b * b + c * c)
    rab = sqrt(a * a + b * b)
    rac = sqrt(a * a + c * c)
    rbc = sqrt(b * b + c * c)
    s = (b * b - c * c) / (2 * b * c) * log((r - a) / (r + a))
    s += (a * a - c * c) / (2 * a * c) * log((r - b) / (r + b))
    s += (b / (2 * c)) * log((rab + a) / (rab - a))
    s += (a / (2 * c)) * log((rab + b) / (rab - b))
    s += (c / (2 * a)) * log((rbc - b) / (rbc + b))
    s += (c / (2 * b)) * log((rac - a) / (rac + a))
    s += 2 * atan(a * b / (c * r))
    s += (a ** 3 + b ** 3 - 2 * c ** 3) / (3 * a * b * c)
    s += (a * a + b * b - 2 * c * c) / (3 * a * b * c) * r
    s += (c / (a * b)) * (rac + rbc)
    s -= (rab ** 3 + rbc ** 3 + rac ** 3) / (3 * a * b * c)
    return s / pi


def demag_factors(geometry) -> DemagFactors:
    """Demagnetizing factors of a rectangular prism with the given edges.

    geometry: (lx, ly, lz) edge lengths in meters (any common unit works,
    the result is scale-invariant). Factors satisfy Nxx + Nyy + Nzz = 1.
    """
    lx, ly, lz = (float(v) for v in geometry)
    if lx <= 0 or ly <= 0 or lz <= 0:
        raise ParameterError("prism edges must be > 0")
    nxx = _aharoni_axis_factor(ly, lz, lx)
    nyy = _aharoni_axis_factor(lz, lx, ly)
    nzz = _aharoni_axis_factor(lx, ly, lz)
    return DemagFactors(nxx, nyy, nzz)


def thermal_sigma(params: MagnetParams, dt: float) -> float:
    """Per-step thermal field standard deviation, A/m."""
    if dt <= 0:
        raise ParameterError("dt must be > 0")
    if params.temperature == 0.0:
        return 0.0
    return sqrt(
        2.0 * params.alpha * KB * params.temperature
        / (params.gamma_b * MU0 * params.ms * params.volume * dt)
    )


def thermal_field_sample(params: MagnetParams, dt: float, rng_draw) -> np.ndarray:
    """Thermal field vector for one step from three standard normal draws."""
    zeta = np.asarray(rng_draw, dtype=float)
    if zeta.shape != (3,):
        raise ParameterError("rng_draw must be three standard normal variates")
    return thermal_sigma(params, dt) * zeta


def effective_field(state: SpinState, params: MagnetParams, v_me: float,
                    thermal=None) -> FieldSample:
    """Assemble the effective-field sample at the given magnetization."""
    m = state.m
    n = params.demag()
    h_demag = -params.ms * np.array([n.nxx * m[0], n.nyy * m[1], n.nzz * m[2]])
    h_interface = np.array([0.0, 0.0, params.h_interface_coeff() * m[2]])
    h_me = np.array([params.h_me_per_volt() * v_me, 0.0, 0.0])
    if thermal is None:
        h_thermal = np.zeros(3)
    else:
        h_thermal = np.asarray(thermal, dtype=float)
    return FieldSample(h_demag, h_interface, h_thermal, h_me)


def llg_rhs(m, h_eff, alpha: float, gamma: float = GAMMA_E) -> np.ndarray:
    """Explicit (Landau-Lifshitz) form of the damped precession rate, 1/s.

    dm/dt = -gamma_b/(1+alpha^2) * (m x h + alpha m x (m x h)), gamma_b =
    gamma*mu0. Output is orthogonal to m.
    """
    m = np.asarray(m, dtype=float)
    h = np.asarray(h_eff, dtype=float)
    gamma_b = gamma * MU0
    mxh = np.cross(m, h)
    mxmxh = np.cross(m, mxh)
    return -(gamma_b / (1.0 + alpha * alpha)) * (mxh + alpha * mxmxh)


def heun_step(state: SpinState, params: MagnetParams, v_me: float, dt: float,
              rng=None) -> SpinState:
    """One predictor-corrector step; same thermal sample in both stages."""
    if dt <= 0:
        raise ParameterError("dt must be > 0")
    if params.temperature > 0.0:
        if rng is None:
            raise ParameterError("rng required at T > 0")
        noise = rng.standard_normal((1, 3))
        sigma = thermal_sigma(params, dt)
    else:
        noise = None
        sigma = 0.0
    drive = np.array([v_me], dtype=float)
    m_new, _ = _kernels.llg_heun_run(
        state.m, drive, noise, sigma, dt, params.kernel_coeff(),
        0.0, False, None,
    )
    return SpinState(m=m_new, t=state.t + dt)


def tilted_state(sign: float = -1.0, tilt_deg: float = 1.0, t: float = 0.0) -> SpinState:
    """Easy-axis state at sign*x with a polar tilt toward +z.

    Deterministic (T = 0) runs start here: the exact easy-axis orientation is
    a fixed point under a collinear drive, so a small tilt is needed to break
    stagnation. Thermal runs start on-axis and let noise do it.
    """
    th = radians(tilt_deg)
    return SpinState(m=np.array([sign * np.cos(th), 0.0, np.sin(th)]), t=t)


def simulate_trajectory(initial: SpinState, params: MagnetParams,
                        v_me_waveform, duration: float, dt: float, rng=None,
                        threshold: float = SWITCH_THRESHOLD):
    """Integrate and record the trajectory; detect the threshold crossing.

    v_me_waveform: either a scalar (constant drive) or a callable t -> volts
    sampled at the left edge of every step. Returns (times, m_path,
    switch_time) where switch_time is the first time |threshold| is crossed
    in the drive direction (sign of threshold), or None.
    """
    if dt <= 0:
        raise ParameterError("dt must be > 0")
    if duration < dt:
        raise ParameterError("duration must be >= dt")
    n_steps = int(round(duration / dt))
    if callable(v_me_waveform):
        drive = np.array([v_me_waveform(initial.t + k * dt) for k in range(n_steps)])
    else:
        drive = np.full(n_steps, float(v_me_waveform))
    if params.temperature > 0.0:
        if rng is None:
            raise ParameterError("rng required at T > 0")
        noise = rng.standard_normal((n_steps, 3))
        sigma = thermal_sigma(params, dt)
    else:
        noise = None
        sigma = 0.0
    record = np.zeros((n_steps + 1, 3))
    _, cross = _kernels.llg_heun_run(
        initial.m, drive, noise, sigma, dt, params.kernel_coeff(),
        float(threshold), False, record,
    )
    times = initial.t + dt * np.arange(n_steps + 1)
    switch_time = None if cross < 0 else initial.t + cross * dt
    return times, record, switch_time


def energy_density(m, params: MagnetParams, v_me: float) -> float:
    """Magnetic energy density (J/m^3): shape + interface + drive Zeeman.

    The corresponding field is h = -(1/(mu0 Ms)) dE/dm, consistent with
    effective_field; used by the dissipation property checks.
    """
    m = np.asarray(m, dtype=float)
    n = params.demag()
    e_demag = 0.5 * MU0 * params.ms ** 2 * (
        n.nxx * m[0] ** 2 + n.nyy * m[1] ** 2 + n.nzz * m[2] ** 2
    )
    e_interface = -(params.ki / params.thickness) * m[2] ** 2
    e_zeeman = -MU0 * params.ms * params.h_me_per_volt() * v_me * m[0]
    return e_demag + e_interface + e_zeeman
