"""Command-line front end.

Subcommands map one-to-one onto the headline results: trajectory (reversal
waveform), sweep (switching probability vs drive), link (full co-simulation
waveforms), compare (three-method energy/delay table), variation (electrical
robustness), convergence (integrator validation).

Exit codes: 0 success, 1 simulation or diagnostic failure, 2 usage error.
"""

import sys

import click
import numpy as np

from . import _csvio, harness, link as link_mod
from .config import load_config
from .errors import LinkFailure, MeasurementError, NumericalError, ParameterError
from .magnet import simulate_trajectory, tilted_state

_CONFIG_FLAG_KEYS = {
    "temperature": "magnet.temperature_k",
    "length_mm": "wire.length_mm",
    "vdd": "drive.vdd",
}


def config_options(fn):
    """Shared --config/--set pair; --set overrides any config key."""
    fn = click.option(
        "--set", "set_kv", multiple=True, metavar="KEY=VALUE",
        help="Override any config key, e.g. --set magnet.alpha=0.02.")(fn)
    fn = click.option("--config", "config_path",
                      type=click.Path(exists=True), default=None,
                      help="JSON config file of key overrides.")(fn)
    return fn


def _load(config_path, set_kv=(), **flag_overrides):
    overrides = {}
    for item in set_kv:
        key, sep, value = item.partition("=")
        if not sep:
            raise click.UsageError(f"--set expects KEY=VALUE, got {item!r}")
        overrides[key.strip()] = value.strip()
    for flag, key in _CONFIG_FLAG_KEYS.items():
        val = flag_overrides.get(flag)
        if val is not None:
            overrides[key] = val
    try:
        return load_config(config_path, overrides)
    except (ParameterError, OSError, ValueError) as exc:
        raise click.UsageError(str(exc))


def _fail(msg):
    click.echo(f"error: {msg}", err=True)
    sys.exit(1)


@click.group()
def main():
    """Capacitively driven interconnect with a magnetoelectric MTJ receiver."""


@main.command()
@config_options
@click.option("--v-me", type=float, default=0.2, show_default=True,
              help="Drive voltage across the write capacitor [V].")
@click.option("--duration-ns", type=float, default=1.0, show_default=True)
@click.option("--temperature", type=float, default=None,
              help="Override magnet temperature [K].")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), default="trajectory.csv", show_default=True)
def trajectory(config_path, set_kv, v_me, duration_ns, temperature, seed, out):
    """Single magnetization reversal trace (CSV)."""
    if duration_ns <= 0:
        raise click.UsageError("--duration-ns must be > 0")
    cfg = _load(config_path, set_kv, temperature=temperature)
    params = cfg.magnet_params()
    dt = cfg["sim.dt_llg_ps"] * 1e-12
    thr = cfg["sim.threshold_mx"]
    if params.temperature > 0:
        initial = tilted_state(-1.0 if v_me >= 0 else 1.0, 0.0)
        rng = np.random.default_rng(np.random.SeedSequence(seed))
    else:
        initial = tilted_state(-1.0 if v_me >= 0 else 1.0,
                               cfg["magnet.initial_tilt_deg"])
        rng = None
    try:
        times, path, t_switch = simulate_trajectory(
            initial, params, v_me, duration_ns * 1e-9, dt, rng,
            threshold=thr if v_me >= 0 else -thr)
    except (ParameterError, NumericalError) as exc:
        _fail(exc)
    rows = [(t * 1e12, m[0], m[1], m[2], v_me * 1e3)
            for t, m in zip(times, path)]
    _csvio.write_csv(out, ["time_ps", "mx", "my", "mz", "v_me_mv"], rows)
    if t_switch is not None:
        click.echo(f"threshold crossing at {t_switch*1e12:.1f} ps")
    else:
        click.echo("no threshold crossing within the window")
    click.echo(f"wrote {out}")


@main.command()
@config_options
@click.option("--v-min", type=float, default=0.05, show_default=True)
@click.option("--v-max", type=float, default=0.25, show_default=True)
@click.option("--step", type=float, default=0.025, show_default=True)
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--window-ns", type=float, default=None,
              help="Observation window [ns]; defaults to sim.window_ns.")
@click.option("--temperature", type=float, default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True,
              help="Worker processes; 0 = auto.")
@click.option("--out", type=click.Path(), default="sweep.csv", show_default=True)
def sweep(config_path, set_kv, v_min, v_max, step, trials, window_ns,
          temperature, seed, threads, out):
    """Switching probability versus drive voltage (CSV)."""
    if trials <= 0:
        raise click.UsageError("--trials must be > 0")
    if step <= 0 or v_max < v_min:
        raise click.UsageError("need step > 0 and v-max >= v-min")
    cfg = _load(config_path, set_kv, temperature=temperature)
    window = (window_ns if window_ns is not None else cfg["sim.window_ns"]) * 1e-9
    n = int(round((v_max - v_min) / step)) + 1
    v_values = [v_min + i * step for i in range(n)]
    try:
        res = harness.switching_probability_sweep(
            cfg.magnet_params(), v_values, trials, window, seed,
            dt=cfg["sim.dt_llg_ps"] * 1e-12,
            threshold=cfg["sim.threshold_mx"], threads=threads)
    except (ParameterError, NumericalError) as exc:
        _fail(exc)
    _csvio.write_csv(out, ["v_me_mv", "n_trials", "n_switched", "probability",
                           "ci_low", "ci_high"], res.rows())
    click.echo(f"wrote {out}")


@main.command(name="link")
@config_options
@click.option("--pattern", type=str, default="10110", show_default=True,
              help="Bit pattern, e.g. 10110.")
@click.option("--cycles", type=int, default=None,
              help="Repeat the pattern to this many cycles.")
@click.option("--length-mm", type=float, default=None)
@click.option("--temperature", type=float, default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), default="link.csv", show_default=True)
@click.option("--summary", type=click.Path(), default="link_summary.json",
              show_default=True)
def link(config_path, set_kv, pattern, cycles, length_mm, temperature, seed,
         out, summary):
    """Full link co-simulation: waveform CSV plus summary JSON."""
    if not pattern or any(c not in "01" for c in pattern):
        raise click.UsageError("--pattern must be a non-empty string of 0/1")
    bits = [int(c) for c in pattern]
    if cycles is not None:
        if cycles <= 0:
            raise click.UsageError("--cycles must be > 0")
        reps = (cycles + len(bits) - 1) // len(bits)
        bits = (bits * reps)[:cycles]
    cfg = _load(config_path, set_kv, temperature=temperature,
                length_mm=length_mm)
    lcfg = link_mod.LinkConfig.from_run_config(cfg, seed=seed)
    try:
        trace = link_mod.simulate_link(lcfg, bits, record_waveforms=True)
    except LinkFailure as exc:
        _fail(f"link failure: {exc}")
    except (ParameterError, NumericalError, MeasurementError) as exc:
        _fail(exc)
    wf = trace.waveforms
    out_bit = np.zeros(len(wf["times"]), dtype=int)
    spc = int(round(trace.period / (wf["times"][1] - wf["times"][0])))
    for k, b in enumerate(trace.decoded_bits):
        i1 = (k + 1) * spc - int(round(lcfg.t_reset / (wf["times"][1] - wf["times"][0])))
        out_bit[i1:] = b
    rows = zip(wf["times"] * 1e12, wf["v_in"] * 1e3, wf["v_me"] * 1e3,
               wf["mx"], wf["v_node_m"] * 1e3, out_bit)
    _csvio.write_csv(out, ["time_ps", "v_in_mv", "v_me_mv", "mx",
                           "v_node_m_mv", "v_out_bit"], rows)
    energy = link_mod.energy_per_bit(trace)
    payload = {
        "method": "capacitive_me",
        "length_mm": trace.length_mm,
        "bits_in": "".join(str(b) for b in trace.bits),
        "bits_out": "".join(str(b) for b in trace.output_bits),
        "energy_fj_per_bit_per_mm": energy["total_fj_per_bit_per_mm"],
        "energy_breakdown": energy,
    }
    if any(trace.bits):
        delay = link_mod.propagation_delay(trace)
        payload["delay_ns"] = delay["delay_s"] * 1e9
        payload["delay_breakdown"] = {
            "wire_t50_ns": delay["wire_t50_s"] * 1e9,
            "switching_ns": delay["switching_s"] * 1e9,
            "sense_ns": 0.0,
        }
    _csvio.write_json(summary, payload)
    click.echo(f"wrote {out} and {summary}")


@main.command()
@config_options
@click.option("--lengths", type=str, default="5,10", show_default=True,
              help="Comma-separated wire lengths in mm.")
@click.option("--temperature", type=float, default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), default="compare.json", show_default=True)
@click.option("--csv", "csv_out", type=click.Path(), default=None,
              help="Also emit the table as CSV.")
def compare(config_path, set_kv, lengths, temperature, seed, out, csv_out):
    """Three-method energy/delay comparison table (JSON, optional CSV)."""
    try:
        length_list = [float(s) for s in lengths.split(",") if s.strip()]
    except ValueError:
        raise click.UsageError("--lengths must be comma-separated numbers")
    if not length_list:
        raise click.UsageError("--lengths must name at least one length")
    cfg = _load(config_path, set_kv, temperature=temperature)
    rows = []
    try:
        for length in length_list:
            rows.extend(link_mod.compare_methods(cfg, length_mm=length, seed=seed))
    except LinkFailure as exc:
        _fail(f"link failure: {exc}")
    except (ParameterError, NumericalError, MeasurementError) as exc:
        _fail(exc)
    by_len = {}
    for r in rows:
        by_len.setdefault(r["length_mm"], {})[r["method"]] = r
    ratios = {}
    for length, methods in by_len.items():
        me = methods["capacitive_me"]["energy_fj_per_bit_per_mm"]
        ratios[str(length)] = {
            "full_swing_over_me":
                methods["full_swing_cmos"]["energy_fj_per_bit_per_mm"] / me,
            "low_swing_over_me":
                methods["low_swing_capacitive_cmos"]["energy_fj_per_bit_per_mm"] / me,
        }
    _csvio.write_json(out, {"rows": rows, "energy_ratios": ratios})
    if csv_out:
        _csvio.write_csv(
            csv_out,
            ["length_mm", "method", "energy_fj_per_bit_per_mm", "delay_ns"],
            [(r["length_mm"], r["method"], r["energy_fj_per_bit_per_mm"],
              r["delay_ns"]) for r in rows])
    click.echo(f"wrote {out}")


@main.command()
@config_options
@click.option("--spread", type=float, default=0.2, show_default=True,
              help="Relative half-width of the uniform parameter draws.")
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True,
              help="Worker processes; 0 = auto.")
@click.option("--out", type=click.Path(), default="variation.csv", show_default=True)
def variation(config_path, set_kv, spread, trials, seed, threads, out):
    """Electrical robustness under device variation (CSV, exit 1 on failures)."""
    if trials <= 0:
        raise click.UsageError("--trials must be > 0")
    if not 0.0 <= spread <= 0.5:
        raise click.UsageError("--spread must be within [0, 0.5]")
    cfg = _load(config_path, set_kv)
    try:
        rep = harness.variation_analysis(cfg, spread, trials, seed,
                                         threads=threads)
    except (ParameterError, NumericalError) as exc:
        _fail(exc)
    _csvio.write_csv(out, ["trial", "peak_v_me_mv", "pass"], rep.rows())
    click.echo(f"min peak {rep.min_peak*1e3:.1f} mV, pass rate {rep.pass_rate:.3f}")
    click.echo(f"wrote {out}")
    if rep.pass_rate < 1.0:
        sys.exit(1)


@main.command()
@config_options
@click.option("--dt-ps", type=str, default="0.05,0.1,0.2,0.4", show_default=True,
              help="Comma-separated step sizes [ps].")
@click.option("--v-me", type=float, default=0.2, show_default=True)
@click.option("--out", type=click.Path(), default="convergence.csv", show_default=True)
def convergence(config_path, set_kv, dt_ps, v_me, out):
    """Step-size self-convergence of the deterministic integrator (CSV)."""
    try:
        dts = [float(s) * 1e-12 for s in dt_ps.split(",") if s.strip()]
    except ValueError:
        raise click.UsageError("--dt-ps must be comma-separated numbers")
    if len(dts) < 3:
        raise click.UsageError("--dt-ps needs at least three values")
    cfg = _load(config_path, set_kv)
    from dataclasses import replace
    params = replace(cfg.magnet_params(), temperature=0.0)
    try:
        rows, order = harness.convergence_study(
            params, dts, v_me=v_me, tilt_deg=cfg["magnet.initial_tilt_deg"])
    except (ParameterError, NumericalError) as exc:
        _fail(exc)
    _csvio.write_csv(out, ["dt_ps", "max_angle_error_deg"],
                     [(dt * 1e12, err) for dt, err in rows])
    click.echo(f"observed order {order:.2f}")
    click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
