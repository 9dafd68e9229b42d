"""Magnetodynamics: fields, demag factors, integrator, trajectories."""

from math import sqrt

import numpy as np
import pytest

from melink import _kernels
from melink.constants import MU0
from melink.errors import ParameterError
from melink.magnet import (
    MagnetParams,
    SpinState,
    demag_factors,
    effective_field,
    energy_density,
    heun_step,
    llg_rhs,
    simulate_trajectory,
    thermal_field_sample,
    thermal_sigma,
    tilted_state,
)

import oracles

# regression constants for the default 112.5 x 45 x 2.5 nm prism, computed
# once by quadrature of the magnetostatic surface-charge kernel
NXX_REF = 0.027618432322
NYY_REF = 0.071392881273
NZZ_REF = 0.900988686405

# direct evaluation of the thermal-field expression at 300 K, default magnet,
# dt = 0.1 ps
SIGMA_REF = 26580.25684889179
# drive field at 0.2 V across the 5 nm oxide
H_ME_02V_REF = 53051.647668418416


class TestDemagFactors:
    def test_cube_is_one_third(self):
        n = demag_factors((7e-9, 7e-9, 7e-9))
        assert n.nxx == pytest.approx(1 / 3, abs=1e-12)
        assert n.nyy == pytest.approx(1 / 3, abs=1e-12)
        assert n.nzz == pytest.approx(1 / 3, abs=1e-12)

    def test_thin_film_limit(self):
        n = demag_factors((1.0, 1.0, 1e-6))
        assert n.nzz > 0.999
        assert abs(n.nxx) < 1e-3 and abs(n.nyy) < 1e-3
        assert n.nxx == pytest.approx(n.nyy, abs=1e-12)

    def test_default_prism_regression(self):
        n = demag_factors((112.5e-9, 45e-9, 2.5e-9))
        assert n.nxx == pytest.approx(NXX_REF, abs=1e-9)
        assert n.nyy == pytest.approx(NYY_REF, abs=1e-9)
        assert n.nzz == pytest.approx(NZZ_REF, abs=1e-9)
        assert n.nxx + n.nyy + n.nzz == pytest.approx(1.0, abs=1e-9)
        assert n.nzz > n.nyy > n.nxx

    def test_matches_surface_charge_quadrature(self):
        for dims in [(112.5, 45.0, 2.5), (3.0, 2.0, 1.0)]:
            n = demag_factors(dims)
            ref = oracles.demag_factor_quadrature(*dims)
            assert n.nzz == pytest.approx(ref, abs=1e-9)

    def test_closure_and_range_random_geometries(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            dims = 10.0 ** rng.uniform(-9, -6, size=3)
            n = demag_factors(dims)
            assert n.nxx + n.nyy + n.nzz == pytest.approx(1.0, abs=1e-9)
            for v in (n.nxx, n.nyy, n.nzz):
                assert 0.0 < v < 1.0

    def test_cyclic_relabeling(self):
        a, b, c = 5e-9, 3e-9, 2e-9
        n = demag_factors((a, b, c))
        n_cyc = demag_factors((b, c, a))
        assert n_cyc.nxx == pytest.approx(n.nyy, rel=1e-12)
        assert n_cyc.nyy == pytest.approx(n.nzz, rel=1e-12)
        assert n_cyc.nzz == pytest.approx(n.nxx, rel=1e-12)

    def test_rejects_nonpositive_edges(self):
        with pytest.raises(ParameterError):
            demag_factors((0.0, 1e-9, 1e-9))
        with pytest.raises(ParameterError):
            demag_factors((1e-9, -1e-9, 1e-9))


class TestThermalField:
    def test_zero_temperature_gives_zero(self, magnet_cold):
        h = thermal_field_sample(magnet_cold, 1e-13, np.array([0.3, -1.2, 0.7]))
        assert np.all(h == 0.0)

    def test_sigma_scaling_with_dt(self, magnet_params):
        s1 = thermal_sigma(magnet_params, 1e-13)
        s2 = thermal_sigma(magnet_params, 0.5e-13)
        assert s2 == pytest.approx(s1 * sqrt(2.0), rel=1e-12)

    def test_sigma_pinned_value(self, magnet_params):
        assert thermal_sigma(magnet_params, 1e-13) == pytest.approx(
            SIGMA_REF, rel=1e-9)

    def test_rejects_bad_dt(self, magnet_params):
        with pytest.raises(ParameterError):
            thermal_sigma(magnet_params, 0.0)
        with pytest.raises(ParameterError):
            thermal_field_sample(magnet_params, -1e-13, np.zeros(3))

    def test_moment_statistics(self, magnet_params):
        rng = np.random.default_rng(11)
        sigma = thermal_sigma(magnet_params, 1e-13)
        draws = rng.standard_normal((100_000, 3))
        samples = sigma * draws
        for i in range(3):
            assert abs(samples[:, i].mean()) < 0.02 * sigma
            assert samples[:, i].var() == pytest.approx(sigma ** 2, rel=0.05)


class TestEffectiveField:
    def test_plus_x_zero_drive(self, magnet_cold):
        state = SpinState(m=np.array([1.0, 0.0, 0.0]))
        f = effective_field(state, magnet_cold, 0.0)
        n = magnet_cold.demag()
        assert f.total() == pytest.approx(
            np.array([-magnet_cold.ms * n.nxx, 0.0, 0.0]), rel=1e-12)

    def test_drive_linearity(self, magnet_params):
        state = SpinState(m=np.array([0.0, 1.0, 0.0]))
        f1 = effective_field(state, magnet_params, 0.1)
        f2 = effective_field(state, magnet_params, 0.2)
        assert f2.h_me[0] == pytest.approx(2.0 * f1.h_me[0], rel=1e-12)

    def test_drive_exceeds_inplane_shape_field_at_200mv(self, magnet_params):
        state = SpinState(m=np.array([-1.0, 0.0, 0.0]))
        f = effective_field(state, magnet_params, 0.2)
        assert f.h_me[0] == pytest.approx(H_ME_02V_REF, rel=1e-9)
        n = magnet_params.demag()
        hk_inplane = (n.nyy - n.nxx) * magnet_params.ms
        assert f.h_me[0] > hk_inplane

    def test_component_structure(self, magnet_params):
        rng = np.random.default_rng(3)
        for _ in range(50):
            m = rng.standard_normal(3)
            state = SpinState(m=m)
            f = effective_field(state, magnet_params, rng.uniform(-1, 1),
                                thermal=rng.standard_normal(3))
            assert f.h_me[1] == 0.0 and f.h_me[2] == 0.0
            assert f.h_interface[0] == 0.0 and f.h_interface[1] == 0.0
            assert f.total() == pytest.approx(
                f.h_demag + f.h_interface + f.h_thermal + f.h_me)


class TestLlgRhs:
    def test_parallel_field_gives_zero(self):
        m = np.array([0.0, 0.0, 1.0])
        assert np.all(llg_rhs(m, 5e4 * m, alpha=0.03) == 0.0)

    def test_zero_damping_pure_precession(self):
        m = np.array([1.0, 0.0, 0.0])
        h = np.array([0.0, 0.0, 4e4])
        out = llg_rhs(m, h, alpha=0.0)
        gamma_b = 1.76e11 * MU0
        assert out == pytest.approx(-gamma_b * np.cross(m, h), rel=1e-12)
        assert abs(out @ m) < 1e-12 * np.linalg.norm(out)
        assert abs(out @ h) < 1e-12 * np.linalg.norm(out) * np.linalg.norm(h)

    def test_implicit_form_residual(self):
        rng = np.random.default_rng(5)
        gamma_b = 1.76e11 * MU0
        for _ in range(200):
            m = rng.standard_normal(3)
            m /= np.linalg.norm(m)
            h = 1e5 * rng.standard_normal(3)
            alpha = rng.uniform(0.001, 0.5)
            dmdt = llg_rhs(m, h, alpha)
            res = oracles.implicit_llg_residual(m, h, dmdt, alpha, gamma_b)
            scale = gamma_b * np.linalg.norm(h)
            assert np.linalg.norm(res) < 1e-12 * scale

    def test_orthogonality_random(self):
        rng = np.random.default_rng(9)
        for _ in range(1000):
            m = rng.standard_normal(3)
            m /= np.linalg.norm(m)
            h = 1e5 * rng.standard_normal(3)
            out = llg_rhs(m, h, alpha=0.1)
            assert abs(out @ m) <= 1e-12 * max(np.linalg.norm(out), 1.0)


class TestHeunStep:
    def test_cube_zero_drive_is_stationary(self):
        # a cube's demag field is always collinear with m, so nothing moves
        params = MagnetParams(length=10e-9, width=10e-9, thickness=10e-9,
                              ki=0.0, temperature=0.0)
        state = SpinState(m=np.array([0.6, 0.64, 0.48]))
        out = heun_step(state, params, 0.0, 1e-13)
        assert out.m == pytest.approx(state.m, abs=1e-15)
        assert out.t == pytest.approx(1e-13)

    def test_zero_damping_conserves_projection(self, magnet_cold):
        # kernel-level check so damping can be switched off exactly; the
        # drive term provides a constant field of 1e4 A/m along x
        coeff_iso = np.array([0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0,
                              magnet_cold.gamma_b])
        m0 = np.array([sqrt(0.5), 0.0, sqrt(0.5)])
        drive = np.full(10_000, 1e4)
        rec = np.zeros((10_001, 3))
        _kernels.llg_heun_run(m0, drive, None, 0.0, 1e-13, coeff_iso, 0.0,
                              False, rec)
        proj = rec[:, 0]  # field is along x; mx must be conserved
        assert np.max(np.abs(proj - proj[0])) < 1e-6

    def test_matches_rk4_oracle(self, magnet_cold):
        dt = 1e-13
        n_steps = 3000
        state = tilted_state(-1.0, 1.0)
        _, path, _ = simulate_trajectory(state, magnet_cold, 0.2,
                                         n_steps * dt, dt)
        n = magnet_cold.demag()
        hic = magnet_cold.h_interface_coeff()
        hme = magnet_cold.h_me_per_volt() * 0.2

        def field(m):
            return np.array([
                -magnet_cold.ms * n.nxx * m[0] + hme,
                -magnet_cold.ms * n.nyy * m[1],
                (-magnet_cold.ms * n.nzz + hic) * m[2],
            ])

        ref = oracles.rk4_trajectory(state.m, field, magnet_cold.alpha,
                                     magnet_cold.gamma_b, dt / 10.0,
                                     n_steps * 10)
        ref_sub = ref[::10]
        dots = np.clip(np.sum(path * ref_sub, axis=1), -1, 1)
        max_angle = np.degrees(np.max(np.arccos(dots)))
        assert max_angle < 0.1

    def test_second_order_convergence(self, magnet_cold):
        state = tilted_state(-1.0, 1.0)
        duration = 0.2e-9

        def max_err(dt):
            _, path, _ = simulate_trajectory(state, magnet_cold, 0.2,
                                             duration, dt)
            n = magnet_cold.demag()
            hic = magnet_cold.h_interface_coeff()
            hme = magnet_cold.h_me_per_volt() * 0.2

            def field(m):
                return np.array([
                    -magnet_cold.ms * n.nxx * m[0] + hme,
                    -magnet_cold.ms * n.nyy * m[1],
                    (-magnet_cold.ms * n.nzz + hic) * m[2],
                ])

            ref = oracles.rk4_trajectory(state.m, field, magnet_cold.alpha,
                                         magnet_cold.gamma_b, dt / 10.0,
                                         int(round(duration / dt)) * 10)
            dots = np.clip(np.sum(path * ref[::10], axis=1), -1, 1)
            return np.max(np.arccos(dots))

        e_coarse = max_err(4e-13)
        e_fine = max_err(2e-13)
        assert e_coarse / e_fine >= 3.0

    def test_norm_preserved_long_run(self, magnet_params):
        rng = np.random.default_rng(123)
        drive = np.full(20_000, 0.15)
        noise = rng.standard_normal((20_000, 3))
        sigma = thermal_sigma(magnet_params, 1e-13)
        rec = np.zeros((20_001, 3))
        _kernels.llg_heun_run(np.array([-1.0, 0.0, 0.0]), drive, noise, sigma,
                              1e-13, magnet_params.kernel_coeff(), 0.0, False,
                              rec)
        norms = np.linalg.norm(rec, axis=1)
        assert np.max(np.abs(norms - 1.0)) < 1e-9

    def test_dissipation_monotone(self):
        # finite interface anisotropy exercises every energy term
        params = MagnetParams(ki=2e-4, temperature=0.0)
        state = SpinState(m=np.array([-0.9553, 0.2, 0.2185]))
        dt = 1e-13
        _, path, _ = simulate_trajectory(state, params, 0.25, 1e-9, dt)
        e = np.array([energy_density(m, params, 0.25) for m in path])
        scale = np.abs(e).max()
        assert np.all(np.diff(e) <= 1e-9 * scale)

    def test_mirror_symmetry(self, magnet_cold):
        # pi rotation about z: (mx, my, mz, v) -> (-mx, -my, mz, -v)
        dt = 1e-13
        s_fwd = tilted_state(-1.0, 1.0)
        s_rev = SpinState(m=np.array([-s_fwd.m[0], -s_fwd.m[1], s_fwd.m[2]]))
        _, p_fwd, _ = simulate_trajectory(s_fwd, magnet_cold, 0.2, 0.5e-9, dt)
        _, p_rev, _ = simulate_trajectory(s_rev, magnet_cold, -0.2, 0.5e-9, dt)
        assert np.max(np.abs(p_fwd[:, 0] + p_rev[:, 0])) < 1e-9
        assert np.max(np.abs(p_fwd[:, 1] + p_rev[:, 1])) < 1e-9
        assert np.max(np.abs(p_fwd[:, 2] - p_rev[:, 2])) < 1e-9

    def test_rejects_bad_dt(self, magnet_cold):
        with pytest.raises(ParameterError):
            heun_step(SpinState(m=np.array([1.0, 0, 0])), magnet_cold, 0.0, 0.0)

    def test_matches_field_and_rhs_composition(self, magnet_params):
        # one kernel step reproduces the predictor-corrector assembled from
        # the public field coefficients and rate operation with the same
        # thermal sample; the raw (unnormalized) predictor enters the
        # corrector stage exactly as in standard Heun
        rng = np.random.default_rng(55)
        state = SpinState(m=np.array([-0.8, 0.36, 0.48]))
        dt = 1e-13
        v_me = 0.21
        zeta = np.random.default_rng(55).standard_normal(3)
        h_th = thermal_field_sample(magnet_params, dt, zeta)
        n = magnet_params.demag()
        hic = magnet_params.h_interface_coeff()
        hme = magnet_params.h_me_per_volt() * v_me

        def rate(m):
            h = np.array([
                -magnet_params.ms * n.nxx * m[0] + hme,
                -magnet_params.ms * n.nyy * m[1],
                (-magnet_params.ms * n.nzz + hic) * m[2],
            ]) + h_th
            return llg_rhs(m, h, magnet_params.alpha, magnet_params.gamma)

        k1 = rate(state.m)
        mp = state.m + dt * k1
        k2 = rate(mp)
        manual = state.m + 0.5 * dt * (k1 + k2)
        manual /= np.linalg.norm(manual)

        out = heun_step(state, magnet_params, v_me, dt, rng)
        assert out.m == pytest.approx(manual, rel=1e-12, abs=1e-13)


class TestSimulateTrajectory:
    def test_switches_within_500ps_at_200mv(self, magnet_cold):
        state = tilted_state(-1.0, 1.0)
        _, _, t_sw = simulate_trajectory(state, magnet_cold, 0.2, 2e-9, 1e-13)
        assert t_sw is not None and t_sw <= 500e-12

    def test_retention_without_drive(self, magnet_cold):
        state = tilted_state(-1.0, 1.0)
        _, path, t_sw = simulate_trajectory(state, magnet_cold, 0.0, 5e-9, 1e-13)
        assert t_sw is None
        assert path[-1, 0] < -0.99

    def test_reset_sign_symmetry(self, magnet_cold):
        state = tilted_state(+1.0, 1.0)
        _, _, t_sw = simulate_trajectory(state, magnet_cold, -0.2, 2e-9, 1e-13,
                                         threshold=-0.9)
        assert t_sw is not None and t_sw <= 500e-12

    def test_waveform_argument(self, magnet_cold):
        state = tilted_state(-1.0, 1.0)
        wf = lambda t: 0.2 if t < 1e-9 else 0.0
        _, path, t_sw = simulate_trajectory(state, magnet_cold, wf, 1.5e-9, 1e-13)
        assert t_sw is not None

    def test_rejects_bad_duration(self, magnet_cold):
        with pytest.raises(ParameterError):
            simulate_trajectory(tilted_state(), magnet_cold, 0.2, 1e-14, 1e-13)


class TestParamsValidation:
    def test_magnet_params_domain(self):
        with pytest.raises(ParameterError):
            MagnetParams(length=-1e-9)
        with pytest.raises(ParameterError):
            MagnetParams(ms=0.0)
        with pytest.raises(ParameterError):
            MagnetParams(alpha=0.0)
        with pytest.raises(ParameterError):
            MagnetParams(alpha=1.0)
        with pytest.raises(ParameterError):
            MagnetParams(temperature=-1.0)

    def test_volume(self, magnet_params):
        assert magnet_params.volume == pytest.approx(
            112.5e-9 * 45e-9 * 2.5e-9, rel=1e-12)

    def test_spin_state_renormalizes(self):
        s = SpinState(m=np.array([3.0, 0.0, 4.0]))
        assert np.linalg.norm(s.m) == pytest.approx(1.0, abs=1e-12)
        with pytest.raises(ParameterError):
            SpinState(m=np.zeros(3))
