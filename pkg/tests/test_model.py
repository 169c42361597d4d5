import numpy as np
import pytest

from omring import (
    ConvergenceError,
    DeviceParams,
    PumpDrive,
    cancellation_drive,
    linearize,
    steady_state_pump,
)


def make_params(**kw):
    defaults = dict(omega_m=20.0, kappa=1.0, kappa_prime=0.0, kappa_in=1.0,
                    gamma_m=0.0, g0=0.0, beta=0j, delta0=-20.0)
    defaults.update(kw)
    return DeviceParams(**defaults)


class TestValidation:
    def test_negative_rate_rejected(self):
        with pytest.raises(ValueError):
            make_params(kappa=-1.0)
        with pytest.raises(ValueError):
            make_params(gamma_m=-0.1)

    def test_omega_m_positive(self):
        with pytest.raises(ValueError):
            make_params(omega_m=0.0)

    def test_total_decay_positive(self):
        with pytest.raises(ValueError):
            DeviceParams(omega_m=1.0, kappa=0.0, kappa_prime=0.0, kappa_in=0.0)

    def test_overdamped_mechanics_warns(self):
        with pytest.warns(UserWarning):
            make_params(gamma_m=5.0)

    def test_kappa_t(self):
        p = make_params(kappa_prime=0.5, kappa_in=0.25)
        assert p.kappa_t == pytest.approx(1.75)

    def test_drive_must_be_finite(self):
        with pytest.raises(ValueError):
            PumpDrive(amplitude_right=complex("inf"))


class TestSteadyStatePump:
    def test_undriven_system_is_empty(self):
        pump = steady_state_pump(make_params(), PumpDrive(0j, 0j))
        assert pump.alpha_r == 0 and pump.alpha_l == 0
        assert pump.b_static == 0.0

    def test_no_backscatter_leaves_left_mode_empty(self):
        p = make_params(beta=0j, delta0=-20.0)
        pump = steady_state_pump(p, PumpDrive(1.0))
        assert pump.alpha_l == 0
        expected = 2 * p.kappa / (1j * p.delta0 - p.kappa_t)
        assert pump.alpha_r == pytest.approx(expected)

    def test_backscatter_ratio_at_zero_detuning(self):
        # beta = 4 kappa, kappa_t = 2 kappa, delta = 0: |a_L/a_R| = 4/2 = 2
        p = make_params(beta=4.0 + 0j, delta0=0.0)
        pump = steady_state_pump(p, PumpDrive(1.0))
        assert abs(pump.alpha_l / pump.alpha_r) == pytest.approx(2.0, rel=1e-12)

    def test_ratio_law_randomized(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            beta = complex(*rng.uniform(-10, 10, 2))
            delta = rng.uniform(-50, 50)
            kappa_in = rng.uniform(0, 3)
            kappa_prime = rng.uniform(0, 3)
            p = make_params(beta=beta, delta0=delta, kappa_in=kappa_in,
                            kappa_prime=kappa_prime)
            pump = steady_state_pump(p, PumpDrive(1.0))
            expected = abs(beta) / np.hypot(delta, p.kappa_t)
            assert abs(pump.alpha_l / pump.alpha_r) == pytest.approx(expected, rel=1e-12)

    def test_two_sided_drive_satisfies_equations(self):
        p = make_params(beta=2.0 - 1.5j, delta0=-7.0, kappa_in=0.3)
        drive = PumpDrive(1.3 + 0.2j, -0.4 + 0.9j)
        pump = steady_state_pump(p, drive)
        d = 1j * p.delta0 - p.kappa_t
        beta = complex(p.beta)
        res_r = d * pump.alpha_r - 1j * beta.conjugate() * pump.alpha_l \
            - 2 * p.kappa * drive.amplitude_right
        res_l = d * pump.alpha_l - 1j * beta * pump.alpha_r \
            - 2 * p.kappa * drive.amplitude_left
        assert abs(res_r) < 1e-12 * abs(pump.alpha_r)
        assert abs(res_l) < 1e-12 * abs(pump.alpha_r)

    def test_scaling_linearity_in_drive(self):
        p = make_params(beta=1.0 + 0.5j, delta0=-4.0)
        one = steady_state_pump(p, PumpDrive(1.0))
        two = steady_state_pump(p, PumpDrive(2.0))
        assert two.alpha_r == pytest.approx(2 * one.alpha_r, rel=1e-14)
        assert two.alpha_l == pytest.approx(2 * one.alpha_l, rel=1e-14)

    def test_static_shift_identities(self):
        p = make_params(g0=0.02, delta0=-20.0)
        pump = steady_state_pump(p, PumpDrive(3.0), detuning="bare")
        n = abs(pump.alpha_r) ** 2 + abs(pump.alpha_l) ** 2
        assert pump.b_static == pytest.approx(-p.g0 * n / p.omega_m, rel=1e-12)
        assert pump.delta == pytest.approx(
            p.delta0 + 2 * p.g0 ** 2 * n / p.omega_m, rel=1e-12)

    def test_shifted_mode_takes_delta_as_given(self):
        p = make_params(g0=0.05, delta0=-20.0)
        pump = steady_state_pump(p, PumpDrive(3.0), detuning="shifted")
        assert pump.delta == p.delta0

    def test_bare_mode_converges_to_fixed_point(self):
        p = make_params(g0=0.01, beta=1.0 + 0j, delta0=-20.0)
        pump = steady_state_pump(p, PumpDrive(5.0), detuning="bare")
        again = steady_state_pump(p.with_delta0(pump.delta), PumpDrive(5.0),
                                  detuning="shifted")
        assert pump.alpha_r == pytest.approx(again.alpha_r, rel=1e-10)

    def test_bare_mode_nonconvergence_reported(self):
        # huge single-photon coupling drives the fixed point into oscillation
        p = make_params(g0=5.0, delta0=-1.0, omega_m=1.0)
        with pytest.raises(ConvergenceError):
            steady_state_pump(p, PumpDrive(100.0), detuning="bare")

    def test_bad_mode_rejected(self):
        with pytest.raises(ValueError):
            steady_state_pump(make_params(), PumpDrive(1.0), detuning="lab")


class TestCancellationDrive:
    def test_zero_backscatter_needs_no_cancellation(self):
        assert cancellation_drive(make_params(beta=0j), 1.0) == 0

    def test_frozen_value(self):
        # beta = 4, delta = -20, kappa_t = 2: E' = -4i/(-20i - 2) = (80 + 8i)/404
        p = make_params(beta=4.0 + 0j, delta0=-20.0)
        assert cancellation_drive(p, 1.0) == pytest.approx((80 + 8j) / 404, rel=1e-14)

    def test_round_trip_empties_left_mode(self):
        rng = np.random.default_rng(21)
        for _ in range(50):
            p = make_params(
                beta=complex(*rng.uniform(-8, 8, 2)),
                delta0=rng.uniform(-40, 40),
                kappa_in=rng.uniform(0, 2),
            )
            e_left = cancellation_drive(p, 1.0)
            pump = steady_state_pump(p, PumpDrive(1.0, e_left))
            assert abs(pump.alpha_l) < 1e-12 * abs(pump.alpha_r)
            expected_r = 2 * p.kappa / (1j * p.delta0 - p.kappa_t)
            assert pump.alpha_r == pytest.approx(expected_r, rel=1e-12)


class TestLinearize:
    def test_no_optomechanics_is_reciprocal(self):
        p = make_params(g0=0.0)
        model = linearize(p, steady_state_pump(p, PumpDrive(1.0)))
        assert model.g_r == 0 and model.g_l == 0

    def test_couplings_and_rates_copied(self):
        p = make_params(g0=0.003, beta=0.5 + 0j, kappa_prime=0.2, gamma_m=0.01)
        pump = steady_state_pump(p, PumpDrive(2.0))
        model = linearize(p, pump)
        assert model.g_r == pytest.approx(p.g0 * pump.alpha_r)
        assert model.g_l == pytest.approx(p.g0 * pump.alpha_l)
        assert model.delta == pump.delta
        assert (model.kappa, model.kappa_prime, model.kappa_in, model.gamma_m) == (
            p.kappa, p.kappa_prime, p.kappa_in, p.gamma_m)

    def test_coupling_ratio_matches_pump_ratio(self):
        p = make_params(g0=0.002, beta=3.0 + 1.0j, delta0=-20.0)
        model = linearize(p, steady_state_pump(p, PumpDrive(1.0)))
        expected = abs(p.beta) / np.hypot(p.delta0, p.kappa_t)
        assert abs(model.g_l / model.g_r) == pytest.approx(expected, rel=1e-12)

    def test_single_sided_no_backscatter_gives_g_l_zero(self):
        p = make_params(g0=0.01, beta=0j)
        model = linearize(p, steady_state_pump(p, PumpDrive(1.0, 0j)))
        assert model.g_l == 0

    def test_measured_enhanced_coupling_in_hz(self):
        # g0/2pi = 3.4 kHz with |alpha| = 11.4 MHz / 3.4 kHz gives |G|/2pi = 11.4 MHz
        p = DeviceParams.from_hz(omega_m=78e6, kappa=7.1e6, g0=3.4e3, delta0=-78e6)
        alpha = 11.4e6 / 3.4e3
        from omring import PumpSteadyState

        model = linearize(p, PumpSteadyState(alpha, 0j, 0.0, p.delta0))
        g_hz = abs(model.g_r) * p.rate_scale / (2 * np.pi)
        assert g_hz == pytest.approx(11.4e6, rel=1e-12)
        assert abs(model.g_r) > p.kappa_t  # strong coupling


class TestFromHz:
    def test_normalizes_by_kappa(self):
        p = DeviceParams.from_hz(omega_m=78e6, kappa=7.1e6, kappa_in=3.55e6,
                                 gamma_m=780.0)
        assert p.kappa == 1.0
        assert p.kappa_in == pytest.approx(0.5)
        assert p.omega_m == pytest.approx(78 / 7.1)
        assert p.rate_scale == pytest.approx(2 * np.pi * 7.1e6)

    def test_requires_positive_kappa(self):
        with pytest.raises(ValueError):
            DeviceParams.from_hz(omega_m=1e6, kappa=0.0)
