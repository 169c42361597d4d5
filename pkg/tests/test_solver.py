import numpy as np
import pytest

from omring import (
    LinearizedModel,
    NumericalError,
    UnstableModelError,
    build_coupling_matrix,
    scattering_matrix,
    stability_check,
    toy_transmission,
    transmission_spectrum,
)

SIGMA = np.zeros((6, 6))
for _i in range(3):
    SIGMA[_i, _i + 3] = SIGMA[_i + 3, _i] = 1.0


def make_model(**kw):
    defaults = dict(g_r=5.0 + 0j, g_l=0j, delta=-20.0, beta=0j, omega_m=20.0,
                    kappa=1.0, kappa_prime=0.0, kappa_in=1.0, gamma_m=0.0)
    defaults.update(kw)
    return LinearizedModel(**defaults)


class TestCouplingMatrix:
    def test_reference_entries(self):
        # (omega_m, G_R, kappa_in, gamma_m) = (20, 5, 1, 0) kappa, delta = -20 kappa
        m = build_coupling_matrix(make_model()).matrix
        assert m[1, 1] == pytest.approx(2.0 + 20.0j)
        assert m[1, 0] == pytest.approx(5.0j)
        assert m[0, 0] == pytest.approx(20.0j)

    def test_backscatter_entries_conjugate(self):
        beta = 2.0 * np.exp(0.7j)
        m = build_coupling_matrix(make_model(beta=beta)).matrix
        assert m[2, 1] == pytest.approx(1j * beta)
        assert m[1, 2] == pytest.approx(1j * np.conj(beta))

    def test_mechanical_damping_is_half_rate(self):
        m = build_coupling_matrix(make_model(gamma_m=0.3)).matrix
        assert m[0, 0] == pytest.approx(0.15 + 20.0j)
        assert m[3, 3] == pytest.approx(0.15 - 20.0j)

    def test_conjugate_sector_symmetry(self):
        m = build_coupling_matrix(
            make_model(g_r=3 + 1j, g_l=0.2 - 0.1j, beta=2 * np.exp(0.3j),
                       gamma_m=0.01, kappa_prime=0.3)
        ).matrix
        np.testing.assert_allclose(m, SIGMA @ np.conj(m) @ SIGMA, atol=1e-15)

    def test_decoupled_blocks_without_pump(self):
        m = build_coupling_matrix(make_model(g_r=0j)).matrix
        mech = np.zeros((6, 6), dtype=bool)
        mech[0, :], mech[:, 0], mech[3, :], mech[:, 3] = True, True, True, True
        mech[0, 0] = mech[3, 3] = False
        assert np.all(m[mech] == 0)

    def test_shape_guard(self):
        from omring import CouplingMatrix

        with pytest.raises(ValueError):
            CouplingMatrix(np.eye(4))


class TestStability:
    def test_unpumped_rates(self):
        report = stability_check(build_coupling_matrix(
            make_model(g_r=0j, gamma_m=0.1)))
        assert report.stable
        re = np.sort(report.eigenvalues.real)
        np.testing.assert_allclose(re[:2], 0.05, atol=1e-12)
        np.testing.assert_allclose(re[2:], 2.0, atol=1e-12)
        assert report.margin == pytest.approx(0.05)

    def test_undamped_mechanics_is_marginal(self):
        report = stability_check(build_coupling_matrix(make_model(g_r=0j)))
        assert not report.stable
        assert report.margin == pytest.approx(0.0, abs=1e-12)

    def test_flip_near_half_mechanical_frequency(self):
        # (omega_m, kappa_t, gamma_m) = (20, 2, 0.01) kappa, pump on red sideband
        def margin(g):
            return stability_check(build_coupling_matrix(
                make_model(g_r=g, gamma_m=0.01))).margin

        gs = np.linspace(8.0, 12.0, 81)
        margins = np.array([margin(g) for g in gs])
        flip = np.argmax(margins < 0)
        assert margins[flip - 1] > 0 > margins[flip]
        g_flip = 0.5 * (gs[flip - 1] + gs[flip])
        assert g_flip == pytest.approx(10.0, rel=0.1)  # omega_m / 2


class TestScattering:
    def test_bare_resonator_is_lorentzian_allpass(self):
        model = make_model(g_r=0j, gamma_m=0.01)
        for delta in (0.0, 0.8, -2.7):
            s = scattering_matrix(model, delta - model.delta)
            expected = (model.kappa_in - model.kappa - 1j * delta) / (
                model.kappa_in + model.kappa - 1j * delta)
            assert s.optical("wg1-R", "wg1-R") == pytest.approx(expected, abs=1e-12)
            assert s.optical("wg1-L", "wg1-L") == pytest.approx(expected, abs=1e-12)

    def test_matches_closed_form_inside_isolation_window(self):
        # counter-rotating corrections stay below 2 kappa/omega_m there
        model = make_model()
        bound = 2.0 * model.kappa / model.omega_m
        for delta in np.linspace(-2, 2, 81):
            s = scattering_matrix(model, delta - model.delta)
            tt = toy_transmission(model.kappa, model.kappa_in, model.gamma_m,
                                  abs(model.g_r), delta)
            assert abs(s.optical("wg1-R", "wg1-R") - tt.t_r) < bound

    def test_add_drop_routing(self):
        model = make_model(kappa_prime=1.0, kappa_in=0.0)
        s = scattering_matrix(model, 0.0 - model.delta)
        assert abs(s.optical("wg2-L", "wg1-L")) == pytest.approx(1.0, abs=1e-12)
        assert abs(s.optical("wg1-R", "wg1-R")) == pytest.approx(
            1.0, abs=2 * model.kappa / model.omega_m)

    def test_chirality_mixing_only_through_backscatter(self):
        s = scattering_matrix(make_model(), 20.0)
        assert s.optical("wg1-L", "wg1-R") == 0
        assert s.optical("wg1-R", "wg1-L") == 0
        s2 = scattering_matrix(make_model(beta=0.5 + 0j), 20.0)
        assert abs(s2.optical("wg1-L", "wg1-R")) > 1e-3

    def test_unstable_model_is_rejected(self):
        with pytest.raises(UnstableModelError):
            scattering_matrix(make_model(g_r=12.0 + 0j), 20.0)

    def test_singular_probe_reports_condition_number(self):
        # near-undamped mechanics probed right on its resonance
        model = make_model(g_r=0j, gamma_m=1e-13)
        with pytest.raises(NumericalError) as info:
            scattering_matrix(model, model.omega_m)
        assert info.value.condition_number > 1e12

    def test_conjugate_pairing_identity(self):
        model = make_model(g_r=3 + 1j, g_l=0.2 - 0.4j, beta=2 * np.exp(0.3j),
                           gamma_m=0.05, kappa_prime=0.4)
        m = build_coupling_matrix(model).matrix
        for omega in (0.3, -4.0, 21.0):
            t_plus = np.linalg.inv(-m + 1j * omega * np.eye(6))
            t_minus = np.linalg.inv(-m - 1j * omega * np.eye(6))
            np.testing.assert_allclose(t_plus, SIGMA @ np.conj(t_minus) @ SIGMA,
                                       atol=1e-12)

    def test_lossless_flux_conservation_in_rwa(self):
        model = make_model(omega_m=200.0, delta=-200.0, kappa_prime=1.0,
                           kappa_in=0.0)
        bound = 5.0 * model.kappa_t / model.omega_m
        for delta in np.linspace(-5, 5, 21):
            s = scattering_matrix(model, delta - model.delta)
            gap = np.abs(s.s_optical.conj().T @ s.s_optical - np.eye(4)).max()
            assert gap < bound

    def test_conjugate_block_small_in_sideband_resolved_regime(self):
        model = make_model(omega_m=200.0, delta=-200.0)
        s = scattering_matrix(model, 0.0 - model.delta)
        assert np.abs(s.s_conjugate).max() < 0.05 * np.abs(s.s_optical).max()


class TestSpectrum:
    def test_empty_grid(self):
        table = transmission_spectrum(make_model(), [], "wg1-R", "wg1-R")
        assert table.rows == []

    def test_weak_backscatter_preserves_diode(self):
        model = make_model(beta=2.0 + 0j)
        table = transmission_spectrum(model, [0.0 - model.delta], "wg1-R", "wg1-R")
        assert table.rows[0][4] > 0.9  # |t_R(0)|^2 near 1
        table_l = transmission_spectrum(model, [0.0 - model.delta], "wg1-L", "wg1-L")
        assert table_l.rows[0][4] < 0.1  # |t_L(0)|^2 near 0

    def test_rows_carry_probe_detuning(self):
        model = make_model()
        table = transmission_spectrum(model, [18.0, 20.0, 22.0], "wg1-R", "wg1-R")
        deltas = [row[1] for row in table.rows]
        assert deltas == pytest.approx([-2.0, 0.0, 2.0])

    def test_failed_point_is_flagged_and_sweep_continues(self):
        model = make_model(g_r=0j, gamma_m=1e-13)
        grid = [model.omega_m - 5.0, model.omega_m, model.omega_m + 5.0]
        table = transmission_spectrum(model, grid, "wg1-R", "wg1-R")
        flags = [row[6] for row in table.rows]
        assert flags == [0.0, 1.0, 0.0]
        assert np.isnan(table.rows[1][2])
        assert np.isfinite(table.rows[0][2])

    def test_unwrap_phase_column(self):
        model = make_model(kappa_in=0.01)
        grid = np.linspace(14.0, 26.0, 401)
        wrapped = transmission_spectrum(model, grid, "wg1-R", "wg1-R")
        unwrapped = transmission_spectrum(model, grid, "wg1-R", "wg1-R", unwrap=True)
        jumps = np.max(np.abs(np.diff([r[5] for r in unwrapped.rows])))
        assert jumps < 1.0
        assert any(abs(a[5] - b[5]) > 1e-9
                   for a, b in zip(wrapped.rows, unwrapped.rows))

    def test_threaded_sweep_matches_serial(self):
        model = make_model(beta=1.0 + 0.5j)
        grid = np.linspace(10.0, 30.0, 51)
        serial = transmission_spectrum(model, grid, "wg1-R", "wg1-R")
        threaded = transmission_spectrum(model, grid, "wg1-R", "wg1-R", threads=4)
        assert serial.rows == threaded.rows
