import math

import numpy as np
import pytest

from biphoton_sim import (
    GenerationMode,
    GridError,
    SpectralGrid,
    WaveformKind,
    chi3,
    coincidence_counts,
    eit_absorption_loss,
    gamma12_for_absorption,
    group_delay_estimate,
    kappa,
    psi_analytic_exp,
    psi_analytic_rect,
    psi_full,
    psi_reference,
    psi_uniform_spectrum,
    spectrum_to_waveform,
)
from biphoton_sim.params import DetectionConfig

from conftest import MHZ, make_coupling, make_medium, make_pump

DEG = GenerationMode.DEGENERATE
NONDEG = GenerationMode.NONDEGENERATE


def small_grid(n=2 ** 9, span=20e-6):
    return SpectralGrid.from_numerics(n, span)


class TestChi3:
    def test_dressed_state_poles_for_zero_dephasing(self):
        medium = make_medium(g12_mhz=0.0, g13_mhz=1e-9)
        pump, coupling = make_pump(), make_coupling()
        at_pole = chi3(coupling.peak_rabi / 2.0, 0.0, medium, pump, coupling, DEG)
        off_pole = chi3(coupling.peak_rabi / 4.0, 0.0, medium, pump, coupling, DEG)
        assert abs(at_pole) > 1e4 * abs(off_pole)

    def test_pump_detuning_halves_magnitude(self):
        medium = make_medium(g14_mhz=0.003)  # gamma14 << Delta_p
        pump = make_pump(det_mhz=200.0)
        pump2 = make_pump(det_mhz=400.0)
        coupling = make_coupling(rabi_mhz=12.2)
        v1 = chi3(0.0, 0.0, medium, pump, coupling, NONDEG)
        v2 = chi3(0.0, 0.0, medium, pump2, coupling, NONDEG)
        assert abs(v2) == pytest.approx(abs(v1) / 2.0, rel=1e-3)

    def test_high_precision_oracle_value(self):
        # frozen from a 50-digit mpmath evaluation at omega=0, z=0 with the
        # degenerate operating point (Delta_p = 2pi 6.8 GHz, Omega_c = 2pi
        # 14.5 MHz, gamma12 pinned to alpha L = 0.017, upper dephasing gamma13)
        medium = make_medium(od=150.0, g12_mhz=0.0039722893)
        pump, coupling = make_pump(det_mhz=6800.0), make_coupling(rabi_mhz=14.5)
        val = chi3(0.0, 0.0, medium, pump, coupling, DEG)
        assert val.real == pytest.approx(2.8191419361964214e-27, rel=1e-12)
        assert val.imag == pytest.approx(-1.2437390894984212e-30, rel=1e-12)

    def test_scale_is_linear(self):
        medium = make_medium()
        pump, coupling = make_pump(), make_coupling()
        v1 = chi3(MHZ, 0.0, medium, pump, coupling, DEG, scale=1.0)
        v2 = chi3(MHZ, 0.0, medium, pump, coupling, DEG, scale=3.5)
        assert v2 == pytest.approx(3.5 * v1, rel=1e-12)


class TestKappa:
    def test_detuning_symmetry_exact(self):
        medium = make_medium()
        pump, coupling = make_pump(), make_coupling()
        omega = (np.arange(512) - 256) * (0.1 * MHZ)
        val = kappa(omega, 0.2 * medium.length, medium, pump, coupling, DEG).value
        mirrored = val[1:][::-1]
        assert np.all(val[1:] == mirrored)

    def test_flat_beams_are_position_independent(self):
        medium = make_medium(theta_deg=0.0)
        pump, coupling = make_pump(), make_coupling()
        v0 = kappa(2.0 * MHZ, 0.0, medium, pump, coupling, DEG).value
        v1 = kappa(2.0 * MHZ, 0.4 * medium.length, medium, pump, coupling, DEG).value
        assert v0 == v1

    def test_dressed_state_suppression_ratio(self):
        # the symmetrized sum nearly cancels at the dressed-state resonance;
        # ratio frozen from a 50-digit evaluation of the closed form
        medium = make_medium(od=150.0, g12_mhz=0.0039722893, theta_deg=0.0)
        pump, coupling = make_pump(), make_coupling(rabi_mhz=14.5)
        center = kappa(0.0, 0.0, medium, pump, coupling, DEG).value
        pole = kappa(coupling.peak_rabi / 2.0, 0.0, medium, pump, coupling, DEG).value
        assert abs(pole) / abs(center) == pytest.approx(0.0013208959303597165,
                                                        rel=1e-9)


class TestSpectralTransform:
    def test_grid_validation(self):
        with pytest.raises(ValueError):
            SpectralGrid.from_numerics(1000, 20e-6)  # not a power of two
        with pytest.raises(ValueError):
            SpectralGrid.from_numerics(1024, -1.0)

    def test_tau_grid_relation(self):
        grid = small_grid(n=2 ** 10, span=20e-6)
        assert grid.d_tau == pytest.approx(2.0 * math.pi / (grid.n * grid.d_omega),
                                           rel=1e-15)
        assert grid.tau[grid.n // 2] == 0.0

    def test_transform_matches_direct_sum(self):
        rng = np.random.default_rng(7)
        grid = small_grid(n=2 ** 8, span=4e-6)
        spec = rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n)
        wave = spectrum_to_waveform(grid, spec, WaveformKind.UNIFORM_SPECTRAL)
        direct = np.array([
            np.sum(spec * np.exp(-1j * grid.omega * t)) for t in grid.tau
        ]) * grid.d_omega / (2.0 * math.pi)
        assert np.allclose(wave.amplitude, direct, rtol=1e-9, atol=1e-12)

    def test_parseval(self):
        medium = make_medium()
        pump, coupling = make_pump(), make_coupling()
        grid = small_grid(n=2 ** 10)
        spec = psi_uniform_spectrum(grid, medium, pump, coupling, DEG)
        wave = spectrum_to_waveform(grid, spec, WaveformKind.UNIFORM_SPECTRAL)
        e_tau = np.sum(np.abs(wave.amplitude) ** 2) * grid.d_tau
        e_omega = np.sum(np.abs(spec) ** 2) * grid.d_omega / (2.0 * math.pi)
        assert abs(e_tau - e_omega) / e_omega < 1e-6


class TestPsiFull:
    def test_matches_slow_reference(self):
        medium = make_medium()
        pump, coupling = make_pump(), make_coupling()
        grid = small_grid(n=2 ** 9)
        fast = psi_full(grid, 128, medium, pump, coupling, DEG)
        slow = psi_reference(grid, 129, medium, pump, coupling, DEG)
        rel = (np.linalg.norm(fast.amplitude - slow.amplitude)
               / np.linalg.norm(slow.amplitude))
        assert rel < 0.01

    def test_matches_reference_nondegenerate(self):
        medium = make_medium(od=88.0, g12_mhz=0.2, theta_deg=3.0)
        pump = make_pump(rabi_mhz=3.6, det_mhz=200.0, waist=2.9e-3, wavelength=780e-9)
        coupling = make_coupling(rabi_mhz=12.2, waist=2.9e-3)
        grid = small_grid(n=2 ** 9)
        fast = psi_full(grid, 128, medium, pump, coupling, NONDEG)
        slow = psi_reference(grid, 129, medium, pump, coupling, NONDEG)
        rel = (np.linalg.norm(fast.amplitude - slow.amplitude)
               / np.linalg.norm(slow.amplitude))
        assert rel < 0.01

    def test_panel_doubling_converges(self):
        medium = make_medium()
        pump, coupling = make_pump(), make_coupling()
        grid = SpectralGrid.from_numerics(2 ** 12, 40e-6)
        coarse = psi_full(grid, 256, medium, pump, coupling, DEG)
        fine = psi_full(grid, 512, medium, pump, coupling, DEG)
        rel = abs(np.linalg.norm(fine.amplitude) - np.linalg.norm(coarse.amplitude))
        assert rel / np.linalg.norm(fine.amplitude) < 0.005

    def test_exchange_symmetry_symmetric_configuration(self):
        # no pump-coupling offset: |psi(tau)| = |psi(-tau)| to grid accuracy
        medium = make_medium()
        pump = make_pump(det_mhz=0.0)
        coupling = make_coupling()
        grid = SpectralGrid.from_numerics(2 ** 12, 40e-6)
        wave = psi_full(grid, 128, medium, pump, coupling, DEG)
        mag = np.abs(wave.amplitude)
        asym = np.max(np.abs(mag[1:] - mag[1:][::-1])) / mag.max()
        assert asym < 1e-9

    def test_thread_count_does_not_change_bytes(self):
        medium = make_medium()
        pump, coupling = make_pump(), make_coupling()
        grid = small_grid(n=2 ** 9)
        serial = psi_full(grid, 128, medium, pump, coupling, DEG, threads=1)
        threaded = psi_full(grid, 128, medium, pump, coupling, DEG, threads=3)
        assert np.all(serial.amplitude == threaded.amplitude)

    def test_nyquist_violation_raises_with_suggestion(self):
        medium = make_medium()
        pump, coupling = make_pump(), make_coupling()
        grid = SpectralGrid.from_numerics(2 ** 10, 1e-3)  # very coarse d_tau
        with pytest.raises(GridError) as err:
            psi_full(grid, 128, medium, pump, coupling, DEG)
        assert err.value.suggested_n_omega is not None
        assert err.value.suggested_n_omega > 2 ** 10

    def test_rejects_bad_z_panels(self):
        medium = make_medium()
        pump, coupling = make_pump(), make_coupling()
        grid = small_grid()
        with pytest.raises(ValueError):
            psi_full(grid, 32, medium, pump, coupling, DEG)
        with pytest.raises(ValueError):
            psi_full(grid, 129, medium, pump, coupling, DEG)

    def test_nondegenerate_width_shrinks_with_loss(self):
        from biphoton_sim import extract_coherence_time

        widths = []
        grid = SpectralGrid.from_numerics(2 ** 13, 40e-6)
        for g12_mhz in (0.004, 0.08, 0.20):
            medium = make_medium(od=88.0, g12_mhz=g12_mhz)
            pump = make_pump(rabi_mhz=3.6, det_mhz=200.0, waist=2.9e-3,
                             wavelength=780e-9)
            coupling = make_coupling(rabi_mhz=12.2, waist=2.9e-3)
            wave = psi_full(grid, 128, medium, pump, coupling, NONDEG, threads=2)
            rep = extract_coherence_time(wave.intensity, wave.tau)
            widths.append(rep.e_inverse_width)
        assert widths[0] > widths[1] > widths[2]


class TestUniformSpectrum:
    def test_flat_beam_route_equivalence(self):
        medium = make_medium(theta_deg=0.0)
        pump, coupling = make_pump(), make_coupling()
        grid = SpectralGrid.from_numerics(2 ** 12, 40e-6)
        spec = psi_uniform_spectrum(grid, medium, pump, coupling, DEG)
        uni = spectrum_to_waveform(grid, spec, WaveformKind.UNIFORM_SPECTRAL)
        full = psi_full(grid, 256, medium, pump, coupling, DEG)
        rel = (np.linalg.norm(full.amplitude - uni.amplitude)
               / np.linalg.norm(uni.amplitude))
        assert rel < 1e-6

    def test_matched_center_magnitude_is_absorption_factor(self):
        # with no pump-coupling offset the mismatch vanishes at line center,
        # so |Phi(0)| = |S(0) / (kappa(0) L)| = exp(-alpha L)
        medium = make_medium(od=88.0, g12_mhz=0.2, theta_deg=0.0)
        pump = make_pump(det_mhz=0.0)
        coupling = make_coupling(rabi_mhz=12.2)
        grid = small_grid(n=2 ** 10)
        spec = psi_uniform_spectrum(grid, medium, pump, coupling, DEG)
        kap0 = kappa(0.0, 0.0, medium, pump, coupling, DEG).value
        phi0 = spec[grid.n // 2] / (kap0 * medium.length)
        alpha_l = eit_absorption_loss(medium, 12.2 * MHZ)
        assert abs(phi0) == pytest.approx(math.exp(-alpha_l), rel=1e-6)

    def test_phase_matching_zeros_at_sinc_roots(self):
        # lossless symmetric case: mismatch = 2 omega / V_g, so |Phi| vanishes
        # near omega_n = n pi V_g / L
        medium = make_medium(g12_mhz=0.0, theta_deg=0.0)
        pump = make_pump(det_mhz=0.0)
        coupling = make_coupling()
        grid = SpectralGrid.from_numerics(2 ** 14, 160e-6)
        spec = psi_uniform_spectrum(grid, medium, pump, coupling, DEG)
        delay = group_delay_estimate(medium, coupling.peak_rabi)
        omega_root = math.pi / delay
        window = (grid.omega > 0.8 * omega_root) & (grid.omega < 1.2 * omega_root)
        dip = grid.omega[window][np.argmin(np.abs(spec[window]))]
        assert dip == pytest.approx(omega_root, rel=0.02)


class TestAnalyticLimits:
    def test_rect_support_and_amplitude(self):
        medium = make_medium(g12_mhz=0.0)
        coupling = make_coupling()
        grid = small_grid(n=2 ** 10)
        wave = psi_analytic_rect(grid, medium, coupling, DEG, kappa0=2.0 + 0j)
        delay = group_delay_estimate(medium, coupling.peak_rabi)
        inside = np.abs(grid.tau) <= delay
        assert np.all(wave.amplitude[~inside] == 0.0)
        assert np.allclose(np.abs(wave.amplitude[inside]), 2.0 * medium.length)

    def test_loss_rescales_amplitude_not_width(self):
        coupling = make_coupling()
        grid = small_grid(n=2 ** 10)
        lossless = make_medium(g12_mhz=0.0)
        lossy_g12 = gamma12_for_absorption(0.85, lossless, coupling.peak_rabi)
        lossy = make_medium(g12_mhz=lossy_g12 / MHZ)
        w0 = psi_analytic_rect(grid, lossless, coupling, DEG, kappa0=1.0)
        w1 = psi_analytic_rect(grid, lossy, coupling, DEG, kappa0=1.0)
        support0 = np.abs(w0.amplitude) > 0
        support1 = np.abs(w1.amplitude) > 0
        assert np.all(support0 == support1)
        ratio = np.max(np.abs(w1.amplitude)) / np.max(np.abs(w0.amplitude))
        assert ratio == pytest.approx(math.exp(-0.85), rel=1e-9)

    def test_rect_magnitude_even_without_offset(self):
        medium = make_medium()
        coupling = make_coupling()
        grid = small_grid(n=2 ** 10)
        wave = psi_analytic_rect(grid, medium, coupling, DEG, kappa0=1.0)
        mag = np.abs(wave.amplitude)
        assert np.all(mag[1:] == mag[1:][::-1])

    def test_rect_rejects_nondegenerate(self):
        with pytest.raises(ValueError):
            psi_analytic_rect(small_grid(), make_medium(), make_coupling(),
                              NONDEG, kappa0=1.0)

    def test_exp_decay_constant(self):
        # alpha = 41.8 1/m and V_g = 3.0e4 m/s give an intensity constant
        # 1/(2 alpha V_g) of 399 ns
        medium = make_medium()
        grid = SpectralGrid.from_numerics(2 ** 12, 8e-6)
        alpha, vg = 41.8, 3.0e4
        wave = psi_analytic_exp(alpha, vg, medium, grid)
        intensity = wave.intensity
        sel = (wave.tau > 0) & (wave.tau < 0.9 * medium.length / vg) & (intensity > 0)
        slope = np.polyfit(wave.tau[sel], np.log(intensity[sel]), 1)[0]
        assert -1.0 / slope == pytest.approx(1.0 / (2 * alpha * vg), rel=1e-6)
        assert -1.0 / slope == pytest.approx(400e-9, rel=0.01)

    def test_exp_lossless_is_flat(self):
        medium = make_medium()
        grid = small_grid(n=2 ** 10, span=8e-6)
        wave = psi_analytic_exp(0.0, 3.0e4, medium, grid)
        support = (wave.tau >= 0) & (wave.tau <= medium.length / 3.0e4)
        assert np.all(wave.amplitude[support] == 1.0)
        assert np.all(wave.amplitude[~support] == 0.0)

    def test_exp_vanishes_outside_medium(self):
        medium = make_medium()
        grid = small_grid(n=2 ** 10, span=8e-6)
        wave = psi_analytic_exp(41.8, 3.0e4, medium, grid)
        beyond = wave.tau > medium.length / 3.0e4
        assert np.all(wave.amplitude[beyond] == 0.0)


class TestCoincidenceCounts:
    def _det(self, floor=0.0):
        return DetectionConfig(duty_cycle=0.04, joint_efficiency=0.049,
                               bin_width=10e-9, collection_time=1200.0,
                               accidental_floor=floor)

    def test_zero_amplitude_gives_floor(self):
        grid = small_grid(n=2 ** 8)
        wave = psi_analytic_exp(0.0, 3.0e4, make_medium(), grid)
        dead = psi_analytic_exp(0.0, 3.0e4, make_medium(), grid)
        object.__setattr__(dead, "amplitude", np.zeros_like(wave.amplitude))
        counts = coincidence_counts(dead, self._det(floor=2.5))
        assert np.all(counts == 2.5)

    def test_linear_in_collection_time(self):
        grid = small_grid(n=2 ** 8)
        wave = psi_analytic_exp(41.8, 3.0e4, make_medium(), grid)
        det1 = self._det()
        det2 = DetectionConfig(duty_cycle=0.04, joint_efficiency=0.049,
                               bin_width=10e-9, collection_time=2400.0)
        assert np.allclose(coincidence_counts(wave, det2),
                           2.0 * coincidence_counts(wave, det1), rtol=1e-12)

    def test_quoted_efficiency_scale(self):
        # eta_d = 4% and eta_c = 4.9% give 1.96e-3 per |psi|^2 dt T unit
        grid = small_grid(n=2 ** 8)
        wave = psi_analytic_exp(0.0, 3.0e4, make_medium(), grid)
        det = DetectionConfig(duty_cycle=0.04, joint_efficiency=0.049,
                              bin_width=1.0, collection_time=1.0)
        counts = coincidence_counts(wave, det)
        peak = counts.max()
        assert peak == pytest.approx(1.96e-3, rel=1e-9)
