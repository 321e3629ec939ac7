"""Gaussian packet construction and channel observables."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from excsim import (
    ConfigurationError,
    LatticeParams,
    PacketSpec,
    WaveState,
    channel_populations,
    drift_velocity,
    make_gaussian_packet,
    packet_centroid,
    phase_compensated_difference,
)


class TestSpecValidation:
    def test_bad_sigma(self):
        with pytest.raises(ConfigurationError, match="sigma"):
            PacketSpec(sigma=-1.0)

    def test_bad_channel(self):
        with pytest.raises(ConfigurationError, match="channel"):
            PacketSpec(channel=-1)

    def test_center_out_of_range(self):
        p = LatticeParams(n_sites=64)
        with pytest.raises(ConfigurationError, match="center"):
            make_gaussian_packet(PacketSpec(sigma=4.0, center=64.0, wavenumber=1.0), p)

    def test_center_unset(self):
        p = LatticeParams(n_sites=64)
        with pytest.raises(ConfigurationError, match="center"):
            make_gaussian_packet(PacketSpec(sigma=4.0, center=None, wavenumber=1.0), p)

    def test_channel_beyond_count(self):
        p = LatticeParams(n_sites=64)
        with pytest.raises(ConfigurationError, match="channel"):
            make_gaussian_packet(PacketSpec(sigma=4.0, center=32.0, channel=2), p, n_channels=2)

    def test_sigma_too_wide_for_ring(self):
        p = LatticeParams(n_sites=64)
        with pytest.raises(ConfigurationError, match="sigma"):
            make_gaussian_packet(PacketSpec(sigma=20.0, center=32.0), p)


class TestPacketShape:
    def test_norm_exact(self):
        p = LatticeParams(n_sites=600)
        s = make_gaussian_packet(PacketSpec(sigma=20.0, center=300.0, wavenumber=5.34), p)
        assert s.norm() == pytest.approx(1.0, abs=1e-14)

    def test_other_channel_empty(self):
        p = LatticeParams(n_sites=128)
        s = make_gaussian_packet(PacketSpec(sigma=6.0, center=64.0, channel=0), p)
        assert np.all(s.amplitudes[1] == 0.0)

    def test_envelope_peak_at_center(self):
        p = LatticeParams(n_sites=128)
        s = make_gaussian_packet(PacketSpec(sigma=6.0, center=40.0, wavenumber=2.0), p)
        assert int(np.argmax(np.abs(s.amplitudes[0]))) == 40

    def test_envelope_wraps_periodically(self):
        # centred near the seam: amplitude must be symmetric across it
        p = LatticeParams(n_sites=128)
        s = make_gaussian_packet(PacketSpec(sigma=5.0, center=2.0, wavenumber=0.0), p)
        mags = np.abs(s.amplitudes[0])
        assert mags[4] == pytest.approx(mags[0], rel=1e-12)  # both 2 sites from center
        assert mags[126] == pytest.approx(mags[6], rel=1e-12)  # both 4 sites away

    def test_spectral_peak_at_minus_k0(self):
        # FFT as the independent momentum-space oracle: e^{-i k0 j} peaks at -k0
        p = LatticeParams(n_sites=256)
        m0 = 60
        k0 = 2 * math.pi * m0 / 256
        s = make_gaussian_packet(PacketSpec(sigma=10.0, center=128.0, wavenumber=k0), p)
        spectrum = np.abs(np.fft.fft(s.amplitudes[0])) ** 2
        assert int(np.argmax(spectrum)) == 256 - m0

    def test_spectral_width_matches_sigma(self):
        # |u~(k)|^2 is Gaussian with std 1/(sigma*sqrt(2))
        n, sigma = 512, 16.0
        p = LatticeParams(n_sites=n)
        s = make_gaussian_packet(PacketSpec(sigma=sigma, center=256.0, wavenumber=1.0), p)
        spec = np.abs(np.fft.fft(s.amplitudes[0])) ** 2
        spec /= spec.sum()
        peak = int(np.argmax(spec))
        d = (np.arange(n) - peak + n / 2.0) % n - n / 2.0
        width_idx = math.sqrt(float(np.sum(spec * d * d)))
        expected_idx = n / (2 * math.pi) / (sigma * math.sqrt(2))
        assert width_idx == pytest.approx(expected_idx, rel=0.02)


class TestObservables:
    def test_populations_sum_to_norm(self):
        p = LatticeParams(n_sites=64)
        s = make_gaussian_packet(PacketSpec(sigma=4.0, center=30.0), p, n_channels=3)
        pops = channel_populations(s)
        assert pops.shape == (3,)
        assert pops.sum() == pytest.approx(s.norm(), abs=1e-14)

    def test_centroid_of_delta(self):
        amps = np.zeros((1, 32), dtype=complex)
        amps[0, 7] = 1.0
        assert packet_centroid(WaveState(amplitudes=amps), 0) == pytest.approx(7.0, abs=1e-9)

    def test_centroid_of_gaussian(self):
        p = LatticeParams(n_sites=128)
        s = make_gaussian_packet(PacketSpec(sigma=5.0, center=100.25, wavenumber=1.3), p)
        assert packet_centroid(s, 0) == pytest.approx(100.25, abs=1e-6)

    def test_centroid_across_seam(self):
        p = LatticeParams(n_sites=128)
        s = make_gaussian_packet(PacketSpec(sigma=5.0, center=1.0, wavenumber=0.0), p)
        assert packet_centroid(s, 0) == pytest.approx(1.0, abs=1e-6)

    def test_centroid_empty_channel(self):
        p = LatticeParams(n_sites=64)
        s = make_gaussian_packet(PacketSpec(sigma=4.0, center=32.0, channel=0), p)
        with pytest.raises(ConfigurationError, match="empty"):
            packet_centroid(s, 1)

    def test_centroid_uniform_undefined(self):
        amps = np.full((1, 16), 0.25, dtype=complex)
        with pytest.raises(ConfigurationError, match="centroid"):
            packet_centroid(WaveState(amplitudes=amps), 0)

    def test_phase_difference_zero_for_exact_copy(self):
        p = LatticeParams(n_sites=64)
        s = make_gaussian_packet(PacketSpec(sigma=4.0, center=32.0), p)
        amps = s.amplitudes.copy()
        amps[1] = np.exp(-1j * 0.7) * amps[0]
        both = WaveState(amplitudes=amps)
        assert phase_compensated_difference(both, 0.7) == pytest.approx(0.0, abs=1e-12)
        assert phase_compensated_difference(both, 0.0) > 0.1

    def test_phase_difference_needs_two_channels(self):
        p = LatticeParams(n_sites=64)
        s = make_gaussian_packet(PacketSpec(sigma=4.0, center=32.0), p, n_channels=3)
        with pytest.raises(ConfigurationError, match="2 channels"):
            phase_compensated_difference(s, 0.0)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(min_value=-3.14, max_value=3.14),
           st.floats(min_value=-3.14, max_value=3.14))
    def test_phase_difference_global_phase_invariant(self, phi, g):
        p = LatticeParams(n_sites=48)
        s = make_gaussian_packet(PacketSpec(sigma=3.0, center=24.0, wavenumber=1.0), p)
        amps = s.amplitudes.copy()
        amps[1] = np.exp(-1j * phi) * amps[0]
        base = phase_compensated_difference(WaveState(amplitudes=amps), phi)
        rotated = phase_compensated_difference(WaveState(amplitudes=np.exp(1j * g) * amps), phi)
        assert rotated == pytest.approx(base, abs=1e-12)


class TestDrift:
    def test_free_drift_matches_velocity(self):
        # propagate a free packet and compare centroid motion with drift_velocity
        from excsim import CouplingProfile, IntegratorConfig, evolve
        p = LatticeParams(n_sites=256)
        k0 = 2.2
        s = make_gaussian_packet(PacketSpec(sigma=10.0, center=60.0, wavenumber=k0), p)
        t_end = 40.0
        traj = evolve(s, p, CouplingProfile(kind="zero"),
                      IntegratorConfig(dt=0.01, t_end=t_end))
        c = packet_centroid(traj.final_state, 0)
        expected = (60.0 + drift_velocity(k0, p) * t_end) % 256
        assert c == pytest.approx(expected, abs=0.5)
