"""Fixed-step propagation: phase accuracy, norm behaviour, events, sampling."""

import math

import numpy as np
import pytest

from excsim import (
    ConfigurationError,
    CouplingProfile,
    IntegratorConfig,
    LatticeParams,
    PacketSpec,
    SimulationError,
    WaveState,
    dispersion_omega,
    evolve,
    make_gaussian_packet,
    step,
    wavenumber_grid,
)

ZERO = CouplingProfile(kind="zero")


def plane_wave(k, n, channels=1):
    amps = np.zeros((channels, n), dtype=complex)
    amps[0] = np.exp(-1j * k * np.arange(n)) / math.sqrt(n)
    return WaveState(amplitudes=amps)


class TestConfigValidation:
    def test_bad_dt(self):
        with pytest.raises(ConfigurationError, match="dt"):
            IntegratorConfig(dt=0.0, t_end=1.0)

    def test_bad_t_end(self):
        with pytest.raises(ConfigurationError, match="t_end"):
            IntegratorConfig(t_end=-1.0)

    def test_bad_sample_every(self):
        with pytest.raises(ConfigurationError, match="sample_every"):
            IntegratorConfig(t_end=1.0, sample_every=0)


class TestStep:
    def test_single_step_phase(self):
        p = LatticeParams(n_sites=16)
        k = wavenumber_grid(p).wavenumbers[3]
        s = plane_wave(k, 16)
        out = step(s, p, ZERO, 0.01)
        w = dispersion_omega(k, p)
        expected = s.amplitudes * np.exp(-1j * w * 0.01)
        assert out.time == pytest.approx(0.01)
        assert np.allclose(out.amplitudes, expected, atol=1e-12)

    def test_blowup_detected(self):
        # dt far beyond the stability limit makes RK4 diverge; after enough
        # steps the amplitudes overflow to non-finite values
        p = LatticeParams(n_sites=16)
        s = plane_wave(wavenumber_grid(p).wavenumbers[8], 16)
        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(SimulationError, match="non-finite"):
                for _ in range(400):
                    s = step(s, p, ZERO, 50.0)


class TestEvolve:
    def test_eigenstate_phases_all_k(self):
        p = LatticeParams(n_sites=16)
        cfg = IntegratorConfig(dt=0.01, t_end=10.0)
        for k in wavenumber_grid(p).wavenumbers:
            s = plane_wave(k, 16)
            traj = evolve(s, p, ZERO, cfg)
            exact = s.amplitudes * np.exp(-1j * dispersion_omega(k, p) * 10.0)
            err = np.max(np.abs(traj.final_state.amplitudes - exact))
            assert err < 1e-6

    def test_zero_t_end_single_sample(self):
        p = LatticeParams(n_sites=16)
        s = plane_wave(0.5, 16)
        traj = evolve(s, p, ZERO, IntegratorConfig(dt=0.01, t_end=0.0))
        assert len(traj.times) == 1
        assert traj.times[0] == 0.0
        assert traj.norms[0] == pytest.approx(1.0, abs=1e-14)

    def test_sampling_grid(self):
        p = LatticeParams(n_sites=16)
        s = plane_wave(0.5, 16)
        traj = evolve(s, p, ZERO, IntegratorConfig(dt=0.1, t_end=1.0, sample_every=3))
        # samples at steps 0,3,6,9 plus the forced final step 10
        assert np.allclose(traj.times, [0.0, 0.3, 0.6, 0.9, 1.0])
        assert np.all(np.diff(traj.times) > 0)

    def test_population_rows_sum_to_norm(self):
        p = LatticeParams(n_sites=48)
        s = make_gaussian_packet(PacketSpec(sigma=3.0, center=24.0, wavenumber=1.0), p)
        prof = CouplingProfile(kind="uniform_exponential_switch", chi0=0.2, t0=math.inf)
        traj = evolve(s, p, prof, IntegratorConfig(dt=0.01, t_end=5.0))
        assert np.allclose(traj.populations.sum(axis=1), traj.norms, atol=1e-14)

    def test_norm_conserved_free(self):
        p = LatticeParams(n_sites=96)
        s = make_gaussian_packet(PacketSpec(sigma=5.0, center=48.0, wavenumber=1.5), p)
        traj = evolve(s, p, ZERO, IntegratorConfig(dt=0.01, t_end=50.0))
        assert traj.norm_drift < 1e-10

    def test_snapshots_at_requested_times(self):
        p = LatticeParams(n_sites=16)
        s = plane_wave(0.5, 16)
        cfg = IntegratorConfig(dt=0.01, t_end=2.0, snapshot_times=(0.5, 1.5))
        traj = evolve(s, p, ZERO, cfg)
        assert [t for t, _ in traj.snapshots] == [0.5, 1.5]
        for t, snap in traj.snapshots:
            assert snap.time == t
            assert snap.norm() == pytest.approx(1.0, abs=1e-9)

    def test_snapshot_outside_range_rejected(self):
        p = LatticeParams(n_sites=16)
        s = plane_wave(0.5, 16)
        with pytest.raises(ConfigurationError, match="snapshot"):
            evolve(s, p, ZERO, IntegratorConfig(dt=0.01, t_end=1.0, snapshot_times=(2.0,)))


class TestScheduledUnitaries:
    def test_phase_applied_at_boundary(self):
        p = LatticeParams(n_sites=16)
        amps = np.zeros((2, 16), dtype=complex)
        amps[0] = 1.0 / 4.0
        amps[1] = 1.0 / 4.0
        s = WaveState(amplitudes=amps)
        traj = evolve(s, p, ZERO, IntegratorConfig(dt=0.01, t_end=1.0),
                      unitaries=((0.5, 1, math.pi / 3),))
        assert len(traj.events) == 1
        t, channel, phase = traj.events[0]
        assert t == pytest.approx(0.5, abs=1e-12)
        assert channel == 1
        assert phase == pytest.approx(math.pi / 3)

    def test_phase_event_changes_only_phase(self):
        p = LatticeParams(n_sites=16)
        s = plane_wave(0.7, 16, channels=2)
        before = evolve(s, p, ZERO, IntegratorConfig(dt=0.01, t_end=1.0))
        after = evolve(s, p, ZERO, IntegratorConfig(dt=0.01, t_end=1.0),
                       unitaries=((0.5, 0, 1.1),))
        assert np.allclose(np.abs(after.final_state.amplitudes),
                           np.abs(before.final_state.amplitudes), atol=1e-14)
        ratio = after.final_state.amplitudes[0] / before.final_state.amplitudes[0]
        assert np.allclose(ratio, np.exp(1.1j), atol=1e-12)

    def test_event_time_snaps_to_step(self):
        p = LatticeParams(n_sites=16)
        s = plane_wave(0.7, 16, channels=2)
        traj = evolve(s, p, ZERO, IntegratorConfig(dt=0.01, t_end=1.0),
                      unitaries=((0.50401, 0, 2.0),))
        assert traj.events[0][0] == pytest.approx(0.50, abs=1e-12)

    def test_unsorted_schedule_rejected(self):
        p = LatticeParams(n_sites=16)
        s = plane_wave(0.7, 16, channels=2)
        with pytest.raises(ConfigurationError, match="sorted"):
            evolve(s, p, ZERO, IntegratorConfig(dt=0.01, t_end=1.0),
                   unitaries=((0.8, 0, 1.0), (0.2, 0, 1.0)))

    def test_bad_channel_rejected(self):
        p = LatticeParams(n_sites=16)
        s = plane_wave(0.7, 16, channels=2)
        with pytest.raises(ConfigurationError, match="channel"):
            evolve(s, p, ZERO, IntegratorConfig(dt=0.01, t_end=1.0),
                   unitaries=((0.5, 5, 1.0),))

    def test_event_outside_range_rejected(self):
        p = LatticeParams(n_sites=16)
        s = plane_wave(0.7, 16, channels=2)
        with pytest.raises(ConfigurationError, match="outside"):
            evolve(s, p, ZERO, IntegratorConfig(dt=0.01, t_end=1.0),
                   unitaries=((5.0, 0, 1.0),))


class TestTwoLevelReduction:
    def test_uniform_constant_coupling_is_exact_rabi(self):
        # tau = site_energy = 0 decouples sites; each becomes a two-level
        # system with P_2(t) = sin(chi t)^2 exactly
        p = LatticeParams(n_sites=8, hopping=0.0)
        amps = np.zeros((2, 8), dtype=complex)
        amps[0, 2] = 1.0
        prof = CouplingProfile(kind="uniform_exponential_switch", chi0=0.3, t0=math.inf)
        traj = evolve(WaveState(amplitudes=amps), p, prof,
                      IntegratorConfig(dt=0.01, t_end=12.0, sample_every=25))
        expected = np.sin(0.3 * traj.times) ** 2
        assert np.max(np.abs(traj.populations[:, 1] - expected)) < 1e-9

    def test_decaying_switch_follows_integrated_phase(self):
        from excsim import coupling_phase
        p = LatticeParams(n_sites=8, hopping=0.0)
        amps = np.zeros((2, 8), dtype=complex)
        amps[0, 0] = 1.0
        prof = CouplingProfile(kind="uniform_exponential_switch", chi0=0.02, t0=25.0)
        traj = evolve(WaveState(amplitudes=amps), p, prof,
                      IntegratorConfig(dt=0.01, t_end=150.0, sample_every=100))
        theta = np.array([coupling_phase(prof, t) for t in traj.times])
        assert np.max(np.abs(traj.populations[:, 1] - np.sin(theta) ** 2)) < 1e-9
        # saturation: the transferred fraction can never exceed sin(chi0*t0)^2
        assert traj.populations[:, 1].max() < math.sin(0.5) ** 2 + 1e-9


class TestConvergence:
    def test_fourth_order_in_dt(self):
        # halving dt should shrink the error ~16x; accept [8, 32]
        p = LatticeParams(n_sites=16)
        rng = np.random.default_rng(7)
        amps = rng.normal(size=(2, 16)) + 1j * rng.normal(size=(2, 16))
        amps /= np.linalg.norm(amps)
        s = WaveState(amplitudes=amps)
        prof = CouplingProfile(kind="uniform_exponential_ramp", chi0=0.1, t0=2.0)

        # t_end divisible by every dt so all runs end at the same time
        def final(dt):
            return evolve(s, p, prof, IntegratorConfig(dt=dt, t_end=4.8)).final_state.amplitudes

        errs = []
        for dt in (0.08, 0.04, 0.02):
            ref = final(dt / 8.0)
            errs.append(float(np.linalg.norm(final(dt) - ref)))
        for a, b in zip(errs, errs[1:]):
            assert 8.0 < a / b < 32.0
