"""Coupling profiles, calibration, and closed-form timing helpers."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from excsim import (
    CompositeProfile,
    ConfigurationError,
    CouplingProfile,
    LatticeParams,
    calibrate_sigma_chi,
    coupler_calibration,
    coupling_phase,
    equal_population_time,
    evaluate_chi,
    rabi_period,
    splitting_angle,
    time_for_phase,
)


class TestProfileValidation:
    def test_unknown_kind(self):
        with pytest.raises(ConfigurationError, match="kind"):
            CouplingProfile(kind="linear")

    def test_negative_chi0(self):
        with pytest.raises(ConfigurationError, match="chi0"):
            CouplingProfile(kind="uniform_exponential_switch", chi0=-0.1, t0=1.0)

    def test_switch_needs_positive_t0(self):
        with pytest.raises(ConfigurationError, match="t0"):
            CouplingProfile(kind="uniform_exponential_switch", chi0=0.1, t0=0.0)

    def test_ramp_needs_finite_t0(self):
        with pytest.raises(ConfigurationError, match="t0"):
            CouplingProfile(kind="uniform_exponential_ramp", chi0=0.1, t0=math.inf)

    def test_spatial_needs_width(self):
        with pytest.raises(ConfigurationError, match="sigma_chi"):
            CouplingProfile(kind="spatial_gaussian", chi0=0.1, center=10.0)

    def test_spatial_needs_center(self):
        with pytest.raises(ConfigurationError, match="center"):
            CouplingProfile(kind="spatial_gaussian", chi0=0.1, sigma_chi=5.0)


class TestProfileValues:
    def test_switch_decays(self):
        prof = CouplingProfile(kind="uniform_exponential_switch", chi0=0.02, t0=25.0)
        assert prof.values(16, 0.0) == pytest.approx(0.02)
        assert prof.values(16, 25.0) == pytest.approx(0.02 * math.exp(-1.0))
        assert prof.values(16, -1.0) == 0.0

    def test_switch_constant_at_infinite_t0(self):
        prof = CouplingProfile(kind="uniform_exponential_switch", chi0=0.05, t0=math.inf)
        assert prof.values(16, 0.0) == 0.05
        assert prof.values(16, 1e6) == 0.05

    def test_ramp_rises_to_chi0(self):
        prof = CouplingProfile(kind="uniform_exponential_ramp", chi0=0.02, t0=25.0)
        assert prof.values(16, 0.0) == 0.0
        assert prof.values(16, 25.0) == pytest.approx(0.02 * (1 - math.exp(-1.0)))
        assert prof.values(16, 2500.0) == pytest.approx(0.02, rel=1e-12)

    def test_spatial_gaussian_shape(self):
        prof = CouplingProfile(kind="spatial_gaussian", chi0=0.1, sigma_chi=4.0, center=16.0)
        chi = prof.values(64, 0.0)
        assert chi[16] == pytest.approx(0.1)
        assert chi[20] == pytest.approx(0.1 * math.exp(-16.0 / 32.0))
        assert chi[12] == chi[20]

    def test_spatial_gaussian_wraps(self):
        prof = CouplingProfile(kind="spatial_gaussian", chi0=0.1, sigma_chi=3.0, center=2.0)
        chi = prof.values(64, 0.0)
        assert chi[63] == pytest.approx(chi[5])  # both 3 sites from the center

    def test_far_tail_underflows_to_zero(self):
        prof = CouplingProfile(kind="spatial_gaussian", chi0=0.1, sigma_chi=1.0, center=300.0)
        chi = prof.values(600, 0.0)
        assert chi[0] == 0.0
        assert np.all(np.isfinite(chi))

    def test_zero_kind(self):
        assert CouplingProfile(kind="zero").values(16, 5.0) == 0.0

    def test_evaluate_chi_scalar(self):
        prof = CouplingProfile(kind="spatial_gaussian", chi0=0.1, sigma_chi=4.0, center=16.0)
        assert evaluate_chi(prof, 16, 0.0, n_sites=64) == pytest.approx(0.1)

    def test_composite_sums(self):
        a = CouplingProfile(kind="spatial_gaussian", chi0=0.1, sigma_chi=2.0, center=10.0)
        b = CouplingProfile(kind="spatial_gaussian", chi0=0.2, sigma_chi=2.0, center=40.0)
        both = CompositeProfile(parts=(a, b))
        chi = both.values(64, 0.0)
        assert chi[10] == pytest.approx(0.1 + b.values(64, 0.0)[10])
        assert chi[40] == pytest.approx(0.2 + a.values(64, 0.0)[40])
        assert both.static


class TestCalibration:
    def test_reference_width(self):
        # sqrt(2 pi) |sin 5.34| / 0.4 computed independently
        p = LatticeParams(n_sites=600)
        assert calibrate_sigma_chi(0.1, 5.34, p) == pytest.approx(5.072366957646942, abs=1e-12)

    def test_rejects_zero_velocity(self):
        p = LatticeParams(n_sites=600)
        with pytest.raises(ConfigurationError, match="sin"):
            calibrate_sigma_chi(0.1, math.pi, p)

    def test_rejects_zero_chi(self):
        p = LatticeParams(n_sites=600)
        with pytest.raises(ConfigurationError, match="chi0"):
            calibrate_sigma_chi(0.0, 5.34, p)

    def test_length_relation(self):
        # sigma_chi = L/sqrt(2 pi) with L = pi |v_g| / (4 chi0)
        p = LatticeParams(n_sites=600)
        cal = coupler_calibration(0.1, 5.34, p)
        assert cal.sigma_chi == pytest.approx(cal.coupler_length / math.sqrt(2 * math.pi), rel=1e-12)
        assert cal.splitting_angle == pytest.approx(math.pi / 4)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(min_value=0.02, max_value=0.5),
           st.floats(min_value=0.3, max_value=2.8))
    def test_calibrated_coupler_always_hits_quarter_angle(self, chi0, k0):
        # density integral a*sum(chi) equals pi |v_g| / 4 on a big enough ring
        p = LatticeParams(n_sites=2048)
        sigma = calibrate_sigma_chi(chi0, k0, p)
        # sub-site widths alias the discrete sum; huge widths overflow the ring
        if sigma < 1.5 or sigma > 80:
            return
        prof = CouplingProfile(kind="spatial_gaussian", chi0=chi0, sigma_chi=sigma, center=1024.0)
        theta = splitting_angle(prof, k0, p)
        assert theta == pytest.approx(math.pi / 4, rel=1e-6)

    def test_splitting_angle_scales_with_width(self):
        p = LatticeParams(n_sites=600)
        base = calibrate_sigma_chi(0.1, 5.34, p)
        half = CouplingProfile(kind="spatial_gaussian", chi0=0.1, sigma_chi=base / 2, center=300.0)
        assert splitting_angle(half, 5.34, p) == pytest.approx(math.pi / 8, rel=1e-6)


class TestPhaseAccumulation:
    def test_constant_phase_linear(self):
        prof = CouplingProfile(kind="uniform_exponential_switch", chi0=0.02, t0=math.inf)
        assert coupling_phase(prof, 50.0) == pytest.approx(1.0)

    def test_decay_phase_saturates(self):
        prof = CouplingProfile(kind="uniform_exponential_switch", chi0=0.02, t0=25.0)
        assert coupling_phase(prof, 1e9) == pytest.approx(0.5)
        assert coupling_phase(prof, 25.0) == pytest.approx(0.5 * (1 - math.exp(-1)))

    def test_ramp_phase_quadrature(self):
        prof = CouplingProfile(kind="uniform_exponential_ramp", chi0=0.02, t0=25.0)
        # numeric quadrature as the independent oracle
        ts = np.linspace(0.0, 80.0, 200001)
        chi = 0.02 * (1 - np.exp(-ts / 25.0))
        integral = float(np.trapezoid(chi, ts))
        assert coupling_phase(prof, 80.0) == pytest.approx(integral, rel=1e-9)

    def test_time_for_phase_inverts(self):
        for prof in (
            CouplingProfile(kind="uniform_exponential_switch", chi0=0.02, t0=math.inf),
            CouplingProfile(kind="uniform_exponential_ramp", chi0=0.02, t0=25.0),
            CouplingProfile(kind="uniform_exponential_switch", chi0=0.3, t0=40.0),
        ):
            t = time_for_phase(prof, 1.2)
            assert t is not None
            assert coupling_phase(prof, t) == pytest.approx(1.2, abs=1e-9)

    def test_time_for_phase_unreachable(self):
        # decaying switch saturates at chi0*t0 = 0.5 rad; pi is never reached
        prof = CouplingProfile(kind="uniform_exponential_switch", chi0=0.02, t0=25.0)
        assert time_for_phase(prof, math.pi) is None


class TestTimingFormulas:
    def test_rabi_period(self):
        assert rabi_period(0.02) == pytest.approx(math.pi / 0.02, rel=1e-15)
        with pytest.raises(ConfigurationError):
            rabi_period(0.0)

    def test_equal_population_closed_forms(self):
        # n=1: pi/4; n=3: arccos(1/2)/sqrt(3) = pi/(3 sqrt 3)
        assert equal_population_time(1, 1.0) == pytest.approx(math.pi / 4, rel=1e-14)
        assert equal_population_time(2, 1.0) == pytest.approx(0.6755108588560399, abs=1e-13)
        assert equal_population_time(3, 1.0) == pytest.approx(math.pi / (3 * math.sqrt(3)), rel=1e-14)

    def test_equal_population_time_against_star_ode(self):
        # brute-force integration of the star amplitudes with an independent solver
        from scipy.integrate import solve_ivp

        for n in (1, 2, 3):
            chi = 0.7

            def rhs(t, y):
                u = y[: n + 1] + 1j * y[n + 1:]
                du = np.empty(n + 1, dtype=complex)
                du[0] = -1j * chi * np.sum(u[1:])
                du[1:] = -1j * chi * u[0]
                return np.concatenate([du.real, du.imag])

            y0 = np.zeros(2 * (n + 1))
            y0[0] = 1.0
            teq = equal_population_time(n, chi)
            sol = solve_ivp(rhs, (0.0, teq), y0, rtol=1e-11, atol=1e-13)
            u = sol.y[: n + 1, -1] + 1j * sol.y[n + 1:, -1]
            pops = np.abs(u) ** 2
            assert np.allclose(pops, 1.0 / (n + 1), atol=1e-8)

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            equal_population_time(0, 1.0)
        with pytest.raises(ConfigurationError):
            equal_population_time(2, -1.0)
