"""Scenario drivers and the two-port analytic oracle.

Each driver assembles lattice, packet, coupling, and schedule for one
experiment, runs the fixed-step propagation, and reports derived metrics next
to the matching closed-form prediction:

* oscillation        -- uniform time-dependent coupling, P_2(t) = sin(Theta(t))^2
* beam_splitter      -- one Gaussian coupler hit by a moving packet
* interference       -- both channels populated with a relative phase, one coupler
* mach_zehnder       -- two couplers with a phase kick between them
* multichannel_split -- constant star coupling into several daughter channels
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .coupling import (
    CompositeProfile,
    CouplingProfile,
    UNIFORM_KINDS,
    calibrate_sigma_chi,
    coupling_phase,
    equal_population_time,
    splitting_angle,
    time_for_phase,
)
from .errors import ConfigurationError, SimulationError
from .integrator import IntegratorConfig, Trajectory, evolve
from .lattice import LatticeParams, WaveState, drift_velocity
from .packets import (
    PacketSpec,
    centroid_displacement,
    channel_populations,
    make_gaussian_packet,
    phase_compensated_difference,
)

# clearance between launch/exit points and a coupler centre, in units of
# (sigma + sigma_chi); 6 keeps the overlap below ~1e-8 of the population
EXIT_CLEARANCE = 6.0
APPROACH_CLEARANCE = 6.0
EXIT_PAD_TIME = 5.0


def transfer_matrix(theta: float) -> np.ndarray:
    """Two-port splitter matrix [[cos, -i sin], [-i sin, cos]](theta)."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -1j * s], [-1j * s, c]])


def two_port_oracle(
    theta: float,
    delta: float = 0.0,
    stages: int = 1,
    amplitudes_in: tuple[complex, complex] = (1.0, 0.0),
) -> np.ndarray:
    """Output amplitudes of one splitter (stages=1) or a splitter pair (stages=2).

    With two stages a phase exp(i*delta) acts on channel 1 between them, which
    is the Mach-Zehnder arrangement: for a channel-0 input the output
    populations are (sin(delta/2)^2, cos(delta/2)^2) when theta = pi/4.
    """
    if stages not in (1, 2):
        raise ConfigurationError(f"stages: must be 1 or 2, got {stages!r}")
    v = np.asarray(amplitudes_in, dtype=np.complex128)
    if v.shape != (2,):
        raise ConfigurationError(f"amplitudes_in: expected 2 amplitudes, got shape {v.shape}")
    u = transfer_matrix(theta)
    v = u @ v
    if stages == 2:
        v = v * np.array([1.0, np.exp(1j * delta)])
        v = u @ v
    return v


def star_oracle_populations(n_daughters: int, theta: float) -> np.ndarray:
    """Closed-form star populations after angle theta = chi*t of constant coupling.

    Parent: cos(sqrt(n)*theta)^2; each daughter: sin(sqrt(n)*theta)^2 / n.
    """
    if n_daughters < 1:
        raise ConfigurationError(f"n_daughters: must be >= 1, got {n_daughters!r}")
    root = math.sqrt(n_daughters)
    parent = math.cos(root * theta) ** 2
    daughter = math.sin(root * theta) ** 2 / n_daughters
    return np.array([parent] + [daughter] * n_daughters)


@dataclass
class ScenarioReport:
    """Outcome of one scenario run."""

    scenario: str
    trajectory: Trajectory
    final_populations: np.ndarray
    derived_metrics: dict[str, float]
    resolved: dict[str, object] = field(default_factory=dict)
    coupler_sites: np.ndarray | None = None

    @property
    def final_state(self):
        return self.trajectory.final_state


def _population_peak_times(times: np.ndarray, pops: np.ndarray, threshold: float, skip_first_sample: bool) -> list[float]:
    """Times where one channel's population peaks above ``threshold``.

    Finds contiguous above-threshold runs and refines each run's maximum with
    a parabola through the three nearest samples.
    """
    above = pops >= threshold
    peaks: list[float] = []
    i = 0
    n = len(pops)
    while i < n:
        if not above[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and above[j + 1]:
            j += 1
        if not (skip_first_sample and i == 0):
            k = i + int(np.argmax(pops[i:j + 1]))
            t_peak = float(times[k])
            if 0 < k < n - 1:
                dl = times[k] - times[k - 1]
                dr = times[k + 1] - times[k]
                denom = pops[k - 1] - 2.0 * pops[k] + pops[k + 1]
                if abs(dl - dr) < 1e-9 * dl and denom < 0:
                    t_peak += 0.5 * dl * float(pops[k - 1] - pops[k + 1]) / float(denom)
            peaks.append(t_peak)
        i = j + 1
    return peaks


def transfer_times(trajectory: Trajectory, initial_channel: int = 0, threshold: float = 0.99) -> dict[str, float]:
    """First complete transfer and return times read off a two-channel trajectory."""
    t = trajectory.times
    p_init = trajectory.populations[:, initial_channel]
    p_other = trajectory.populations[:, 1 - initial_channel]
    away = _population_peak_times(t, p_other, threshold, skip_first_sample=False)
    back = _population_peak_times(t, p_init, threshold, skip_first_sample=True)
    out: dict[str, float] = {}
    if away:
        out["first_transfer_time"] = away[0]
        returns = [tb for tb in back if tb > away[0]]
        if returns:
            out["return_time"] = returns[0]
            out["transfer_interval"] = returns[0] - away[0]
    return out


def _integ(dt: float, t_end: float, sample_every: int, snapshot_times: tuple[float, ...]) -> IntegratorConfig:
    return IntegratorConfig(dt=dt, t_end=t_end, sample_every=sample_every, snapshot_times=snapshot_times)


def run_oscillation(
    params: LatticeParams,
    profile: CouplingProfile | None = None,
    packet: PacketSpec | None = None,
    *,
    chi0: float = 0.02,
    t0: float = 25.0,
    kind: str = "uniform_exponential_ramp",
    dt: float = 0.01,
    t_end: float | None = None,
    sample_every: int = 10,
    snapshot_times: tuple[float, ...] = (),
) -> ScenarioReport:
    """Two identical rings under a uniform time-dependent coupling.

    The packet sloshes between channels with P_other(t) = sin(Theta(t))^2
    independent of its shape; the report compares the sampled populations
    against that law and extracts complete-transfer times when they exist.
    """
    if profile is None:
        profile = CouplingProfile(kind=kind, chi0=chi0, t0=t0)
    if profile.kind not in UNIFORM_KINDS + ("zero",):
        raise ConfigurationError(f"oscillation: needs a uniform coupling kind, got {profile.kind!r}")
    if packet is None:
        packet = PacketSpec(sigma=20.0, center=None, wavenumber=0.942, channel=0)
    if packet.center is None:
        packet = replace(packet, center=params.n_sites / 2.0)
    if packet.channel not in (0, 1):
        raise ConfigurationError(f"oscillation: packet.channel must be 0 or 1, got {packet.channel}")

    if t_end is None:
        t_full = time_for_phase(profile, math.pi, params.hbar)
        if t_full is not None:
            t_end = 1.15 * t_full
        elif profile.kind == "uniform_exponential_switch" and math.isfinite(profile.t0 or math.inf):
            t_end = 6.0 * profile.t0
        else:
            t_end = 100.0

    state = make_gaussian_packet(packet, params, n_channels=2)
    traj = evolve(state, params, profile, _integ(dt, t_end, sample_every, snapshot_times))

    other = 1 - packet.channel
    theta = np.array([coupling_phase(profile, t, params.hbar) for t in traj.times])
    law = np.sin(theta) ** 2
    resid = traj.populations[:, other] / traj.norms - law
    metrics: dict[str, float] = {
        "oracle_rms": float(np.sqrt(np.mean(resid * resid))),
        "oracle_max_dev": float(np.max(np.abs(resid))),
        "max_transfer": float(np.max(traj.populations[:, other])),
        "final_theta": float(theta[-1]),
        "norm_drift": traj.norm_drift,
    }
    metrics.update(transfer_times(traj, packet.channel))
    return ScenarioReport(
        scenario="oscillation",
        trajectory=traj,
        final_populations=channel_populations(traj.final_state),
        derived_metrics=metrics,
        resolved={
            "profile": {"kind": profile.kind, "chi0": profile.chi0, "t0": profile.t0},
            "packet": {"sigma": packet.sigma, "center": packet.center,
                       "wavenumber": packet.wavenumber, "channel": packet.channel},
            "t_end": t_end,
            "dt": dt,
        },
    )


def _moving_packet_geometry(
    params: LatticeParams,
    packet: PacketSpec,
    sigma_chi: float,
    n_couplers: int,
    separation: float,
) -> dict[str, float]:
    """Place couplers and launch site along the drift direction.

    All stations sit on an arc: launch, first coupler after ``approach``
    sites, optional second coupler ``separation`` sites later, exit point
    ``exit_run`` sites after the last coupler.  Raises when the arc plus
    packet tails cannot fit on the ring.
    """
    n = params.n_sites
    vd = drift_velocity(packet.wavenumber, params) / params.spacing  # sites per time
    if abs(vd) < 1e-9:
        raise ConfigurationError(
            f"packet.wavenumber: {packet.wavenumber} gives zero drift velocity; the packet would never move")
    s = 1.0 if vd > 0 else -1.0
    clearance = packet.sigma + sigma_chi
    approach = APPROACH_CLEARANCE * clearance
    exit_run = EXIT_CLEARANCE * clearance
    arc = approach + (n_couplers - 1) * separation + exit_run + EXIT_PAD_TIME * abs(vd)
    if arc + 4.0 * packet.sigma > n:
        raise ConfigurationError(
            f"n_sites: ring of {n} sites is too small for this geometry "
            f"(needs about {arc + 4.0 * packet.sigma:.0f} sites); "
            "increase n_sites or reduce sigma/sigma_chi")
    return {"site_rate": vd, "sign": s, "approach": approach, "exit_run": exit_run,
            "separation": separation, "clearance": clearance}


def _verify_exited(traj: Trajectory, last_center: float, geo: dict[str, float], n_sites: int) -> float:
    """Displacement past the last coupler, or SimulationError if still inside.

    Located with the circular centroid of the channel-summed site
    distribution, which stays well defined however the split came out.
    """
    a = traj.final_state.amplitudes
    p = np.sum(a.real * a.real + a.imag * a.imag, axis=0)
    total = float(np.sum(p))
    if total <= 1e-12:
        raise SimulationError("no population left anywhere; cannot locate the packet")
    z = np.sum(p * np.exp(2j * np.pi * np.arange(n_sites) / n_sites)) / total
    if abs(z) < 1e-9:
        raise SimulationError("site distribution has no definable centroid; the packet dispersed")
    centroid = float((np.angle(z) * n_sites / (2.0 * np.pi)) % n_sites)
    disp = geo["sign"] * centroid_displacement(centroid, last_center, n_sites)
    if disp < geo["exit_run"] - 2.0:
        raise SimulationError(
            f"packet failed to exit the coupler region before t_end "
            f"(displacement {disp:.1f} sites, needed {geo['exit_run']:.1f})")
    return float(disp)


def _resolve_splitter_pieces(
    params: LatticeParams,
    packet: PacketSpec | None,
    chi0: float,
    sigma_chi: float | None,
) -> tuple[PacketSpec, float]:
    if packet is None:
        packet = PacketSpec(sigma=20.0, center=None, wavenumber=5.34, channel=0)
    if sigma_chi is None:
        sigma_chi = calibrate_sigma_chi(chi0, packet.wavenumber, params)
    return packet, sigma_chi


def run_beam_splitter(
    params: LatticeParams,
    packet: PacketSpec | None = None,
    *,
    chi0: float = 0.1,
    sigma_chi: float | None = None,
    coupler_center: float | None = None,
    dt: float = 0.01,
    t_end: float | None = None,
    sample_every: int = 10,
    snapshot_times: tuple[float, ...] = (),
) -> ScenarioReport:
    """A moving packet crosses one Gaussian coupler and splits between channels.

    With sigma_chi left to None the coupler is calibrated to a 50/50 split.
    The output phase relation is checked with the residual
    || u_in - exp(i*pi/2) * u_other ||, which vanishes for an ideal splitter.
    """
    packet, sigma_chi = _resolve_splitter_pieces(params, packet, chi0, sigma_chi)
    if packet.channel not in (0, 1):
        raise ConfigurationError(f"beam_splitter: packet.channel must be 0 or 1, got {packet.channel}")
    n = params.n_sites
    if coupler_center is None:
        coupler_center = n / 2.0
    geo = _moving_packet_geometry(params, packet, sigma_chi, n_couplers=1, separation=0.0)
    if packet.center is None:
        packet = replace(packet, center=(coupler_center - geo["sign"] * geo["approach"]) % n)
    else:
        geo["approach"] = geo["sign"] * centroid_displacement(coupler_center, packet.center, n)
        if geo["approach"] < 3.0 * geo["clearance"]:
            raise ConfigurationError(
                f"packet.center: launch site {packet.center} is too close to the coupler "
                f"(needs at least {3.0 * geo['clearance']:.1f} sites of approach along the drift)")
    if t_end is None:
        t_end = (geo["approach"] + geo["exit_run"]) / abs(geo["site_rate"]) + EXIT_PAD_TIME

    profile = CouplingProfile(kind="spatial_gaussian", chi0=chi0, sigma_chi=sigma_chi, center=coupler_center)
    state = make_gaussian_packet(packet, params, n_channels=2)
    traj = evolve(state, params, profile, _integ(dt, t_end, sample_every, snapshot_times))
    exit_disp = _verify_exited(traj, coupler_center, geo, n)

    final = traj.final_state
    pops = channel_populations(final)
    other = 1 - packet.channel
    theta = splitting_angle(profile, packet.wavenumber, params)
    oracle = np.abs(two_port_oracle(theta, amplitudes_in=_basis(packet.channel))) ** 2
    # an ideal splitter leaves the transmitted channel ahead by exp(-i*pi/2)
    phi = math.pi / 2.0 if packet.channel == 0 else -math.pi / 2.0
    metrics = {
        "split_fraction": float(pops[other] / traj.norms[-1]),
        "residual_quarter_phase": phase_compensated_difference(final, phi),
        "splitting_angle": theta,
        "sigma_chi": sigma_chi,
        "oracle_max_dev": float(np.max(np.abs(pops / traj.norms[-1] - oracle))),
        "exit_displacement": exit_disp,
        "norm_drift": traj.norm_drift,
    }
    return ScenarioReport(
        scenario="beam_splitter",
        trajectory=traj,
        final_populations=pops,
        derived_metrics=metrics,
        resolved=_splitter_resolved(packet, chi0, sigma_chi, (coupler_center,), geo, dt, t_end),
        coupler_sites=np.asarray(profile.values(n, 0.0, params.spacing)),
    )


def _basis(channel: int) -> tuple[complex, complex]:
    return (1.0, 0.0) if channel == 0 else (0.0, 1.0)


def _splitter_resolved(packet, chi0, sigma_chi, centers, geo, dt, t_end) -> dict[str, object]:
    return {
        "packet": {"sigma": packet.sigma, "center": packet.center,
                   "wavenumber": packet.wavenumber, "channel": packet.channel},
        "chi0": chi0,
        "sigma_chi": sigma_chi,
        "coupler_centers": list(centers),
        "site_rate": geo["site_rate"],
        "approach": geo["approach"],
        "exit_run": geo["exit_run"],
        "dt": dt,
        "t_end": t_end,
    }


def run_interference(
    params: LatticeParams,
    packet: PacketSpec | None = None,
    *,
    chi0: float = 0.1,
    pre_phase: float = -math.pi / 2.0,
    sigma_chi: float | None = None,
    coupler_center: float | None = None,
    dt: float = 0.01,
    t_end: float | None = None,
    sample_every: int = 10,
    snapshot_times: tuple[float, ...] = (),
) -> ScenarioReport:
    """Both channels carry the packet with a relative phase into one coupler.

    Channel 1 is prepared as exp(i*pre_phase) times channel 0, both at half
    population.  At pre_phase = -pi/2 a calibrated coupler routes everything
    into channel 1; at +pi/2 into channel 0.
    """
    packet, sigma_chi = _resolve_splitter_pieces(params, packet, chi0, sigma_chi)
    n = params.n_sites
    if coupler_center is None:
        coupler_center = n / 2.0
    geo = _moving_packet_geometry(params, packet, sigma_chi, n_couplers=1, separation=0.0)
    if packet.center is None:
        packet = replace(packet, center=(coupler_center - geo["sign"] * geo["approach"]) % n)
    if t_end is None:
        t_end = (geo["approach"] + geo["exit_run"]) / abs(geo["site_rate"]) + EXIT_PAD_TIME

    profile = CouplingProfile(kind="spatial_gaussian", chi0=chi0, sigma_chi=sigma_chi, center=coupler_center)
    seed = make_gaussian_packet(replace(packet, channel=0), params, n_channels=2)
    amps = seed.amplitudes
    amps[1] = np.exp(1j * pre_phase) * amps[0]
    amps /= math.sqrt(2.0)
    state = WaveState(amplitudes=amps, time=0.0)

    traj = evolve(state, params, profile, _integ(dt, t_end, sample_every, snapshot_times))
    exit_disp = _verify_exited(traj, coupler_center, geo, n)

    pops = channel_populations(traj.final_state)
    theta = splitting_angle(profile, packet.wavenumber, params)
    vin = (1.0 / math.sqrt(2.0), np.exp(1j * pre_phase) / math.sqrt(2.0))
    oracle = np.abs(two_port_oracle(theta, amplitudes_in=vin)) ** 2
    metrics = {
        "concentration": float(np.max(pops) / traj.norms[-1]),
        "dominant_channel": int(np.argmax(pops)),
        "oracle_channel": int(np.argmax(oracle)),
        "oracle_max_dev": float(np.max(np.abs(pops / traj.norms[-1] - oracle))),
        "pre_phase": pre_phase,
        "splitting_angle": theta,
        "sigma_chi": sigma_chi,
        "exit_displacement": exit_disp,
        "norm_drift": traj.norm_drift,
    }
    resolved = _splitter_resolved(packet, chi0, sigma_chi, (coupler_center,), geo, dt, t_end)
    resolved["pre_phase"] = pre_phase
    return ScenarioReport(
        scenario="interference",
        trajectory=traj,
        final_populations=pops,
        derived_metrics=metrics,
        resolved=resolved,
        coupler_sites=np.asarray(profile.values(n, 0.0, params.spacing)),
    )


def run_mach_zehnder(
    params: LatticeParams,
    packet: PacketSpec | None = None,
    *,
    delta: float = 0.0,
    chi0: float = 0.1,
    sigma_chi: float | None = None,
    coupler_centers: tuple[float, float] | None = None,
    phase_channel: int = 1,
    dt: float = 0.01,
    t_end: float | None = None,
    sample_every: int = 10,
    snapshot_times: tuple[float, ...] = (),
) -> ScenarioReport:
    """Two calibrated couplers with a phase kick exp(i*delta) between them.

    The kick multiplies ``phase_channel`` while the packet travels between
    the couplers.  For a channel-0 input the final populations follow
    (sin(delta/2)^2, cos(delta/2)^2); the arrangement is first-order
    insensitive to coupler miscalibration around theta = pi/4.
    """
    packet, sigma_chi = _resolve_splitter_pieces(params, packet, chi0, sigma_chi)
    if packet.channel not in (0, 1):
        raise ConfigurationError(f"mach_zehnder: packet.channel must be 0 or 1, got {packet.channel}")
    if phase_channel not in (0, 1):
        raise ConfigurationError(f"phase_channel: must be 0 or 1, got {phase_channel!r}")
    n = params.n_sites

    min_sep = EXIT_CLEARANCE * (packet.sigma + sigma_chi)
    if coupler_centers is None:
        separation = min_sep + 10.0
        geo = _moving_packet_geometry(params, packet, sigma_chi, n_couplers=2, separation=separation)
        mid = n / 2.0
        c1 = (mid - geo["sign"] * separation / 2.0) % n
        c2 = (mid + geo["sign"] * separation / 2.0) % n
    else:
        c1, c2 = (float(c) for c in coupler_centers)
        probe_geo = _moving_packet_geometry(params, packet, sigma_chi, n_couplers=1, separation=0.0)
        separation = probe_geo["sign"] * centroid_displacement(c2, c1, n)
        if separation < min_sep:
            raise ConfigurationError(
                f"coupler_centers: couplers {coupler_centers} overlap or sit in the wrong order; "
                f"need at least {min_sep:.1f} sites of separation along the drift")
        geo = _moving_packet_geometry(params, packet, sigma_chi, n_couplers=2, separation=separation)
    if packet.center is None:
        packet = replace(packet, center=(c1 - geo["sign"] * geo["approach"]) % n)
    rate = abs(geo["site_rate"])
    t_phase = (geo["approach"] + separation / 2.0) / rate
    if t_end is None:
        t_end = (geo["approach"] + separation + geo["exit_run"]) / rate + EXIT_PAD_TIME

    profile = CompositeProfile(parts=(
        CouplingProfile(kind="spatial_gaussian", chi0=chi0, sigma_chi=sigma_chi, center=c1),
        CouplingProfile(kind="spatial_gaussian", chi0=chi0, sigma_chi=sigma_chi, center=c2),
    ))
    state = make_gaussian_packet(packet, params, n_channels=2)
    traj = evolve(state, params, profile, _integ(dt, t_end, sample_every, snapshot_times),
                  unitaries=((t_phase, phase_channel, delta),))
    exit_disp = _verify_exited(traj, c2, geo, n)

    pops = channel_populations(traj.final_state)
    theta = splitting_angle(profile.parts[0], packet.wavenumber, params)
    oracle = np.abs(two_port_oracle(theta, delta=delta, stages=2, amplitudes_in=_basis(packet.channel))) ** 2
    metrics = {
        "delta": delta,
        "population_1": float(pops[0] / traj.norms[-1]),
        "population_2": float(pops[1] / traj.norms[-1]),
        "law_sin_half_delta_sq": math.sin(delta / 2.0) ** 2,
        "oracle_max_dev": float(np.max(np.abs(pops / traj.norms[-1] - oracle))),
        "splitting_angle": theta,
        "sigma_chi": sigma_chi,
        "phase_time": traj.events[0][0] if traj.events else float("nan"),
        "exit_displacement": exit_disp,
        "norm_drift": traj.norm_drift,
    }
    resolved = _splitter_resolved(packet, chi0, sigma_chi, (c1, c2), geo, dt, t_end)
    resolved["delta"] = delta
    resolved["phase_channel"] = phase_channel
    resolved["phase_time"] = t_phase
    return ScenarioReport(
        scenario="mach_zehnder",
        trajectory=traj,
        final_populations=pops,
        derived_metrics=metrics,
        resolved=resolved,
        coupler_sites=np.asarray(profile.values(n, 0.0, params.spacing)),
    )


def run_multichannel_split(
    params: LatticeParams,
    n_daughters: int = 3,
    packet: PacketSpec | None = None,
    *,
    chi0: float = 0.02,
    dt: float = 0.01,
    t_end: float | None = None,
    sample_every: int = 10,
    snapshot_times: tuple[float, ...] = (),
) -> ScenarioReport:
    """Constant star coupling splits the hub packet across n_daughters channels.

    Run to the equal-population time (the default t_end) every channel holds
    1/(n_daughters+1) of the population.
    """
    if not isinstance(n_daughters, int) or n_daughters < 1:
        raise ConfigurationError(f"n_daughters: must be an integer >= 1, got {n_daughters!r}")
    if packet is None:
        packet = PacketSpec(sigma=20.0, center=None, wavenumber=0.942, channel=0)
    if packet.center is None:
        packet = replace(packet, center=params.n_sites / 2.0)
    if packet.channel != 0:
        raise ConfigurationError("multichannel_split: the packet must start on the hub channel 0")
    profile = CouplingProfile(kind="uniform_exponential_switch", chi0=chi0, t0=math.inf)
    t_eq = equal_population_time(n_daughters, chi0)
    if t_end is None:
        t_end = t_eq

    state = make_gaussian_packet(packet, params, n_channels=n_daughters + 1)
    traj = evolve(state, params, profile, _integ(dt, t_end, sample_every, snapshot_times))
    pops = channel_populations(traj.final_state)
    theta = chi0 * traj.final_state.time / params.hbar
    oracle = star_oracle_populations(n_daughters, theta)
    metrics = {
        "equal_population_time": t_eq,
        "max_channel_dev": float(np.max(np.abs(pops / traj.norms[-1] - 1.0 / (n_daughters + 1)))),
        "oracle_max_dev": float(np.max(np.abs(pops / traj.norms[-1] - oracle))),
        "norm_drift": traj.norm_drift,
    }
    return ScenarioReport(
        scenario="multichannel_split",
        trajectory=traj,
        final_populations=pops,
        derived_metrics=metrics,
        resolved={
            "n_daughters": n_daughters,
            "chi0": chi0,
            "packet": {"sigma": packet.sigma, "center": packet.center,
                       "wavenumber": packet.wavenumber, "channel": packet.channel},
            "t_end": t_end,
            "dt": dt,
        },
    )


def run_custom(
    params: LatticeParams,
    profile,
    packet: PacketSpec,
    *,
    n_channels: int = 2,
    dt: float = 0.01,
    t_end: float = 0.0,
    sample_every: int = 10,
    snapshot_times: tuple[float, ...] = (),
) -> ScenarioReport:
    """Propagate an arbitrary packet/profile combination with no oracle attached."""
    state = make_gaussian_packet(packet, params, n_channels=n_channels)
    traj = evolve(state, params, profile, _integ(dt, t_end, sample_every, snapshot_times))
    pops = channel_populations(traj.final_state)
    metrics = {"norm_drift": traj.norm_drift}
    coupler = None
    if getattr(profile, "static", False) and getattr(profile, "kind", None) == "spatial_gaussian":
        coupler = np.asarray(profile.values(params.n_sites, 0.0, params.spacing))
    return ScenarioReport(
        scenario="custom",
        trajectory=traj,
        final_populations=pops,
        derived_metrics=metrics,
        resolved={"dt": dt, "t_end": t_end, "n_channels": n_channels},
        coupler_sites=coupler,
    )
