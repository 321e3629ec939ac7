"""Gaussian wave packets on a ring and channel-resolved observables."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .lattice import LatticeParams, WaveState


@dataclass(frozen=True)
class PacketSpec:
    """A Gaussian packet: width sigma (sites), launch site, carrier wavenumber.

    ``center`` may be left as None when a scenario picks the launch site from
    its own geometry; it must be resolved before the packet is built.
    """

    sigma: float = 20.0
    center: float | None = None
    wavenumber: float = 5.34
    channel: int = 0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ConfigurationError(f"packet.sigma: must be finite and > 0, got {self.sigma!r}")
        if self.center is not None and not math.isfinite(self.center):
            raise ConfigurationError(f"packet.center: must be finite, got {self.center!r}")
        if not math.isfinite(self.wavenumber):
            raise ConfigurationError(f"packet.wavenumber: must be finite, got {self.wavenumber!r}")
        if not isinstance(self.channel, int) or self.channel < 0:
            raise ConfigurationError(f"packet.channel: must be an integer >= 0, got {self.channel!r}")


def make_gaussian_packet(spec: PacketSpec, params: LatticeParams, n_channels: int = 2) -> WaveState:
    """Normalised packet u_j = A * exp(-d_j^2/(2 sigma^2)) * exp(-i k0 a j) on one channel.

    d_j is the minimal-image displacement from the launch site, so the
    envelope is periodic on the ring.  The discrete norm is scaled to exactly 1.
    """
    if spec.center is None:
        raise ConfigurationError("packet.center: not set; give a launch site or let a scenario choose one")
    n = params.n_sites
    if not (0.0 <= spec.center < n):
        raise ConfigurationError(f"packet.center: must satisfy 0 <= center < n_sites={n}, got {spec.center!r}")
    if spec.channel >= n_channels:
        raise ConfigurationError(f"packet.channel: {spec.channel} out of range for {n_channels} channels")

    # wrap-around envelope tail at the far side of the ring
    tail = math.exp(-((n / 2.0) ** 2) / (2.0 * spec.sigma ** 2))
    if tail > 1e-6:
        raise ConfigurationError(
            f"packet.sigma: width {spec.sigma} does not fit a ring of {n} sites "
            f"(wrap-around amplitude {tail:.2e} > 1e-06)")
    if tail > 1e-12:
        warnings.warn(f"packet wrap-around amplitude {tail:.2e} exceeds 1e-12", stacklevel=2)

    j = np.arange(n)
    d = (j - spec.center + n / 2.0) % n - n / 2.0
    envelope = np.exp(-(d * d) / (2.0 * spec.sigma ** 2))
    phase = np.exp(-1j * spec.wavenumber * params.spacing * j)
    amps = np.zeros((n_channels, n), dtype=np.complex128)
    amps[spec.channel] = envelope * phase / math.sqrt(float(np.sum(envelope * envelope)))
    return WaveState(amplitudes=amps, time=0.0)


def channel_populations(state: WaveState) -> np.ndarray:
    """P_c = sum_j |u[c, j]|^2 for every channel."""
    a = state.amplitudes
    return np.sum(a.real * a.real + a.imag * a.imag, axis=1)


def phase_compensated_difference(state: WaveState, phi: float) -> float:
    """Residual norm || u[0] - exp(i*phi) * u[1] || between the two channels.

    Zero when channel 1 is an exact copy of channel 0 up to the phase
    exp(-i*phi); only defined for two-channel states.
    """
    if state.n_channels != 2:
        raise ConfigurationError(
            f"phase_compensated_difference: needs exactly 2 channels, got {state.n_channels}")
    diff = state.amplitudes[0] - np.exp(1j * phi) * state.amplitudes[1]
    return float(np.linalg.norm(diff))


def packet_centroid(state: WaveState, channel: int) -> float:
    """Circular mean site index of |u[channel, :]|^2, in [0, n_sites).

    Raises when the channel is essentially empty or the distribution has no
    direction (e.g. perfectly uniform), since the centroid is then undefined.
    """
    if not 0 <= channel < state.n_channels:
        raise ConfigurationError(f"channel: {channel} out of range for {state.n_channels} channels")
    a = state.amplitudes[channel]
    p = a.real * a.real + a.imag * a.imag
    total = float(np.sum(p))
    if total <= 1e-12:
        raise ConfigurationError(f"packet_centroid: channel {channel} is empty (population {total:.2e})")
    n = state.n_sites
    z = np.sum(p * np.exp(2j * np.pi * np.arange(n) / n)) / total
    if abs(z) < 1e-9:
        raise ConfigurationError("packet_centroid: distribution has no definable centroid")
    return float((np.angle(z) * n / (2.0 * np.pi)) % n)


def centroid_displacement(centroid: float, reference: float, n_sites: int) -> float:
    """Signed minimal-image displacement from ``reference`` to ``centroid`` in sites."""
    return (centroid - reference + n_sites / 2.0) % n_sites - n_sites / 2.0
