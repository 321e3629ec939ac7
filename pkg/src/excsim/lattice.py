"""Tight-binding ring lattices and the coupled-channel equation of motion.

Each channel is a ring of ``n_sites`` identical sites with nearest-neighbour
hopping ``hopping`` and on-site energy ``site_energy``.  Channels are coupled
site-by-site through a star topology: channel 0 is the hub and every other
channel couples only to it.  For two channels the star is just the symmetric
pair.  The single-excitation amplitudes ``u[c, j]`` obey

    i*hbar * du[c, j]/dt = site_energy * u[c, j]
                           + hopping * (u[c, j-1] + u[c, j+1])
                           + chi_j(t) * sum_d A[c, d] * u[d, j]

with periodic site index ``j`` and star adjacency ``A``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class LatticeParams:
    """Geometry and energies of one ring channel.

    ``hopping`` sets the natural energy unit and ``spacing`` the length unit;
    ``hbar`` is pinned to 1 so times are in units of hbar/hopping.
    """

    n_sites: int = 600
    spacing: float = 1.0
    site_energy: float = 0.0
    hopping: float = 1.0
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if not isinstance(self.n_sites, int) or self.n_sites < 4:
            raise ConfigurationError(f"n_sites: must be an integer >= 4, got {self.n_sites!r}")
        if not (math.isfinite(self.spacing) and self.spacing > 0):
            raise ConfigurationError(f"spacing: must be finite and > 0, got {self.spacing!r}")
        if not math.isfinite(self.site_energy):
            raise ConfigurationError(f"site_energy: must be finite, got {self.site_energy!r}")
        if not math.isfinite(self.hopping):
            raise ConfigurationError(f"hopping: must be finite, got {self.hopping!r}")
        if self.hbar != 1.0:
            raise ConfigurationError("hbar: fixed to 1 (natural units); other values are unsupported")


@dataclass(frozen=True)
class WaveState:
    """Complex amplitudes with shape (n_channels, n_sites) at a given time."""

    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 2 or amps.shape[0] < 1 or amps.shape[1] < 1:
            raise ConfigurationError(f"amplitudes: expected a 2-D (channels, sites) array, got shape {amps.shape}")
        object.__setattr__(self, "amplitudes", amps)
        if not math.isfinite(self.time):
            raise ConfigurationError(f"time: must be finite, got {self.time!r}")

    @property
    def n_channels(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def n_sites(self) -> int:
        return self.amplitudes.shape[1]

    def norm(self) -> float:
        """Total probability sum_cj |u[c, j]|^2."""
        a = self.amplitudes
        return float(np.sum(a.real * a.real + a.imag * a.imag))


@dataclass(frozen=True)
class WavenumberGrid:
    """Discrete wavenumbers k_m = 2*pi*m/(n_sites*spacing) allowed on the ring."""

    indices: np.ndarray
    wavenumbers: np.ndarray


def wavenumber_grid(params: LatticeParams) -> WavenumberGrid:
    m = np.arange(params.n_sites)
    k = 2.0 * np.pi * m / (params.n_sites * params.spacing)
    return WavenumberGrid(indices=m, wavenumbers=k)


def dispersion_omega(k: float | np.ndarray, params: LatticeParams) -> float | np.ndarray:
    """Ring band: omega(k) = (site_energy + 2*hopping*cos(k*spacing)) / hbar."""
    w = (params.site_energy + 2.0 * params.hopping * np.cos(k * params.spacing)) / params.hbar
    return float(w) if np.isscalar(k) else w


def group_velocity(k: float | np.ndarray, params: LatticeParams) -> float | np.ndarray:
    """d(omega)/dk = -2*spacing*hopping*sin(k*spacing) / hbar."""
    v = -2.0 * params.spacing * params.hopping * np.sin(k * params.spacing) / params.hbar
    return float(v) if np.isscalar(k) else v


def drift_velocity(k0: float, params: LatticeParams) -> float:
    """Envelope velocity of a packet built with per-site phase exp(-i*k0*spacing*j).

    The phase convention puts the spectral weight at -k0, so the packet moves
    at group_velocity(-k0) = +2*spacing*hopping*sin(k0*spacing)/hbar.
    """
    return 2.0 * params.spacing * params.hopping * math.sin(k0 * params.spacing) / params.hbar


def coupling_matrix(n_channels: int) -> np.ndarray:
    """Star adjacency: channel 0 couples to every other channel, nothing else."""
    if n_channels < 1:
        raise ConfigurationError(f"n_channels: must be >= 1, got {n_channels}")
    a = np.zeros((n_channels, n_channels))
    a[0, 1:] = 1.0
    a[1:, 0] = 1.0
    return a


def apply_hamiltonian(
    amplitudes: np.ndarray,
    params: LatticeParams,
    chi: float | np.ndarray,
    adjacency: np.ndarray,
) -> np.ndarray:
    """du/dt = -i/hbar * (site + hop + inter-channel) applied to raw amplitudes.

    ``chi`` is either a scalar (uniform coupling) or a per-site array.
    """
    h = params.hopping * (np.roll(amplitudes, 1, axis=1) + np.roll(amplitudes, -1, axis=1))
    if params.site_energy != 0.0:
        h += params.site_energy * amplitudes
    if adjacency.shape[0] > 1:
        h += chi * (adjacency @ amplitudes)
    return (-1j / params.hbar) * h


def hamiltonian_rhs(state: WaveState, params: LatticeParams, profile, t: float | None = None) -> np.ndarray:
    """Time-derivative of ``state.amplitudes`` under coupling ``profile``.

    ``profile`` must provide ``values(n_sites, t, spacing)``; see
    :mod:`excsim.coupling`.
    """
    if state.n_sites != params.n_sites:
        raise ConfigurationError(
            f"state has {state.n_sites} sites but params expect {params.n_sites}")
    when = state.time if t is None else t
    chi = profile.values(params.n_sites, when, params.spacing)
    return apply_hamiltonian(state.amplitudes, params, chi, coupling_matrix(state.n_channels))
