"""Inter-channel coupling profiles and coupler calibration.

Uniform profiles depend only on time and drive Rabi-like population exchange:
with Theta(t) = integral of chi over [0, t] / hbar, a packet started in one
channel of a symmetric pair has P_other(t) = sin(Theta)^2 exactly, whatever
its shape.  Spatially localised Gaussian profiles act as beam splitters for a
moving packet; the splitting angle is theta = spacing * sum_j chi_j / (hbar *
|v_g|), and a 50/50 split (theta = pi/4) needs

    sigma_chi = spacing * hopping * sqrt(2*pi) * |sin(k0*spacing)| / (4 * chi0 * hbar)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .lattice import LatticeParams, group_velocity

UNIFORM_KINDS = ("uniform_exponential_switch", "uniform_exponential_ramp")
KINDS = UNIFORM_KINDS + ("spatial_gaussian", "zero")


@dataclass(frozen=True)
class CouplingProfile:
    """One coupling law chi_j(t), selected by ``kind``.

    kind = "uniform_exponential_switch": chi(t) = chi0 * exp(-t/t0), site-independent.
        t0 = inf gives a constant coupling.
    kind = "uniform_exponential_ramp": chi(t) = chi0 * (1 - exp(-t/t0)), switched on
        smoothly towards chi0.
    kind = "spatial_gaussian": chi_j = chi0 * exp(-d(j, center)^2 / (2*sigma_chi^2)),
        static in time, with d the minimal-image site distance and sigma_chi in
        units of the site spacing.
    kind = "zero": no coupling.

    Both uniform kinds vanish for t < 0.
    """

    kind: str
    chi0: float = 0.0
    t0: float | None = None
    sigma_chi: float | None = None
    center: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConfigurationError(f"coupling kind: unknown value {self.kind!r}; expected one of {KINDS}")
        if self.kind == "zero":
            return
        if not (math.isfinite(self.chi0) and self.chi0 >= 0):
            raise ConfigurationError(f"chi0: must be finite and >= 0, got {self.chi0!r}")
        if self.kind == "uniform_exponential_switch":
            if self.t0 is None or math.isnan(self.t0) or self.t0 <= 0:
                raise ConfigurationError(f"t0: must be > 0 (inf allowed for constant coupling), got {self.t0!r}")
        elif self.kind == "uniform_exponential_ramp":
            if self.t0 is None or not math.isfinite(self.t0) or self.t0 <= 0:
                raise ConfigurationError(f"t0: must be finite and > 0, got {self.t0!r}")
        elif self.kind == "spatial_gaussian":
            if self.sigma_chi is None or not (math.isfinite(self.sigma_chi) and self.sigma_chi > 0):
                raise ConfigurationError(f"sigma_chi: must be finite and > 0, got {self.sigma_chi!r}")
            if self.center is None or not math.isfinite(self.center):
                raise ConfigurationError(f"center: required for spatial_gaussian, got {self.center!r}")

    @property
    def static(self) -> bool:
        """True when chi does not depend on time (for t >= 0)."""
        return self.kind in ("spatial_gaussian", "zero")

    def values(self, n_sites: int, t: float, spacing: float = 1.0) -> float | np.ndarray:
        """chi at every site: a scalar for uniform kinds, else an (n_sites,) array."""
        if self.kind == "zero":
            return 0.0
        if self.kind == "uniform_exponential_switch":
            if t < 0.0:
                return 0.0
            return self.chi0 * math.exp(-t / self.t0)
        if self.kind == "uniform_exponential_ramp":
            if t < 0.0:
                return 0.0
            return self.chi0 * (1.0 - math.exp(-t / self.t0))
        d = _minimal_image(np.arange(n_sites) - self.center, n_sites)
        return self.chi0 * np.exp(-(d * d) / (2.0 * self.sigma_chi * self.sigma_chi))


def _minimal_image(displacement: np.ndarray, n_sites: int) -> np.ndarray:
    """Wrap site displacements into (-n_sites/2, n_sites/2]."""
    return (displacement + n_sites / 2.0) % n_sites - n_sites / 2.0


@dataclass(frozen=True)
class CompositeProfile:
    """Sum of several profiles, e.g. two Gaussian couplers on one ring."""

    parts: tuple[CouplingProfile, ...]

    def __post_init__(self) -> None:
        if len(self.parts) < 1:
            raise ConfigurationError("CompositeProfile: needs at least one part")

    @property
    def static(self) -> bool:
        return all(p.static for p in self.parts)

    def values(self, n_sites: int, t: float, spacing: float = 1.0) -> float | np.ndarray:
        total: float | np.ndarray = 0.0
        for p in self.parts:
            total = total + p.values(n_sites, t, spacing)
        return total


def evaluate_chi(profile: CouplingProfile, site: int, t: float, n_sites: int, spacing: float = 1.0) -> float:
    """chi at one site; convenience wrapper around ``profile.values``."""
    v = profile.values(n_sites, t, spacing)
    return float(v if np.isscalar(v) else v[site])


@dataclass(frozen=True)
class CouplerCalibration:
    """Width and strength of a Gaussian coupler tuned to a 50/50 split."""

    chi0: float
    wavenumber: float
    coupler_length: float
    sigma_chi: float
    splitting_angle: float


def calibrate_sigma_chi(chi0: float, k0: float, params: LatticeParams) -> float:
    """Gaussian width (units of spacing) that makes a moving packet split 50/50.

    Derived from theta = spacing*sum_j chi_j/(hbar*|v_g|) = pi/4 with
    sum_j chi_j = chi0 * sqrt(2*pi) * sigma_chi.
    """
    if not (math.isfinite(chi0) and chi0 > 0):
        raise ConfigurationError(f"chi0: must be finite and > 0 to calibrate, got {chi0!r}")
    s = abs(math.sin(k0 * params.spacing))
    if s < 1e-12:
        raise ConfigurationError(
            f"cannot calibrate sigma_chi at k0*spacing = {k0 * params.spacing!r}: "
            "group velocity vanishes (sin(k0*spacing) = 0)")
    return math.sqrt(2.0 * math.pi) * abs(params.hopping) * s / (4.0 * chi0 * params.hbar)


def coupler_calibration(chi0: float, k0: float, params: LatticeParams) -> CouplerCalibration:
    """Full calibration record for a 50/50 Gaussian coupler at wavenumber k0."""
    sigma = calibrate_sigma_chi(chi0, k0, params)
    vg = abs(group_velocity(k0, params))
    length = math.pi * vg / (4.0 * chi0)
    return CouplerCalibration(
        chi0=chi0,
        wavenumber=k0,
        coupler_length=length,
        sigma_chi=sigma,
        splitting_angle=math.pi / 4.0,
    )


def splitting_angle(profile: CouplingProfile, k0: float, params: LatticeParams) -> float:
    """theta = spacing * sum_j chi_j / (hbar * |v_g(k0)|) for a Gaussian coupler."""
    if profile.kind != "spatial_gaussian":
        raise ConfigurationError(f"splitting_angle: needs a spatial_gaussian profile, got kind={profile.kind!r}")
    vg = abs(group_velocity(k0, params))
    if vg < 1e-12:
        raise ConfigurationError("splitting_angle: group velocity vanishes at this wavenumber")
    chi = profile.values(params.n_sites, 0.0, params.spacing)
    return params.spacing * float(np.sum(chi)) / (params.hbar * vg)


def coupling_phase(profile: CouplingProfile, t: float, hbar: float = 1.0) -> float:
    """Accumulated angle Theta(t) = integral_0^t chi(s) ds / hbar for uniform kinds."""
    if t < 0:
        return 0.0
    if profile.kind == "zero":
        return 0.0
    if profile.kind == "uniform_exponential_switch":
        if math.isinf(profile.t0):
            return profile.chi0 * t / hbar
        return profile.chi0 * profile.t0 * (1.0 - math.exp(-t / profile.t0)) / hbar
    if profile.kind == "uniform_exponential_ramp":
        return profile.chi0 * (t - profile.t0 * (1.0 - math.exp(-t / profile.t0))) / hbar
    raise ConfigurationError(f"coupling_phase: only defined for uniform kinds, got {profile.kind!r}")


def time_for_phase(profile: CouplingProfile, theta: float, hbar: float = 1.0) -> float | None:
    """Earliest t with Theta(t) = theta, or None when the profile never gets there.

    Theta is nondecreasing for every uniform kind, so bisection is safe.
    """
    if theta <= 0:
        return 0.0
    if profile.kind == "zero" or profile.chi0 == 0.0:
        return None
    if profile.kind == "uniform_exponential_switch" and math.isfinite(profile.t0):
        if theta >= profile.chi0 * profile.t0 / hbar * (1.0 - 1e-12):
            return None
    lo, hi = 0.0, 1.0
    while coupling_phase(profile, hi, hbar) < theta:
        hi *= 2.0
        if hi > 1e12:
            return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if coupling_phase(profile, mid, hbar) < theta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def equal_population_time(n_daughters: int, chi: float) -> float:
    """Time at which a constant star coupling equalises all n_daughters+1 channels.

    Parent population cos(sqrt(n)*chi*t)^2 first reaches 1/(n+1) at
    t = arccos(1/sqrt(n+1)) / (chi*sqrt(n)).
    """
    if not isinstance(n_daughters, int) or n_daughters < 1:
        raise ConfigurationError(f"n_daughters: must be an integer >= 1, got {n_daughters!r}")
    if not (math.isfinite(chi) and chi > 0):
        raise ConfigurationError(f"chi: must be finite and > 0, got {chi!r}")
    return math.acos(1.0 / math.sqrt(n_daughters + 1)) / (chi * math.sqrt(n_daughters))


def rabi_period(chi: float) -> float:
    """Full population-exchange period pi/chi of a symmetric pair under constant chi."""
    if not (math.isfinite(chi) and chi > 0):
        raise ConfigurationError(f"chi: must be finite and > 0, got {chi!r}")
    return math.pi / chi
