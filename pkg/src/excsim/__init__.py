"""Deterministic wave-packet dynamics on coupled tight-binding rings.

Simulates the single-excitation sector of identical 1-D ring lattices whose
channels couple site-by-site, covering inter-channel population oscillation,
wave-packet beam splitting on localised couplers, and Mach-Zehnder
interferometry, each validated against closed-form two-port predictions.
"""

from .config import (
    CouplingSettings,
    IntegratorSettings,
    RunConfig,
    SweepSpec,
    default_config,
    parse_config,
    render_config,
    sweep_children,
)
from .coupling import (
    CompositeProfile,
    CouplerCalibration,
    CouplingProfile,
    calibrate_sigma_chi,
    coupler_calibration,
    coupling_phase,
    equal_population_time,
    evaluate_chi,
    rabi_period,
    splitting_angle,
    time_for_phase,
)
from .errors import ConfigurationError, ExcsimError, SimulationError
from .experiments import (
    ScenarioReport,
    run_beam_splitter,
    run_custom,
    run_interference,
    run_mach_zehnder,
    run_multichannel_split,
    run_oscillation,
    star_oracle_populations,
    transfer_matrix,
    transfer_times,
    two_port_oracle,
)
from .integrator import IntegratorConfig, Trajectory, evolve, step
from .lattice import (
    LatticeParams,
    WaveState,
    WavenumberGrid,
    apply_hamiltonian,
    coupling_matrix,
    dispersion_omega,
    drift_velocity,
    group_velocity,
    hamiltonian_rhs,
    wavenumber_grid,
)
from .packets import (
    PacketSpec,
    centroid_displacement,
    channel_populations,
    make_gaussian_packet,
    packet_centroid,
    phase_compensated_difference,
)
from .runner import execute, execute_single, run_scenario

__version__ = "0.1.0"

__all__ = [
    "CompositeProfile",
    "ConfigurationError",
    "CouplerCalibration",
    "CouplingProfile",
    "CouplingSettings",
    "ExcsimError",
    "IntegratorConfig",
    "IntegratorSettings",
    "LatticeParams",
    "PacketSpec",
    "RunConfig",
    "ScenarioReport",
    "SimulationError",
    "SweepSpec",
    "Trajectory",
    "WaveState",
    "WavenumberGrid",
    "apply_hamiltonian",
    "calibrate_sigma_chi",
    "centroid_displacement",
    "channel_populations",
    "coupler_calibration",
    "coupling_matrix",
    "coupling_phase",
    "default_config",
    "dispersion_omega",
    "drift_velocity",
    "equal_population_time",
    "evaluate_chi",
    "evolve",
    "execute",
    "execute_single",
    "group_velocity",
    "hamiltonian_rhs",
    "make_gaussian_packet",
    "packet_centroid",
    "parse_config",
    "phase_compensated_difference",
    "rabi_period",
    "render_config",
    "run_beam_splitter",
    "run_custom",
    "run_interference",
    "run_mach_zehnder",
    "run_multichannel_split",
    "run_oscillation",
    "run_scenario",
    "splitting_angle",
    "star_oracle_populations",
    "step",
    "sweep_children",
    "time_for_phase",
    "transfer_matrix",
    "transfer_times",
    "two_port_oracle",
    "wavenumber_grid",
]
