"""Execute validated configs: scenario dispatch, CSV/JSON artifacts, sweeps.

Every run writes the same artifact set and is byte-identical when repeated:
floats are serialised with 17 significant digits, JSON keys are sorted, and
nothing time- or host-dependent lands in any file.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .config import RunConfig, render_config, sweep_children
from .coupling import CouplingProfile
from .errors import ConfigurationError, SimulationError
from .experiments import (
    ScenarioReport,
    run_beam_splitter,
    run_custom,
    run_interference,
    run_mach_zehnder,
    run_multichannel_split,
    run_oscillation,
)

try:
    from importlib.metadata import version as _dist_version
    VERSION = _dist_version("excsim")
except Exception:  # pragma: no cover - not installed
    VERSION = "0+unknown"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _jsonify(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def run_scenario(cfg: RunConfig) -> ScenarioReport:
    """Dispatch one (sweep-free) config to its scenario driver."""
    integ = cfg.integrator
    kw = dict(dt=integ.dt, t_end=integ.t_end, sample_every=integ.sample_every,
              snapshot_times=integ.snapshot_times)
    c = cfg.coupling
    if cfg.scenario == "oscillation":
        profile = (CouplingProfile(kind="zero") if c.kind == "zero"
                   else CouplingProfile(kind=c.kind, chi0=c.chi0, t0=c.t0))
        return run_oscillation(cfg.lattice, profile=profile, packet=cfg.packet, **kw)
    if cfg.scenario == "beam_splitter":
        return run_beam_splitter(cfg.lattice, cfg.packet, chi0=c.chi0,
                                 sigma_chi=None if c.auto_sigma_chi else c.sigma_chi,
                                 coupler_center=c.center, **kw)
    if cfg.scenario == "interference":
        return run_interference(cfg.lattice, cfg.packet, chi0=c.chi0, pre_phase=cfg.pre_phase,
                                sigma_chi=None if c.auto_sigma_chi else c.sigma_chi,
                                coupler_center=c.center, **kw)
    if cfg.scenario == "mach_zehnder":
        return run_mach_zehnder(cfg.lattice, cfg.packet, delta=cfg.delta, chi0=c.chi0,
                                sigma_chi=None if c.auto_sigma_chi else c.sigma_chi, **kw)
    if cfg.scenario == "multichannel":
        if c.kind != "uniform_exponential_switch" or (c.t0 is not None and math.isfinite(c.t0)):
            raise ConfigurationError(
                "multichannel: needs constant coupling (kind uniform_exponential_switch, t0 .inf)")
        return run_multichannel_split(cfg.lattice, cfg.n_daughters, cfg.packet, chi0=c.chi0, **kw)
    if cfg.scenario == "custom":
        if integ.t_end is None:
            raise ConfigurationError("integrator.t_end: required for the custom scenario")
        if c.kind == "spatial_gaussian":
            profile = CouplingProfile(kind=c.kind, chi0=c.chi0, sigma_chi=c.sigma_chi,
                                      center=c.center if c.center is not None else cfg.lattice.n_sites / 2.0)
        elif c.kind == "zero":
            profile = CouplingProfile(kind="zero")
        else:
            profile = CouplingProfile(kind=c.kind, chi0=c.chi0, t0=c.t0)
        kw["t_end"] = integ.t_end
        return run_custom(cfg.lattice, profile, cfg.packet, **kw)
    raise ConfigurationError(f"scenario: unknown value {cfg.scenario!r}")


def _write_trajectory(path: Path, report: ScenarioReport) -> None:
    traj = report.trajectory
    n_channels = traj.populations.shape[1]
    header = "t,norm," + ",".join(f"P{c + 1}" for c in range(n_channels))
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for i in range(len(traj.times)):
            row = [_fmt(traj.times[i]), _fmt(traj.norms[i])]
            row += [_fmt(p) for p in traj.populations[i]]
            fh.write(",".join(row) + "\n")


def _write_snapshots(path: Path, report: ScenarioReport) -> None:
    snaps = report.trajectory.snapshots
    if not snaps:
        return
    with open(path, "w", newline="\n") as fh:
        fh.write("t,channel,site,re,im\n")
        for t, state in snaps:
            a = state.amplitudes
            for c in range(state.n_channels):
                for j in range(state.n_sites):
                    fh.write(f"{_fmt(t)},{c + 1},{j},{_fmt(a[c, j].real)},"
                             f"{_fmt(a[c, j].imag)}\n")


def _write_coupler(path: Path, report: ScenarioReport) -> None:
    if report.coupler_sites is None:
        return
    with open(path, "w", newline="\n") as fh:
        fh.write("site,chi\n")
        for j, chi in enumerate(report.coupler_sites):
            fh.write(f"{j},{_fmt(chi)}\n")


def _check_metrics_finite(report: ScenarioReport) -> None:
    for name, value in report.derived_metrics.items():
        if isinstance(value, float) and not math.isfinite(value):
            raise SimulationError(f"metric {name!r} is not finite ({value}); the run is unusable")
    if not np.all(np.isfinite(report.final_populations)):
        raise SimulationError("final populations are not finite; the run is unusable")


def execute_single(cfg: RunConfig, out_dir: Path) -> dict:
    """Run one config and write trajectory/report/manifest artifacts into out_dir."""
    report = run_scenario(cfg)
    _check_metrics_finite(report)
    out_dir.mkdir(parents=True, exist_ok=True)

    outputs = ["trajectory.csv", "report.json", "manifest.json"]
    _write_trajectory(out_dir / "trajectory.csv", report)
    if report.trajectory.snapshots:
        _write_snapshots(out_dir / "snapshots.csv", report)
        outputs.append("snapshots.csv")
    if report.coupler_sites is not None:
        _write_coupler(out_dir / "coupler.csv", report)
        outputs.append("coupler.csv")

    traj = report.trajectory
    body = {
        "scenario": report.scenario,
        "final_time": float(traj.times[-1]),
        "final_norm": float(traj.norms[-1]),
        "norm_drift": traj.norm_drift,
        "final_populations": report.final_populations,
        "metrics": report.derived_metrics,
        "events": [{"time": t, "channel": ch, "phase": ph} for t, ch, ph in traj.events],
        "n_samples": int(len(traj.times)),
    }
    (out_dir / "report.json").write_text(
        json.dumps(_jsonify(body), indent=2, sort_keys=True) + "\n")

    manifest = {
        "tool": "excsim",
        "version": VERSION,
        "scenario": report.scenario,
        "config_yaml": render_config(cfg),
        "resolved": report.resolved,
        "outputs": sorted(outputs),
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(_jsonify(manifest), indent=2, sort_keys=True) + "\n")

    return {
        "output_dir": str(out_dir),
        "scenario": report.scenario,
        "final_populations": [float(p) for p in report.final_populations],
        "metrics": _jsonify(report.derived_metrics),
    }


def _sweep_task(args: tuple[RunConfig, str]) -> dict:
    cfg, out_dir = args
    return execute_single(cfg, Path(out_dir))


def _sweep_workers() -> int:
    raw = os.environ.get("EXCSIM_THREADS", "").strip()
    if not raw:
        return 1
    try:
        workers = int(raw)
    except ValueError as exc:
        raise ConfigurationError(f"EXCSIM_THREADS: expected an integer, got {raw!r}") from exc
    return max(1, workers)


def execute(cfg: RunConfig, out_dir: str | os.PathLike | None = None) -> dict:
    """Run a config (expanding sweeps) under ``out_dir`` and return a summary.

    Sweep values each get a ``value_NNN`` subdirectory plus a combined
    ``sweep.csv`` of final populations.
    """
    base = Path(out_dir if out_dir is not None else (cfg.output_dir or f"runs/{cfg.scenario}"))
    if cfg.sweep is None:
        return execute_single(cfg, base)

    children = sweep_children(cfg)
    tasks = [(child, str(base / f"value_{i:03d}")) for i, child in enumerate(children)]
    workers = _sweep_workers()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_task, tasks))
    else:
        results = [_sweep_task(t) for t in tasks]

    base.mkdir(parents=True, exist_ok=True)
    n_channels = max(len(r["final_populations"]) for r in results)
    header = cfg.sweep.parameter + "," + ",".join(f"P{c + 1}" for c in range(n_channels))
    with open(base / "sweep.csv", "w", newline="\n") as fh:
        fh.write(header + "\n")
        for value, result in zip(cfg.sweep.values, results):
            pops = result["final_populations"]
            cells = [_fmt(value)] + [_fmt(p) for p in pops]
            cells += [""] * (n_channels - len(pops))
            fh.write(",".join(cells) + "\n")

    manifest = {
        "tool": "excsim",
        "version": VERSION,
        "scenario": cfg.scenario,
        "config_yaml": render_config(cfg),
        "sweep": {
            "parameter": cfg.sweep.parameter,
            "values": list(cfg.sweep.values),
            "children": [str(Path(t[1]).name) for t in tasks],
        },
        "outputs": ["sweep.csv"],
    }
    (base / "manifest.json").write_text(
        json.dumps(_jsonify(manifest), indent=2, sort_keys=True) + "\n")

    return {
        "output_dir": str(base),
        "scenario": cfg.scenario,
        "sweep_parameter": cfg.sweep.parameter,
        "rows": [{"value": float(v), "final_populations": r["final_populations"]}
                 for v, r in zip(cfg.sweep.values, results)],
    }
