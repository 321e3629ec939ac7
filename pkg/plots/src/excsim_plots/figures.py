"""Figure rendering from simulator CSV artifacts.

Every input goes through explicit column-schema validation first, so a
truncated or hand-edited CSV fails with an expected-vs-found diagnostic
instead of producing a partial plot. Rendering never writes anything except
the requested image file.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
# fixed salt: SVG element ids derive from it, so identical inputs give
# identical bytes
matplotlib.rcParams["svg.hashsalt"] = "excsim-plots"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

KINDS = ("oscillation", "snapshot", "difference", "mzi_response")

SNAPSHOT_COLUMNS = ["t", "channel", "site", "re", "im"]
COUPLER_COLUMNS = ["site", "chi"]


class SchemaError(ValueError):
    """An input CSV does not match the expected column layout."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure: what to draw, from which files, to which image."""

    kind: str
    inputs: tuple[Path, ...]
    output: Path
    title: str | None = None
    xlabel: str | None = None
    ylabel: str | None = None
    phase: float = math.pi / 2   # compensation phase for the difference kind
    dpi: int = 150

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind: expected one of {KINDS}, got {self.kind!r}")
        if not self.inputs:
            raise ValueError("inputs: at least one input file is required")
        object.__setattr__(self, "inputs", tuple(Path(p) for p in self.inputs))
        object.__setattr__(self, "output", Path(self.output))
        if not math.isfinite(self.phase):
            raise ValueError("phase: must be finite")
        if self.dpi <= 0:
            raise ValueError("dpi: must be positive")


def _read_table(path: Path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        header = next(csv.reader(fh), None)
    if not header:
        raise SchemaError(f"{path}: empty file, no header row")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.size and data.shape[1] != len(header):
        raise SchemaError(f"{path}: rows have {data.shape[1]} fields, "
                          f"header has {len(header)}")
    return header, data


def _check_columns(path: Path, header: list[str], expected: list[str]) -> None:
    if header != expected:
        missing = [c for c in expected if c not in header]
        extra = [c for c in header if c not in expected]
        detail = ""
        if missing:
            detail += f"; missing {missing}"
        if extra:
            detail += f"; unexpected {extra}"
        raise SchemaError(f"{path}: expected columns {expected}, "
                          f"found {header}{detail}")


def _check_population_columns(path: Path, header: list[str],
                              prefix: list[str]) -> int:
    """Validate `prefix + [P1, ..., PC]` layout; returns the channel count."""
    rest = header[len(prefix):]
    expected = prefix + [f"P{i + 1}" for i in range(max(len(rest), 1))]
    if header[:len(prefix)] != prefix or not rest or \
            rest != [f"P{i + 1}" for i in range(len(rest))]:
        _check_columns(path, header, expected)
    return len(rest)


def load_trajectory(path: Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns (times, norms, populations[sample, channel])."""
    header, data = _read_table(path)
    n_channels = _check_population_columns(path, header, ["t", "norm"])
    return data[:, 0], data[:, 1], data[:, 2:2 + n_channels]


def load_snapshots(path: Path) -> dict[float, np.ndarray]:
    """Returns {time: complex amplitudes[channel, site]} from a snapshot CSV."""
    header, data = _read_table(path)
    _check_columns(path, header, SNAPSHOT_COLUMNS)
    if not data.size:
        raise SchemaError(f"{path}: no snapshot rows")
    out: dict[float, np.ndarray] = {}
    for t in np.unique(data[:, 0]):
        rows = data[data[:, 0] == t]
        channels = rows[:, 1].astype(int)
        sites = rows[:, 2].astype(int)
        amps = np.zeros((channels.max(), sites.max() + 1), dtype=complex)
        amps[channels - 1, sites] = rows[:, 3] + 1j * rows[:, 4]
        out[float(t)] = amps
    return out


def load_coupler(path: Path) -> tuple[np.ndarray, np.ndarray]:
    header, data = _read_table(path)
    _check_columns(path, header, COUPLER_COLUMNS)
    return data[:, 0], data[:, 1]


def load_sweep(path: Path) -> tuple[str, np.ndarray, np.ndarray]:
    """Returns (parameter name, values, populations[value, channel])."""
    header, data = _read_table(path)
    if len(header) < 2:
        raise SchemaError(f"{path}: expected columns ['<parameter>', 'P1', ...], "
                          f"found {header}")
    n_channels = _check_population_columns(path, header, header[:1])
    return header[0], data[:, 0], data[:, 1:1 + n_channels]


def _render_oscillation(spec: FigureSpec, fig) -> None:
    t, norm, pops = load_trajectory(spec.inputs[0])
    ax = fig.subplots()
    for c in range(pops.shape[1]):
        ax.plot(t, pops[:, c] / norm, label=f"channel {c + 1}")
    ax.set_xlabel(spec.xlabel or "time")
    ax.set_ylabel(spec.ylabel or "population")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(frameon=False)


def _render_snapshot(spec: FigureSpec, fig) -> None:
    snaps = load_snapshots(spec.inputs[0])
    coupler = load_coupler(spec.inputs[1]) if len(spec.inputs) > 1 else None
    times = sorted(snaps)
    scale = max(np.abs(a).max() for a in snaps.values())
    offset = 1.2 * (scale if scale > 0 else 1.0)
    axes = fig.subplots(len(times), 1, sharex=True, squeeze=False)[:, 0]
    for ax, t in zip(axes, times):
        amps = snaps[t]
        n_channels = amps.shape[0]
        sites = np.arange(amps.shape[1])
        if coupler is not None and coupler[1].max() > 0:
            # coupling footprint, scaled into the gap between channel baselines
            chi = coupler[1] / coupler[1].max() * 0.9 * offset
            ax.fill_between(coupler[0], -chi, chi, color="C3", alpha=0.25, lw=0)
        for c in range(n_channels):
            base = offset * (n_channels - 1 - 2 * c)
            env = np.abs(amps[c])
            ax.axhline(base, color="0.85", lw=0.5)
            ax.fill_between(sites, base - env, base + env, color="0.75", lw=0)
            ax.plot(sites, base + amps[c].real, color=f"C{c % 10}", lw=0.8,
                    label=f"channel {c + 1}" if t == times[0] else None)
        ax.set_yticks([])
        ax.set_ylabel(f"t = {t:g}")
    axes[0].legend(frameon=False, loc="upper right")
    axes[-1].set_xlabel(spec.xlabel or "site")


def _render_difference(spec: FigureSpec, fig) -> None:
    snaps = load_snapshots(spec.inputs[0])
    ax = fig.subplots()
    for t in sorted(snaps):
        amps = snaps[t]
        if amps.shape[0] != 2:
            raise ValueError(f"{spec.inputs[0]}: difference figure needs exactly "
                             f"2 channels, found {amps.shape[0]}")
        diff = np.abs(amps[0] - np.exp(1j * spec.phase) * amps[1])
        ax.plot(np.arange(amps.shape[1]), diff, label=f"t = {t:g}")
    ax.set_xlabel(spec.xlabel or "site")
    ax.set_ylabel(spec.ylabel or "compensated amplitude difference")
    ax.legend(frameon=False, title=f"phase = {spec.phase:g}")


def _render_mzi_response(spec: FigureSpec, fig) -> None:
    name, values, pops = load_sweep(spec.inputs[0])
    ax = fig.subplots()
    if name == "delta" and len(values):
        # analytic two-port reference is only meaningful for a phase sweep
        dense = np.linspace(values.min(), values.max(), 400)
        ax.plot(dense, np.sin(dense / 2) ** 2, "k--", lw=0.8,
                label="sin^2(delta/2)")
    for c in range(pops.shape[1]):
        ax.plot(values, pops[:, c], "o-", ms=4, label=f"channel {c + 1}")
    ax.set_xlabel(spec.xlabel or name)
    ax.set_ylabel(spec.ylabel or "population")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(frameon=False)


_RENDERERS = {
    "oscillation": _render_oscillation,
    "snapshot": _render_snapshot,
    "difference": _render_difference,
    "mzi_response": _render_mzi_response,
}

# suppress creation timestamps so identical inputs give identical bytes
_METADATA = {".svg": {"Date": None}, ".pdf": {"CreationDate": None}}


def render(spec: FigureSpec) -> Path:
    for path in spec.inputs:
        if not path.is_file():
            raise OSError(f"input file not found: {path}")
    fig = plt.figure(figsize=(6.4, 4.8))
    try:
        _RENDERERS[spec.kind](spec, fig)
        if spec.title:
            fig.suptitle(spec.title)
        fig.tight_layout()
        fig.savefig(spec.output, dpi=spec.dpi,
                    metadata=_METADATA.get(spec.output.suffix.lower()))
    finally:
        plt.close(fig)
    return spec.output
