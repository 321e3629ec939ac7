"""YAML run configuration: strict parsing, per-scenario defaults, round-trip rendering.

Unknown keys are rejected with the full dotted path so typos never silently
fall back to defaults.  Every field has a scenario-appropriate default; a
minimal config is just ``scenario: beam_splitter``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

import yaml

from .errors import ConfigurationError
from .lattice import LatticeParams
from .packets import PacketSpec

SCENARIOS = ("oscillation", "beam_splitter", "interference", "mach_zehnder", "multichannel", "custom")

_SPLITTER_FAMILY = ("beam_splitter", "interference", "mach_zehnder")

# scenario-specific top-level keys
_EXTRA_KEYS = {
    "delta": ("mach_zehnder",),
    "n_daughters": ("multichannel",),
    "pre_phase": ("interference",),
}


@dataclass(frozen=True)
class CouplingSettings:
    """Raw coupling section; resolved into a CouplingProfile by the runner."""

    kind: str = "spatial_gaussian"
    chi0: float = 0.1
    t0: float | None = None
    sigma_chi: float | None = None
    auto_sigma_chi: bool = True
    center: float | None = None


@dataclass(frozen=True)
class IntegratorSettings:
    """Raw integrator section; t_end = None lets the scenario pick its own."""

    dt: float = 0.01
    t_end: float | None = None
    sample_every: int = 10
    snapshot_times: tuple[float, ...] = ()


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter sweep: dotted path into the config plus its values."""

    parameter: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    lattice: LatticeParams = field(default_factory=LatticeParams)
    packet: PacketSpec = field(default_factory=PacketSpec)
    coupling: CouplingSettings = field(default_factory=CouplingSettings)
    integrator: IntegratorSettings = field(default_factory=IntegratorSettings)
    delta: float = 0.0
    n_daughters: int = 3
    pre_phase: float = -math.pi / 2.0
    sweep: SweepSpec | None = None
    output_dir: str | None = None


_SCENARIO_DEFAULTS: dict[str, dict[str, object]] = {
    "oscillation": {
        "packet": PacketSpec(sigma=20.0, center=None, wavenumber=0.942, channel=0),
        "coupling": CouplingSettings(kind="uniform_exponential_ramp", chi0=0.02, t0=25.0,
                                     sigma_chi=None, auto_sigma_chi=False, center=None),
    },
    "beam_splitter": {
        "packet": PacketSpec(sigma=20.0, center=None, wavenumber=5.34, channel=0),
        "coupling": CouplingSettings(kind="spatial_gaussian", chi0=0.1, t0=None,
                                     sigma_chi=None, auto_sigma_chi=True, center=None),
    },
    "multichannel": {
        "packet": PacketSpec(sigma=20.0, center=None, wavenumber=0.942, channel=0),
        "coupling": CouplingSettings(kind="uniform_exponential_switch", chi0=0.02, t0=math.inf,
                                     sigma_chi=None, auto_sigma_chi=False, center=None),
    },
    "custom": {
        "packet": PacketSpec(sigma=20.0, center=None, wavenumber=5.34, channel=0),
        "coupling": CouplingSettings(kind="zero", chi0=0.0, t0=None,
                                     sigma_chi=None, auto_sigma_chi=False, center=None),
    },
}
_SCENARIO_DEFAULTS["interference"] = _SCENARIO_DEFAULTS["beam_splitter"]
_SCENARIO_DEFAULTS["mach_zehnder"] = _SCENARIO_DEFAULTS["beam_splitter"]


def default_config(scenario: str) -> RunConfig:
    """The complete config a bare ``scenario: <name>`` file expands to."""
    if scenario not in SCENARIOS:
        raise ConfigurationError(f"scenario: unknown value {scenario!r}; expected one of {SCENARIOS}")
    d = _SCENARIO_DEFAULTS[scenario]
    return RunConfig(scenario=scenario, packet=d["packet"], coupling=d["coupling"])


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigurationError(message)


def _as_float(value, path: str, allow_none: bool = False) -> float | None:
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _as_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{path}: expected an integer, got {value!r}")
    return value


def _as_bool(value, path: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigurationError(f"{path}: expected true/false, got {value!r}")
    return value


def _as_str(value, path: str) -> str:
    if not isinstance(value, str):
        raise ConfigurationError(f"{path}: expected a string, got {value!r}")
    return value


class _Section:
    """A mapping whose keys are checked off as they are read."""

    def __init__(self, data: dict, path: str):
        if not isinstance(data, dict):
            raise ConfigurationError(f"{path or 'config'}: expected a mapping, got {data!r}")
        self.data = data
        self.path = path
        self.seen: set[str] = set()

    def take(self, key: str, default=None):
        self.seen.add(key)
        return self.data.get(key, default)

    def has(self, key: str) -> bool:
        return key in self.data

    def finish(self) -> None:
        unknown = sorted(set(self.data) - self.seen)
        if unknown:
            prefix = f"{self.path}." if self.path else ""
            raise ConfigurationError(f"unknown key: {prefix}{unknown[0]}")


def _parse_lattice(raw: dict | None) -> LatticeParams:
    if raw is None:
        return LatticeParams()
    sec = _Section(raw, "lattice")
    params = LatticeParams(
        n_sites=_as_int(sec.take("n_sites", 600), "lattice.n_sites"),
        spacing=_as_float(sec.take("spacing", 1.0), "lattice.spacing"),
        site_energy=_as_float(sec.take("site_energy", 0.0), "lattice.site_energy"),
        hopping=_as_float(sec.take("hopping", 1.0), "lattice.hopping"),
    )
    sec.finish()
    if params.hopping == 0.0:
        raise ConfigurationError("lattice.hopping: must be nonzero (it sets the energy unit)")
    return params


def _parse_packet(raw: dict | None, default: PacketSpec) -> PacketSpec:
    if raw is None:
        return default
    sec = _Section(raw, "packet")
    spec = PacketSpec(
        sigma=_as_float(sec.take("sigma", default.sigma), "packet.sigma"),
        center=_as_float(sec.take("center", default.center), "packet.center", allow_none=True),
        wavenumber=_as_float(sec.take("wavenumber", default.wavenumber), "packet.wavenumber"),
        channel=_as_int(sec.take("channel", default.channel), "packet.channel"),
    )
    sec.finish()
    return spec


def _parse_coupling(raw: dict | None, default: CouplingSettings) -> CouplingSettings:
    if raw is None:
        return default
    sec = _Section(raw, "coupling")
    settings = CouplingSettings(
        kind=_as_str(sec.take("kind", default.kind), "coupling.kind"),
        chi0=_as_float(sec.take("chi0", default.chi0), "coupling.chi0"),
        t0=_as_float(sec.take("t0", default.t0), "coupling.t0", allow_none=True),
        sigma_chi=_as_float(sec.take("sigma_chi", default.sigma_chi), "coupling.sigma_chi", allow_none=True),
        auto_sigma_chi=_as_bool(sec.take("auto_sigma_chi", default.auto_sigma_chi), "coupling.auto_sigma_chi"),
        center=_as_float(sec.take("center", default.center), "coupling.center", allow_none=True),
    )
    # an explicit width turns calibration off unless asked for again
    if sec.has("sigma_chi") and not sec.has("auto_sigma_chi"):
        settings = replace(settings, auto_sigma_chi=False)
    sec.finish()
    from .coupling import KINDS
    if settings.kind not in KINDS:
        raise ConfigurationError(f"coupling.kind: unknown value {settings.kind!r}; expected one of {KINDS}")
    if settings.chi0 < 0 or not math.isfinite(settings.chi0):
        raise ConfigurationError(f"coupling.chi0: must be finite and >= 0, got {settings.chi0!r}")
    if settings.sigma_chi is not None and settings.sigma_chi <= 0:
        raise ConfigurationError(f"coupling.sigma_chi: must be > 0, got {settings.sigma_chi!r}")
    return settings


def _parse_integrator(raw: dict | None) -> IntegratorSettings:
    if raw is None:
        return IntegratorSettings()
    sec = _Section(raw, "integrator")
    snaps = sec.take("snapshot_times", [])
    if not isinstance(snaps, (list, tuple)):
        raise ConfigurationError(f"integrator.snapshot_times: expected a list, got {snaps!r}")
    settings = IntegratorSettings(
        dt=_as_float(sec.take("dt", 0.01), "integrator.dt"),
        t_end=_as_float(sec.take("t_end", None), "integrator.t_end", allow_none=True),
        sample_every=_as_int(sec.take("sample_every", 10), "integrator.sample_every"),
        snapshot_times=tuple(_as_float(t, f"integrator.snapshot_times[{i}]") for i, t in enumerate(snaps)),
    )
    sec.finish()
    if settings.dt <= 0 or not math.isfinite(settings.dt):
        raise ConfigurationError(f"integrator.dt: must be finite and > 0, got {settings.dt!r}")
    if settings.t_end is not None and (settings.t_end < 0 or not math.isfinite(settings.t_end)):
        raise ConfigurationError(f"integrator.t_end: must be finite and >= 0, got {settings.t_end!r}")
    if settings.sample_every < 1:
        raise ConfigurationError(f"integrator.sample_every: must be >= 1, got {settings.sample_every!r}")
    return settings


def _sweepable_paths(scenario: str) -> tuple[str, ...]:
    paths = [
        "lattice.n_sites", "lattice.spacing", "lattice.site_energy", "lattice.hopping",
        "packet.sigma", "packet.center", "packet.wavenumber", "packet.channel",
        "coupling.chi0", "coupling.t0", "coupling.sigma_chi", "coupling.center",
        "integrator.dt", "integrator.t_end",
    ]
    paths += [k for k, scenes in _EXTRA_KEYS.items() if scenario in scenes]
    return tuple(paths)


def _parse_sweep(raw: dict | None, scenario: str) -> SweepSpec | None:
    if raw is None:
        return None
    sec = _Section(raw, "sweep")
    parameter = _as_str(sec.take("parameter"), "sweep.parameter")
    values = sec.take("values")
    sec.finish()
    allowed = _sweepable_paths(scenario)
    if parameter not in allowed:
        raise ConfigurationError(
            f"sweep.parameter: {parameter!r} is not sweepable for scenario {scenario!r}; "
            f"expected one of {allowed}")
    if not isinstance(values, (list, tuple)) or len(values) == 0:
        raise ConfigurationError(f"sweep.values: expected a non-empty list, got {values!r}")
    vals = tuple(_as_float(v, f"sweep.values[{i}]") for i, v in enumerate(values))
    return SweepSpec(parameter=parameter, values=vals)


def parse_config(text: str, scenario: str | None = None) -> RunConfig:
    """Parse a YAML document into a validated RunConfig.

    ``scenario`` supplies the scenario when the document omits it (the CLI
    passes the subcommand); a conflicting explicit value is an error.
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"config is not valid YAML: {exc}") from exc
    if data is None:
        data = {}
    top = _Section(data, "")

    declared = top.take("scenario")
    if declared is not None:
        declared = _as_str(declared, "scenario")
        if scenario is not None and declared != scenario:
            raise ConfigurationError(
                f"scenario: config says {declared!r} but the command requested {scenario!r}")
        scenario = declared
    if scenario is None:
        raise ConfigurationError("scenario: missing; set it in the config or pick a subcommand")
    if scenario not in SCENARIOS:
        raise ConfigurationError(f"scenario: unknown value {scenario!r}; expected one of {SCENARIOS}")

    base = default_config(scenario)
    cfg = RunConfig(
        scenario=scenario,
        lattice=_parse_lattice(top.take("lattice")),
        packet=_parse_packet(top.take("packet"), base.packet),
        coupling=_parse_coupling(top.take("coupling"), base.coupling),
        integrator=_parse_integrator(top.take("integrator")),
        sweep=_parse_sweep(top.take("sweep"), scenario),
        output_dir=(_as_str(top.take("output_dir"), "output_dir") if top.has("output_dir") else None),
    )
    for key, scenes in _EXTRA_KEYS.items():
        if top.has(key):
            if scenario not in scenes:
                raise ConfigurationError(f"{key}: only valid for scenario {scenes[0]!r}, not {scenario!r}")
            if key == "n_daughters":
                value = _as_int(top.take(key), key)
                if value < 1:
                    raise ConfigurationError(f"n_daughters: must be >= 1, got {value}")
                cfg = replace(cfg, n_daughters=value)
            else:
                cfg = replace(cfg, **{key: _as_float(top.take(key), key)})
    top.finish()

    if scenario == "custom" and cfg.integrator.t_end is None:
        raise ConfigurationError("integrator.t_end: required for the custom scenario")
    if scenario == "custom" and cfg.packet.center is None:
        raise ConfigurationError("packet.center: required for the custom scenario")
    if scenario in _SPLITTER_FAMILY:
        if cfg.coupling.kind != "spatial_gaussian":
            raise ConfigurationError(
                f"coupling.kind: scenario {scenario!r} needs spatial_gaussian, got {cfg.coupling.kind!r}")
        if not cfg.coupling.auto_sigma_chi and cfg.coupling.sigma_chi is None:
            raise ConfigurationError("coupling.sigma_chi: set a width or enable auto_sigma_chi")
        if scenario == "mach_zehnder" and cfg.coupling.center is not None:
            raise ConfigurationError(
                "coupling.center: mach_zehnder places its two couplers automatically; leave it unset")
    if scenario in ("oscillation", "multichannel") and cfg.coupling.kind not in (
            "uniform_exponential_switch", "uniform_exponential_ramp", "zero"):
        raise ConfigurationError(
            f"coupling.kind: scenario {scenario!r} needs a uniform kind, got {cfg.coupling.kind!r}")
    return cfg


def _apply_dotted(cfg: RunConfig, path: str, value: float) -> RunConfig:
    """Return a copy of cfg with the dotted field replaced by ``value``."""
    if "." not in path:
        if path == "n_daughters":
            return replace(cfg, n_daughters=int(value))
        return replace(cfg, **{path: float(value)})
    section_name, field_name = path.split(".", 1)
    section = getattr(cfg, section_name)
    int_fields = {"n_sites", "channel", "sample_every"}
    cast = int if field_name in int_fields else float
    updates = {field_name: cast(value)}
    if path == "coupling.sigma_chi":
        updates["auto_sigma_chi"] = False
    try:
        new_section = replace(section, **updates)
    except TypeError as exc:
        raise ConfigurationError(f"sweep.parameter: cannot set {path!r}: {exc}") from exc
    return replace(cfg, **{section_name: new_section})


def sweep_children(cfg: RunConfig) -> list[RunConfig]:
    """Expand a sweep into its child configs, in the order the values were given."""
    if cfg.sweep is None:
        return [cfg]
    children = []
    for v in cfg.sweep.values:
        child = _apply_dotted(cfg, cfg.sweep.parameter, v)
        children.append(replace(child, sweep=None))
    return children


def render_config(cfg: RunConfig) -> str:
    """Canonical YAML for a RunConfig; parse_config(render_config(c)) == c."""
    doc: dict[str, object] = {
        "scenario": cfg.scenario,
        "lattice": {
            "n_sites": cfg.lattice.n_sites,
            "spacing": cfg.lattice.spacing,
            "site_energy": cfg.lattice.site_energy,
            "hopping": cfg.lattice.hopping,
        },
        "packet": {
            "sigma": cfg.packet.sigma,
            "center": cfg.packet.center,
            "wavenumber": cfg.packet.wavenumber,
            "channel": cfg.packet.channel,
        },
        "coupling": {
            "kind": cfg.coupling.kind,
            "chi0": cfg.coupling.chi0,
            "t0": cfg.coupling.t0,
            "sigma_chi": cfg.coupling.sigma_chi,
            "auto_sigma_chi": cfg.coupling.auto_sigma_chi,
            "center": cfg.coupling.center,
        },
        "integrator": {
            "dt": cfg.integrator.dt,
            "t_end": cfg.integrator.t_end,
            "sample_every": cfg.integrator.sample_every,
            "snapshot_times": list(cfg.integrator.snapshot_times),
        },
    }
    for key, scenes in _EXTRA_KEYS.items():
        if cfg.scenario in scenes:
            doc[key] = getattr(cfg, key)
    if cfg.sweep is not None:
        doc["sweep"] = {"parameter": cfg.sweep.parameter, "values": list(cfg.sweep.values)}
    if cfg.output_dir is not None:
        doc["output_dir"] = cfg.output_dir
    return yaml.safe_dump(doc, sort_keys=False)
