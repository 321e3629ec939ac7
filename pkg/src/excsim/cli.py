"""Command-line front end.

Exit codes: 0 success, 1 invalid configuration or usage, 2 numerical
failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import RunConfig, default_config, parse_config
from .errors import ConfigurationError, SimulationError
from .experiments import two_port_oracle
from .runner import execute

_SUBCOMMAND_SCENARIO = {
    "oscillation": "oscillation",
    "split": "beam_splitter",
    "interfere": "interference",
    "mzi": "mach_zehnder",
    "multisplit": "multichannel",
    "custom": "custom",
}


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit code 2; we need them on 1."""

    def error(self, message: str):
        raise ConfigurationError(message)


def _add_run_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="PATH", help="YAML config file")
    sub.add_argument("--out", metavar="DIR", help="output directory")
    sub.add_argument("--dt", type=float, help="override integrator.dt")
    sub.add_argument("--t-end", type=float, dest="t_end", help="override integrator.t_end")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="excsim", description="Wave-packet dynamics on coupled ring lattices")
    commands = parser.add_subparsers(dest="command", required=True)

    for name, scenario in _SUBCOMMAND_SCENARIO.items():
        sub = commands.add_parser(name, help=f"run the {scenario} scenario")
        _add_run_flags(sub)
        if name == "mzi":
            sub.add_argument("--delta", type=float, help="interferometer phase in radians")
        if name == "multisplit":
            sub.add_argument("--daughters", type=int, help="number of daughter channels")
        if name == "interfere":
            sub.add_argument("--pre-phase", type=float, dest="pre_phase",
                             help="relative phase of channel 2 at launch, radians")

    val = commands.add_parser("validate", help="parse and validate a config, run nothing")
    val.add_argument("--config", metavar="PATH", required=True, help="YAML config file")
    val.add_argument("--scenario", help="scenario to assume when the file omits it")

    orc = commands.add_parser("oracle", help="print two-port analytic predictions")
    orc.add_argument("--theta", type=float, required=True, help="splitting angle in radians")
    orc.add_argument("--delta", type=float, default=0.0, help="inter-stage phase in radians")
    orc.add_argument("--stages", type=int, choices=(1, 2), default=1)
    orc.add_argument("--input-channel", type=int, choices=(0, 1), default=0, dest="input_channel")
    return parser


def _load_config(args, scenario: str) -> RunConfig:
    if args.config:
        try:
            text = Path(args.config).read_text()
        except FileNotFoundError as exc:
            raise ConfigurationError(f"--config: cannot read {args.config!r}: {exc}") from exc
        cfg = parse_config(text, scenario=scenario)
    else:
        cfg = default_config(scenario)
    if args.dt is not None:
        cfg = replace(cfg, integrator=replace(cfg.integrator, dt=args.dt))
    if args.t_end is not None:
        cfg = replace(cfg, integrator=replace(cfg.integrator, t_end=args.t_end))
    if getattr(args, "delta", None) is not None:
        cfg = replace(cfg, delta=args.delta)
    if getattr(args, "daughters", None) is not None:
        cfg = replace(cfg, n_daughters=args.daughters)
    if getattr(args, "pre_phase", None) is not None:
        cfg = replace(cfg, pre_phase=args.pre_phase)
    if args.out:
        cfg = replace(cfg, output_dir=args.out)
    return cfg


def _run_command(args, scenario: str) -> int:
    cfg = _load_config(args, scenario)
    summary = execute(cfg)
    print(f"scenario: {summary['scenario']}")
    print(f"output:   {summary['output_dir']}")
    if "rows" in summary:
        print(f"sweep:    {summary['sweep_parameter']} ({len(summary['rows'])} values)")
        for row in summary["rows"]:
            pops = " ".join(f"{p:.6f}" for p in row["final_populations"])
            print(f"  {row['value']:g} -> {pops}")
    else:
        pops = " ".join(f"{p:.6f}" for p in summary["final_populations"])
        print(f"populations: {pops}")
        for key in sorted(summary["metrics"]):
            value = summary["metrics"][key]
            if isinstance(value, float):
                print(f"  {key}: {value:.6g}")
            else:
                print(f"  {key}: {value}")
    return 0


def _validate_command(args) -> int:
    try:
        text = Path(args.config).read_text()
    except FileNotFoundError as exc:
        raise ConfigurationError(f"--config: cannot read {args.config!r}: {exc}") from exc
    cfg = parse_config(text, scenario=args.scenario)
    print(f"OK: scenario {cfg.scenario}, lattice {cfg.lattice.n_sites} sites, "
          f"coupling {cfg.coupling.kind}")
    return 0


def _oracle_command(args) -> int:
    vin = (1.0, 0.0) if args.input_channel == 0 else (0.0, 1.0)
    out = two_port_oracle(args.theta, delta=args.delta, stages=args.stages, amplitudes_in=vin)
    pops = np.abs(out) ** 2
    print(f"theta = {args.theta:.12g}  stages = {args.stages}  delta = {args.delta:.12g}")
    for c in range(2):
        print(f"channel {c + 1}: amplitude = {out[c].real:+.12f}{out[c].imag:+.12f}i  "
              f"population = {pops[c]:.12f}")
    if args.stages == 2:
        print(f"sin^2(delta/2) = {math.sin(args.delta / 2.0) ** 2:.12f}")
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if args.command in _SUBCOMMAND_SCENARIO:
            return _run_command(args, _SUBCOMMAND_SCENARIO[args.command])
        if args.command == "validate":
            return _validate_command(args)
        if args.command == "oracle":
            return _oracle_command(args)
        raise ConfigurationError(f"unknown command {args.command!r}")
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SimulationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
