"""Command-line entry point: `excsim-plots render ...`."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .figures import KINDS, FigureSpec, SchemaError, render


class _Parser(argparse.ArgumentParser):
    # raise instead of exiting so main() controls the exit code
    def error(self, message):
        raise ValueError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="excsim-plots",
                     description="Render figures from excsim CSV artifacts.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one figure")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--in", dest="inputs", action="append", required=True,
                   metavar="PATH", help="input CSV (repeatable)")
    p.add_argument("--out", required=True, metavar="IMAGE",
                   help="output image path (.png, .svg, .pdf, ...)")
    p.add_argument("--title", default=None)
    p.add_argument("--xlabel", default=None)
    p.add_argument("--ylabel", default=None)
    p.add_argument("--phase", type=float, default=math.pi / 2,
                   help="compensation phase for the difference kind")
    p.add_argument("--dpi", type=int, default=150)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        spec = FigureSpec(kind=args.kind,
                          inputs=tuple(Path(p) for p in args.inputs),
                          output=Path(args.out), title=args.title,
                          xlabel=args.xlabel, ylabel=args.ylabel,
                          phase=args.phase, dpi=args.dpi)
        out = render(spec)
    except (SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
