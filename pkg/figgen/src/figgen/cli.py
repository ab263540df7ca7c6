"""figgen command line: figgen <kind> --in <csv...> --out <img>."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .csvio import SCHEMAS, SchemaError
from .render import FigureJob, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figgen",
        description="Render figure images from ramanrabi CSV datasets.")
    parser.add_argument("kind", choices=sorted(SCHEMAS),
                        help="figure kind to render")
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        type=Path, help="input CSV file(s)")
    parser.add_argument("--out", dest="output", required=True, type=Path,
                        help="output image (.png, .svg, .pdf)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    job = FigureJob(kind=args.kind, inputs=tuple(args.inputs),
                    output=args.output)
    try:
        out = render(job)
    except SchemaError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
