"""Console entry point: plotkit <kind> <csv...> -o fig.svg [--echo DIR]."""

from __future__ import annotations

import argparse
import sys

from . import KINDS, ColumnError, FigureSpec, echo, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render annealing-trace CSV files into figures "
                    "(SVG and PNG).")
    parser.add_argument("kind", choices=KINDS, help="figure kind")
    parser.add_argument("csv", nargs="+", help="input CSV file(s)")
    parser.add_argument("-o", "--out", required=True,
                        help="output figure path (.svg; a .png twin is "
                             "written alongside)")
    parser.add_argument("--title", default=None, help="optional figure title")
    parser.add_argument("--echo", metavar="DIR", default=None,
                        help="also re-emit the plotted values as CSV files "
                             "under DIR (byte-identical to the inputs)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(kind=args.kind, csv_paths=args.csv, title=args.title)
    try:
        svg, png = render(spec, args.out)
    except (ColumnError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(svg)
    print(png)
    if args.echo is not None:
        for path in echo(args.csv, args.echo):
            print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
