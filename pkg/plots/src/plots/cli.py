"""Command-line entry point: render one figure from result artifacts.

Exit codes: 0 success, 1 I/O failure, 2 usage or schema failure (the error
message names the missing column or key).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import FIGURE_KINDS, FigureRequest, render
from .readers import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evounfold-plots",
        description="Render figures from unfolding result artifacts "
        "(spectrum CSVs, landscape scans, benchmark summaries).",
    )
    parser.add_argument("--figure", required=True, choices=FIGURE_KINDS)
    parser.add_argument(
        "--in",
        dest="inputs",
        required=True,
        nargs="+",
        help="input artifact(s): spectrum CSVs or a directory of them for "
        "'spectra'; a landscape CSV for 'static-landscape'; a per-generation "
        "CSV for 'dynamic-landscape'; a benchmark directory or summary.json "
        "for the bar figures",
    )
    parser.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    request = FigureRequest(args.figure, tuple(Path(p) for p in args.inputs), Path(args.out))
    try:
        render(request)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
