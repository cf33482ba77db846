#!/usr/bin/env python3
"""Render a figure from ledger CSV files.

Usage: render_fig.py --figure fig1 --csv A.csv[,B.csv,...] --out fig.png
Exits nonzero with a message if a CSV does not match the column contract.
"""

from __future__ import annotations

import argparse
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import fig1
import fig2
import fig3
import fig4
from loader import SchemaError, load, split_csv_list

RENDERERS = {
    "fig1": fig1.render,
    "fig2": fig2.render,
    "fig3": fig3.render,
    "fig4": fig4.render,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--figure", required=True, choices=sorted(RENDERERS))
    parser.add_argument("--csv", required=True, help="comma-separated ledger CSV paths")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--format", choices=("png", "svg"), default=None,
                        help="image format (default: from the --out suffix)")
    args = parser.parse_args(argv)
    fmt = args.format or os.path.splitext(args.out)[1].lstrip(".").lower()
    if fmt not in ("png", "svg"):
        print(f"unsupported format {fmt!r} (use png or svg)", file=sys.stderr)
        return 1
    try:
        tables = [load(path) for path in split_csv_list(args.csv)]
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return 1
    RENDERERS[args.figure](tables, args.out, fmt)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
