"""Command line for batch figure rendering from heavybd CSV outputs."""
from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureSpec, render


def main(argv=None):
    ap = argparse.ArgumentParser(prog="heavybd-plot", description="Render heavybd CSVs as figures")
    ap.add_argument("kind", choices=KINDS)
    ap.add_argument("inputs", nargs="+", help="input CSV file(s) with the documented header")
    ap.add_argument("--out", required=True, help="output image path (.png or .svg)")
    ap.add_argument("--cmap", default="viridis")
    ap.add_argument("--dpi", type=int, default=120)
    ns = ap.parse_args(argv)
    spec = FigureSpec(
        inputs=tuple(ns.inputs),
        kind=ns.kind,
        output=ns.out,
        style={"cmap": ns.cmap, "dpi": ns.dpi},
    )
    try:
        res = render(spec)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"{res.path}: {res.width_px}x{res.height_px}px, {res.n_series} series, {res.n_rows} rows")
    return 0


if __name__ == "__main__":
    sys.exit(main())
