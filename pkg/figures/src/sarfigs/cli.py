"""Figure regeneration CLI: one subcommand per figure kind.

    sarfigs contour  --csv image.csv --out fig.png [--k0-scale] [--clip-negative]
    sarfigs loglog   --csv resolution.csv [--fits fits.csv] --out fig.png
    sarfigs slices   --csv slice.csv --out fig.png
    sarfigs spectrum --csv spectra.csv --out fig.png
    sarfigs stability --csv stability_vs_epsilon.csv --out fig.png

Exits nonzero naming the offending file on missing or malformed input.
"""

from __future__ import annotations

import argparse
import sys

from .readers import FigureInputError
from .render import (
    render_contour,
    render_loglog,
    render_slices,
    render_spectrum,
    render_stability,
)


def build_parser():
    parser = argparse.ArgumentParser(prog="sarfigs", description=__doc__)
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in ("contour", "loglog", "slices", "spectrum", "stability"):
        p = sub.add_parser(kind)
        p.add_argument("--csv", required=True)
        p.add_argument("--out", required=True)
        if kind == "contour":
            p.add_argument("--k0-scale", action="store_true")
            p.add_argument("--clip-negative", action="store_true")
        if kind == "loglog":
            p.add_argument("--fits")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.kind == "contour":
            out = render_contour(args.csv, args.out, k0_scale=args.k0_scale,
                                 clip_negative=args.clip_negative)
        elif args.kind == "loglog":
            out = render_loglog(args.csv, args.out, fits_csv=args.fits)
        elif args.kind == "slices":
            out = render_slices(args.csv, args.out)
        elif args.kind == "spectrum":
            out = render_spectrum(args.csv, args.out)
        else:
            out = render_stability(args.csv, args.out)
    except FigureInputError as exc:
        print(f"figure input error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
