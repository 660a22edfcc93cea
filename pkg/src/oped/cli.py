"""Command-line driver: phantom -> sinogram -> reconstruction, plus analyses.

Exit codes: 0 success, 2 user or input error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import analysis
from .errors import OPEDError
from .fileio import read_sinogram, write_json, write_pgm, write_raw, write_sinogram
from .kernel import eta_default
from .radon import Sinogram2D, Sinogram3D, load_phantom, sinogram2d, sinogram3d
from .recon2d import ImageGrid, reconstruct, reconstruct_eta
from .recon3d import reconstruct3d


class UsageError(Exception):
    """Bad command-line input; reported with exit code 2."""


class InvariantError(Exception):
    """A result failed an internal sanity check; exit code 3."""


def _positive(name):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {text!r}")
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be >= 1, got {v}")
        return v

    return conv


def _int_list(text):
    try:
        ms = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not ms or min(ms) < 1:
        raise argparse.ArgumentTypeError("m values must be positive integers")
    return ms


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def _grid(text):
    v = _positive("--grid")(text)
    if v < 2:
        raise argparse.ArgumentTypeError("--grid must be >= 2")
    return v


def _read_phantom(path):
    if not Path(path).is_file():
        raise UsageError(f"phantom file not found: {path}")
    return load_phantom(path)


def _read_sino(path):
    if not Path(path).is_file():
        raise UsageError(f"sinogram file not found: {path}")
    return read_sinogram(path)


def _with_suffix(prefix, suffix):
    return prefix if prefix.endswith(suffix) else prefix + suffix


def cmd_sinogram(args):
    ph = _read_phantom(args.phantom)
    if args.three_d:
        s = sinogram3d(lambda z: ph, args.m, args.n, args.L)
    else:
        s = sinogram2d(ph, args.m)
    if not np.all(np.isfinite(s.data)):
        raise InvariantError("sinogram contains non-finite values")
    write_sinogram(s, _with_suffix(args.out, ".sino"))


def _write_raster(values, prefix, args):
    want_raw = args.raw or not args.pgm
    want_pgm = args.pgm or not args.raw
    if want_pgm:
        write_pgm(values, prefix + ".pgm")
    if want_raw:
        write_raw(values, prefix + ".raw")


def _finite_range(values):
    finite = values[np.isfinite(values)]
    return (float(finite.min()), float(finite.max())) if finite.size else (0.0, 0.0)


def cmd_reconstruct(args):
    s = _read_sino(args.sino)
    if not isinstance(s, Sinogram2D):
        raise UsageError("reconstruct needs a 2D sinogram; use recon3d for 3D data")
    grid = ImageGrid.square(args.grid)
    if args.variant == "eta":
        img = reconstruct_eta(s, grid, eta_default(), fill=args.fill)
    else:
        img = reconstruct(s, grid, fill=args.fill)
    if not np.all(np.isfinite(img.masked())):
        raise InvariantError("reconstruction produced non-finite values inside the disk")
    lo, hi = _finite_range(img.values)
    _write_raster(img.values, args.out, args)
    meta = {"min": lo, "max": hi, "width": grid.width, "height": grid.height, "m": s.m, "variant": args.variant}
    write_json(meta, args.out + ".json")


def cmd_recon3d(args):
    if args.sino:
        s3 = _read_sino(args.sino)
        if not isinstance(s3, Sinogram3D):
            raise UsageError("recon3d needs a 3D sinogram (header OPED-SINO 3 ...)")
    elif args.phantom:
        ph = _read_phantom(args.phantom)
        n = args.n if args.n is not None else 2 * args.m
        s3 = sinogram3d(lambda z: ph, args.m, n, args.L)
    else:
        raise UsageError("recon3d needs --sino or --phantom")
    grid = ImageGrid.square(args.grid)
    nz = args.nz if args.nz is not None else max(s3.n, 16)
    zs = np.linspace(0.0, s3.L, nz)
    cyl = reconstruct3d(s3, grid, zs, fill=args.fill)
    inside = cyl.values[:, grid.mask]
    if not np.all(np.isfinite(inside)):
        raise InvariantError("reconstruction produced non-finite values inside the cylinder")
    lo, hi = _finite_range(cyl.values)
    if args.raw or not args.pgm:
        write_raw(cyl.values, args.out + ".raw")
    if args.pgm or not args.raw:
        for iz in range(len(zs)):
            write_pgm(cyl.values[iz], f"{args.out}_z{iz:03d}.pgm", lo, hi)
    meta = {
        "min": lo,
        "max": hi,
        "width": grid.width,
        "height": grid.height,
        "m": s3.m,
        "n": s3.n,
        "L": s3.L,
        "zs": [float(z) for z in zs],
        "variant": "plain",
    }
    write_json(meta, args.out + ".json")


def _emit_csv(header, rows, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    if out:
        Path(_with_suffix(out, ".csv")).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())


def cmd_lebesgue(args):
    scan = analysis.norm_scan(args.ms, args.grid)
    rows = [(m, float(mx), float(r)) for m, mx, r in zip(scan.ms, scan.maxima, scan.ratios)]
    _emit_csv(["m", "max_lambda", "ratio"], rows, args.out)


def cmd_convergence(args):
    ph = _read_phantom(args.phantom)
    rows = analysis.convergence_study(ph, args.ms, args.grid, args.variant)
    _emit_csv(["m", "linf", "l2"], [(m, float(a), float(b)) for m, a, b in rows], args.out)


def build_parser():
    p = argparse.ArgumentParser(prog="oped", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def raster_flags(sp):
        sp.add_argument("--grid", type=_grid, default=128, help="raster size (pixels per side)")
        sp.add_argument("--out", required=True, help="output prefix")
        sp.add_argument("--fill", choices=["zero", "nan"], default="zero")
        sp.add_argument("--raw", action="store_true", help="write float64 little-endian raster")
        sp.add_argument("--pgm", action="store_true", help="write 16-bit PGM raster")

    sp = sub.add_parser("sinogram", help="compute parallel-beam data for a phantom file")
    sp.add_argument("--phantom", required=True)
    sp.add_argument("--m", type=_positive("--m"), required=True)
    sp.add_argument("--3d", dest="three_d", action="store_true", help="cylinder data (z-independent phantom)")
    sp.add_argument("--n", type=_positive("--n"), default=None, help="number of slices (default 2m)")
    sp.add_argument("--L", type=_positive_float, default=1.0, help="cylinder height")
    sp.add_argument("--out", required=True, help="output path or prefix (.sino appended)")
    sp.set_defaults(func=cmd_sinogram)

    sp = sub.add_parser("reconstruct", help="reconstruct a 2D image from a sinogram file")
    sp.add_argument("--sino", required=True)
    sp.add_argument("--variant", choices=["plain", "eta"], default="plain")
    raster_flags(sp)
    sp.set_defaults(func=cmd_reconstruct)

    sp = sub.add_parser("recon3d", help="reconstruct a slice stack on the cylinder")
    sp.add_argument("--sino")
    sp.add_argument("--phantom")
    sp.add_argument("--m", type=_positive("--m"), default=4)
    sp.add_argument("--n", type=_positive("--n"), default=None)
    sp.add_argument("--L", type=_positive_float, default=1.0)
    sp.add_argument("--nz", type=_positive("--nz"), default=None, help="number of output heights")
    raster_flags(sp)
    sp.set_defaults(func=cmd_recon3d)

    sp = sub.add_parser("lebesgue", help="scan the operator norm over m")
    sp.add_argument("--ms", type=_int_list, required=True)
    sp.add_argument("--grid", type=_grid, default=128)
    sp.add_argument("--out", default=None, help="CSV prefix (stdout if omitted)")
    sp.set_defaults(func=cmd_lebesgue)

    sp = sub.add_parser("convergence", help="reconstruction error versus m")
    sp.add_argument("--phantom", required=True)
    sp.add_argument("--ms", type=_int_list, required=True)
    sp.add_argument("--grid", type=_grid, default=64)
    sp.add_argument("--variant", choices=["plain", "eta"], default="plain")
    sp.add_argument("--out", default=None, help="CSV prefix (stdout if omitted)")
    sp.set_defaults(func=cmd_convergence)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "three_d", False) and args.n is None:
        args.n = 2 * args.m
    if args.command == "lebesgue" and args.grid < 64:
        parser.error("lebesgue needs --grid >= 64")
    try:
        args.func(args)
    except (UsageError, OPEDError, OSError) as exc:
        print(f"oped {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"oped {args.command}: internal error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
