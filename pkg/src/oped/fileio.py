"""Sinogram text files and raster outputs.

Sinogram file (UTF-8 text)::

    OPED-SINO 2 <m>
    <2m values>          # 2m+1 rows, one per view angle nu
    ...

    OPED-SINO 3 <m> <n> <L>
    <2m values>          # n blocks of 2m+1 rows, one block per slice i,
    ...                  # blocks separated by one blank line

Values are written with ``%.17g`` so that reading them back is exact.

Rasters are written as 16-bit binary PGM (``P5``, maxval 65535, linear
min/max scaling, top row = largest ``y``), an optional raw float64
little-endian file in grid order (row 0 = smallest ``y``), and a JSON
sidecar ``{min, max, width, height, m, variant}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import FormatError
from .radon import Sinogram2D, Sinogram3D

__all__ = [
    "format_sinogram",
    "parse_sinogram",
    "read_sinogram",
    "write_json",
    "write_pgm",
    "write_raw",
    "write_sinogram",
]

MAGIC = "OPED-SINO"


def _fmt(v):
    return format(float(v), ".17g")


def _rows(block):
    return "".join(" ".join(_fmt(v) for v in row) + "\n" for row in block)


def format_sinogram(s) -> str:
    if isinstance(s, Sinogram3D):
        head = f"{MAGIC} 3 {s.m} {s.n} {_fmt(s.L)}\n"
        return head + "\n".join(_rows(block) for block in s.data)
    return f"{MAGIC} 2 {s.m}\n" + _rows(s.data)


def write_sinogram(s, path):
    Path(path).write_text(format_sinogram(s), encoding="utf-8")


def _parse_row(line, lineno, ncols):
    try:
        vals = [float(tok) for tok in line.split()]
    except ValueError:
        raise FormatError("non-numeric sinogram value", lineno) from None
    if len(vals) != ncols:
        raise FormatError(f"expected {ncols} values, found {len(vals)}", lineno)
    return vals


def _positive_int(tok, what, lineno):
    try:
        v = int(tok)
    except ValueError:
        raise FormatError(f"{what} must be an integer, got {tok!r}", lineno) from None
    if v < 1:
        raise FormatError(f"{what} must be positive, got {v}", lineno)
    return v


def parse_sinogram(text: str):
    """Parse a sinogram file's contents into a 2D or 3D sinogram."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty sinogram file", 1)
    head = lines[0].split()
    if len(head) < 3 or head[0] != MAGIC:
        raise FormatError(f"header must start with '{MAGIC} <dim> <m>'", 1)
    dim = head[1]
    m = _positive_int(head[2], "m", 1)
    rows_per_block, ncols = 2 * m + 1, 2 * m
    body = lines[1:]
    if dim == "2":
        if len(head) != 3:
            raise FormatError("2D header takes exactly: OPED-SINO 2 <m>", 1)
        if len(body) != rows_per_block:
            raise FormatError(f"expected {rows_per_block} rows for m={m}, found {len(body)}", 1)
        data = [_parse_row(line, i + 2, ncols) for i, line in enumerate(body)]
        return Sinogram2D(m, np.array(data))
    if dim == "3":
        if len(head) != 5:
            raise FormatError("3D header takes exactly: OPED-SINO 3 <m> <n> <L>", 1)
        n = _positive_int(head[3], "n", 1)
        try:
            L = float(head[4])
        except ValueError:
            raise FormatError(f"L must be a number, got {head[4]!r}", 1) from None
        if not L > 0:
            raise FormatError("L must be positive", 1)
        expected = n * rows_per_block + (n - 1)
        if len(body) != expected:
            raise FormatError(f"expected {expected} lines after the header, found {len(body)}", 1)
        blocks = []
        for i in range(n):
            start = i * (rows_per_block + 1)
            if i > 0 and body[start - 1].strip():
                raise FormatError("slices must be separated by a blank line", start + 1)
            blocks.append(
                [_parse_row(body[start + r], start + r + 2, ncols) for r in range(rows_per_block)]
            )
        return Sinogram3D(m=m, n=n, L=L, data=np.array(blocks))
    raise FormatError(f"unsupported dimension {dim!r}", 1)


def read_sinogram(path):
    return parse_sinogram(Path(path).read_text(encoding="utf-8"))


def _finite_range(values):
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        return 0.0, 0.0
    return float(finite.min()), float(finite.max())


def write_pgm(values, path, vmin=None, vmax=None):
    """16-bit PGM with linear scaling of ``[vmin, vmax]`` to ``[0, 65535]``."""
    values = np.asarray(values, dtype=np.float64)
    lo, hi = _finite_range(values)
    vmin = lo if vmin is None else vmin
    vmax = hi if vmax is None else vmax
    span = vmax - vmin
    scaled = np.zeros_like(values) if span <= 0 else (values - vmin) / span
    scaled = np.nan_to_num(scaled, nan=0.0)
    q = np.round(np.clip(scaled, 0.0, 1.0) * 65535.0).astype(">u2")
    h, w = values.shape
    Path(path).write_bytes(f"P5\n{w} {h}\n65535\n".encode("ascii") + q[::-1].tobytes())
    return vmin, vmax


def write_raw(values, path):
    Path(path).write_bytes(np.ascontiguousarray(values, dtype="<f8").tobytes())


def write_json(meta, path):
    Path(path).write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8")
