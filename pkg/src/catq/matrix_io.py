"""Text format for complex matrices.

UTF-8, first line ``n``, then ``n`` lines of ``n`` whitespace-separated
``re,im`` pairs.  Floats are written with ``repr`` so reading back is exact.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .errors import MatrixParseError
from .spectral import as_cmatrix


def format_matrix(h) -> str:
    h = as_cmatrix(h)
    n = h.shape[0]
    lines = [str(n)]
    for row in h:
        lines.append(" ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row))
    return "\n".join(lines) + "\n"


def write_hamiltonian(path, h):
    text = format_matrix(h)
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _parse_entry(token: str, line: int, column: int) -> complex:
    parts = token.split(",")
    if len(parts) != 2:
        raise MatrixParseError(f"expected 're,im', got {token!r}", line, column)
    try:
        re, im = float(parts[0]), float(parts[1])
    except ValueError:
        raise MatrixParseError(f"cannot parse {token!r} as a complex entry", line, column) from None
    if not (math.isfinite(re) and math.isfinite(im)):
        raise MatrixParseError(f"non-finite entry {token!r}", line, column)
    return complex(re, im)


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines()]
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise MatrixParseError("empty matrix file", 1)
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise MatrixParseError(f"first line must be the dimension, got {lines[0]!r}", 1, 1) from None
    if n < 1:
        raise MatrixParseError("dimension must be positive", 1, 1)
    if len(lines) - 1 != n:
        raise MatrixParseError(f"expected {n} rows, found {len(lines) - 1}", len(lines))
    out = np.empty((n, n), dtype=np.complex128)
    for r in range(n):
        line_no = r + 2
        raw = lines[r + 1]
        tokens = raw.split()
        if len(tokens) != n:
            raise MatrixParseError(f"row {r + 1} has {len(tokens)} entries, expected {n}", line_no)
        pos = 0
        for c, tok in enumerate(tokens):
            start = raw.index(tok, pos)
            out[r, c] = _parse_entry(tok, line_no, start + 1)
            pos = start + len(tok)
    return out


def load_hamiltonian(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())
