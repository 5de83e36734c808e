"""The dense-txt matrix file format: a size line, then one row per line.

Values are written with shortest round-trip precision, so save followed by
load reproduces the array bit for bit.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .exceptions import MatrixFormatError


def load_dense(path) -> np.ndarray:
    """Parse a dense-txt file into a raw (unvalidated) float matrix."""
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise MatrixFormatError(1, "empty file; expected a size line")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise MatrixFormatError(1, f"expected an integer size, got {lines[0]!r}") from None
    if n < 2:
        raise MatrixFormatError(1, f"size must be >= 2, got {n}")
    if len(lines) < n + 1:
        raise MatrixFormatError(len(lines) + 1, f"expected {n} rows, file ends after {len(lines) - 1}")
    rows = []
    for r in range(n):
        line_no = r + 2
        fields = lines[r + 1].split()
        if len(fields) != n:
            raise MatrixFormatError(line_no, f"expected {n} values, got {len(fields)}")
        try:
            rows.append([float(v) for v in fields])
        except ValueError as exc:
            raise MatrixFormatError(line_no, str(exc)) from None
    return np.array(rows, dtype=float)


def save_dense(path, matrix) -> None:
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    with open(path, "w") as fh:
        fh.write(f"{n}\n")
        for row in matrix:
            fh.write(" ".join(repr(float(v)) for v in row))
            fh.write("\n")
