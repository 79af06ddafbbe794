"""File formats for matrices, vectors, index lists, grids and images.

Real matrices and vectors are CSV, one row per line, decimal point, no
header; vectors are one entry per line.  Complex files use the same layout
with entries rendered ``a+bi`` (e.g. ``1.5-0.25i``).  Index lists are one
integer per line.  Binary grids are ASCII rows of space-separated 0/1.
Grayscale output is plain PGM (``P2``, maxval 255).
"""

import re

import numpy as np

_COMPLEX_MARKER = re.compile(r"[ij]")


def format_value(value):
    if isinstance(value, complex) or np.iscomplexobj(value):
        c = complex(value)
        return f"{c.real:.17g}{c.imag:+.17g}i"
    return f"{float(value):.17g}"


def parse_value(token):
    token = token.strip()
    if not token:
        raise ValueError("empty numeric field")
    if _COMPLEX_MARKER.search(token):
        try:
            return complex(token.replace("i", "j"))
        except ValueError:
            raise ValueError(f"bad complex value {token!r}") from None
    try:
        return float(token)
    except ValueError:
        raise ValueError(f"bad numeric value {token!r}") from None


def write_matrix(path, matrix):
    matrix = np.atleast_2d(np.asarray(matrix))
    with open(path, "w") as fh:
        for row in matrix:
            fh.write(",".join(format_value(v) for v in row) + "\n")


def read_matrix(path):
    rows = []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            values = [parse_value(tok) for tok in line.split(",")]
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise ValueError(f"{path}:{lineno}: ragged row")
            rows.append(values)
    if not rows:
        raise ValueError(f"{path}: empty matrix file")
    if any(isinstance(v, complex) for row in rows for v in row):
        return np.array(rows, dtype=np.complex128)
    return np.array(rows, dtype=np.float64)


def write_vector(path, vector):
    vector = np.asarray(vector).ravel()
    with open(path, "w") as fh:
        for v in vector:
            fh.write(format_value(v) + "\n")


def read_vector(path):
    return read_matrix(path).ravel()


def write_indices(path, indices):
    with open(path, "w") as fh:
        for i in np.asarray(indices).ravel():
            fh.write(f"{int(i)}\n")


def read_indices(path):
    with open(path) as fh:
        return np.array([int(line) for line in fh if line.strip()],
                        dtype=np.int64)


def read_grid(path):
    """Rectangular 0/1 grid from space-separated ASCII rows."""
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                values = [int(tok) for tok in line.split()]
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-integer entry") from None
            if any(v not in (0, 1) for v in values):
                raise ValueError(f"{path}:{lineno}: grid entries must be 0 or 1")
            if rows and len(values) != len(rows[0]):
                raise ValueError(f"{path}:{lineno}: ragged grid row")
            rows.append(values)
    if not rows:
        raise ValueError(f"{path}: empty grid file")
    return np.array(rows, dtype=np.float64)


def write_grid(path, grid):
    grid = np.asarray(grid)
    with open(path, "w") as fh:
        for row in np.atleast_2d(grid):
            fh.write(" ".join(str(int(round(v))) for v in row) + "\n")


def write_pgm(path, image):
    """Grayscale PGM from values nominally in [0, 1] (clamped, 0-255)."""
    image = np.atleast_2d(np.asarray(image, dtype=np.float64))
    levels = np.rint(np.clip(image, 0.0, 1.0) * 255.0).astype(np.int64)
    with open(path, "w") as fh:
        fh.write("P2\n")
        fh.write(f"{image.shape[1]} {image.shape[0]}\n255\n")
        for row in levels:
            fh.write(" ".join(str(v) for v in row) + "\n")
