"""Matrix Market ingestion and export (dense target storage).

Supports ``matrix coordinate|array`` with ``real|integer|complex`` fields and
``general|symmetric|hermitian`` symmetry; symmetric/hermitian storage is
expanded to full. ``pattern`` fields and ``skew-symmetric`` symmetry are
rejected. Parsing reports 1-based line numbers on failure.
"""

from __future__ import annotations

import numpy as np

from .errors import ParseError, UnsupportedField

_FIELDS = {"real", "integer", "complex"}
_SYMMETRIES = {"general", "symmetric", "hermitian"}


def load_matrix_market(path) -> np.ndarray:
    """Read a Matrix Market file into a dense complex matrix."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.readlines()
    if not lines:
        raise ParseError("empty file", line=1)

    header = lines[0].strip().split()
    if len(header) != 5 or header[0] != "%%MatrixMarket":
        raise ParseError("malformed Matrix Market banner", line=1)
    _, obj, fmt, field, symmetry = (tok.lower() for tok in header)
    if obj != "matrix":
        raise UnsupportedField(f"object {obj!r} not supported (only 'matrix')")
    if fmt not in ("coordinate", "array"):
        raise ParseError(f"unknown format {fmt!r}", line=1)
    if field == "pattern":
        raise UnsupportedField("pattern matrices carry no values")
    if field not in _FIELDS:
        raise UnsupportedField(f"field {field!r} not supported")
    if symmetry == "skew-symmetric":
        raise UnsupportedField("skew-symmetric storage not supported")
    if symmetry not in _SYMMETRIES:
        raise ParseError(f"unknown symmetry {symmetry!r}", line=1)

    # first non-comment, non-blank line after the banner is the size line
    idx = 1
    while idx < len(lines) and (lines[idx].startswith("%") or not lines[idx].strip()):
        idx += 1
    if idx >= len(lines):
        raise ParseError("missing size line", line=len(lines))

    size_tokens = lines[idx].split()
    size_line = idx + 1
    if fmt == "coordinate":
        if len(size_tokens) != 3:
            raise ParseError("coordinate size line needs 'rows cols nnz'", line=size_line)
        try:
            rows, cols, nnz = (int(t) for t in size_tokens)
        except ValueError:
            raise ParseError("non-integer size entry", line=size_line) from None
        return _read_coordinate(lines, idx + 1, rows, cols, nnz, field, symmetry)
    if len(size_tokens) != 2:
        raise ParseError("array size line needs 'rows cols'", line=size_line)
    try:
        rows, cols = (int(t) for t in size_tokens)
    except ValueError:
        raise ParseError("non-integer size entry", line=size_line) from None
    return _read_array(lines, idx + 1, rows, cols, field, symmetry)


def _entry_value(tokens, field, lineno):
    want = 2 if field == "complex" else 1
    if len(tokens) != want:
        raise ParseError(f"expected {want} value token(s), got {len(tokens)}", line=lineno)
    try:
        if field == "complex":
            return complex(float(tokens[0]), float(tokens[1]))
        return complex(float(tokens[0]))
    except ValueError:
        raise ParseError(f"bad numeric value {' '.join(tokens)!r}", line=lineno) from None


def _apply_symmetry(m, i, j, v, symmetry, lineno):
    if symmetry != "general" and j > i:
        raise ParseError("symmetric/hermitian files must store the lower triangle",
                         line=lineno)
    m[i, j] = v
    if symmetry == "symmetric":
        m[j, i] = v
    elif symmetry == "hermitian":
        m[j, i] = np.conj(v)


def _read_coordinate(lines, start, rows, cols, nnz, field, symmetry):
    if rows < 1 or cols < 1:
        raise ParseError("matrix dimensions must be positive", line=start)
    m = np.zeros((rows, cols), dtype=np.complex128)
    seen = 0
    for offset, raw in enumerate(lines[start:], start=start):
        lineno = offset + 1
        tokens = raw.split()
        if not tokens or raw.startswith("%"):
            continue
        if seen >= nnz:
            raise ParseError("more entries than declared", line=lineno)
        if len(tokens) < 2:
            raise ParseError("entry needs row and column indices", line=lineno)
        try:
            i, j = int(tokens[0]) - 1, int(tokens[1]) - 1
        except ValueError:
            raise ParseError("non-integer index", line=lineno) from None
        if not (0 <= i < rows and 0 <= j < cols):
            raise ParseError(f"index ({i + 1}, {j + 1}) out of bounds", line=lineno)
        v = _entry_value(tokens[2:], field, lineno)
        _apply_symmetry(m, i, j, v, symmetry, lineno)
        seen += 1
    if seen != nnz:
        raise ParseError(f"declared {nnz} entries but found {seen}", line=len(lines))
    return m


def _read_array(lines, start, rows, cols, field, symmetry):
    if rows < 1 or cols < 1:
        raise ParseError("matrix dimensions must be positive", line=start)
    if symmetry != "general" and rows != cols:
        raise ParseError("symmetric/hermitian array matrices must be square", line=start)
    # column-major order; symmetric/hermitian files store column-wise lower triangles
    if symmetry == "general":
        expected = [(i, j) for j in range(cols) for i in range(rows)]
    else:
        expected = [(i, j) for j in range(cols) for i in range(j, rows)]
    m = np.zeros((rows, cols), dtype=np.complex128)
    pos = 0
    for offset, raw in enumerate(lines[start:], start=start):
        lineno = offset + 1
        tokens = raw.split()
        if not tokens or raw.startswith("%"):
            continue
        if pos >= len(expected):
            raise ParseError("more values than the array holds", line=lineno)
        i, j = expected[pos]
        v = _entry_value(tokens, field, lineno)
        _apply_symmetry(m, i, j, v, symmetry, lineno)
        pos += 1
    if pos != len(expected):
        raise ParseError(f"expected {len(expected)} values, found {pos}", line=len(lines))
    return m


def write_matrix_market(path, matrix, fmt: str = "array") -> None:
    """Write a dense matrix in Matrix Market form (general symmetry).

    Real-valued matrices are written with the ``real`` field, everything
    else as ``complex``. ``fmt`` selects ``array`` or ``coordinate``.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError("only 2-D matrices can be written")
    is_real = bool(np.all(m.imag == 0.0))
    field = "real" if is_real else "complex"

    def fmt_value(v):
        if is_real:
            return f"{v.real:.17g}"
        return f"{v.real:.17g} {v.imag:.17g}"

    rows, cols = m.shape
    with open(path, "w", encoding="ascii") as fh:
        if fmt == "array":
            fh.write(f"%%MatrixMarket matrix array {field} general\n")
            fh.write(f"{rows} {cols}\n")
            for j in range(cols):
                for i in range(rows):
                    fh.write(fmt_value(m[i, j]) + "\n")
        elif fmt == "coordinate":
            nz = np.nonzero(m)
            fh.write(f"%%MatrixMarket matrix coordinate {field} general\n")
            fh.write(f"{rows} {cols} {len(nz[0])}\n")
            for i, j in zip(*nz):
                fh.write(f"{i + 1} {j + 1} {fmt_value(m[i, j])}\n")
        else:
            raise ValueError(f"unknown format {fmt!r}")
