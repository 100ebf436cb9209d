"""Plain-text matrix files.

Layout::

    %duforge-matrix version=1 d=2 rows=4 cols=4 kind=cue
    <re> <im> <re> <im> ...        one matrix row per line

Entries are written with 17 significant digits so doubles round-trip exactly.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import MatrixFileError

MAGIC = "%duforge-matrix"
VERSION = 1


def format_matrix(M, d: int | None = None, kind: str = "matrix") -> str:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise MatrixFileError("only 2-d arrays can be written")
    rows, cols = M.shape
    if d is None:
        d = int(round(np.sqrt(rows)))
    if any(c.isspace() for c in kind) or "=" in kind:
        raise MatrixFileError(f"invalid kind tag {kind!r}")
    lines = [f"{MAGIC} version={VERSION} d={d} rows={rows} cols={cols} kind={kind}"]
    for row in M:
        lines.append(" ".join(f"{z.real:.17g} {z.imag:.17g}" for z in row))
    return "\n".join(lines) + "\n"


def write_matrix(path, M, d: int | None = None, kind: str = "matrix") -> None:
    Path(path).write_text(format_matrix(M, d, kind))


def parse_matrix(text: str) -> tuple[np.ndarray, dict]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith(MAGIC):
        raise MatrixFileError("missing %duforge-matrix header")
    header = {}
    for tok in lines[0].split()[1:]:
        if "=" not in tok:
            raise MatrixFileError(f"bad header token {tok!r}")
        k, v = tok.split("=", 1)
        header[k] = v
    try:
        version = int(header["version"])
        rows, cols, d = int(header["rows"]), int(header["cols"]), int(header["d"])
    except (KeyError, ValueError) as exc:
        raise MatrixFileError(f"incomplete header: {exc}") from exc
    if version != VERSION:
        raise MatrixFileError(f"unsupported format version {version}")
    body = lines[1:]
    if len(body) != rows:
        raise MatrixFileError(f"expected {rows} rows, found {len(body)}")
    M = np.empty((rows, cols), dtype=complex)
    for r, ln in enumerate(body):
        try:
            vals = [float(x) for x in ln.split()]
        except ValueError as exc:
            raise MatrixFileError(f"row {r}: {exc}") from exc
        if len(vals) != 2 * cols:
            raise MatrixFileError(f"row {r}: expected {2 * cols} numbers, found {len(vals)}")
        M[r] = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
    if not np.all(np.isfinite(M)):
        raise MatrixFileError("non-finite entries")
    return M, {"version": version, "d": d, "rows": rows, "cols": cols, "kind": header.get("kind", "")}


def read_matrix(path) -> tuple[np.ndarray, dict]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MatrixFileError(f"cannot read {path}: {exc}") from exc
    return parse_matrix(text)
