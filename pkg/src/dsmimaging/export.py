"""File writers for maps: CSV with a grid header and 16-bit binary PGM."""

from pathlib import Path

import numpy as np

from .errors import DomainError, DsmError


class OutputError(DsmError, OSError):
    exit_code = 5


def map_to_csv(imap):
    g = imap.grid
    lines = [
        f"# grid,rows={g.rows},cols={g.cols},h={g.h!r},center_x={g.center[0]!r},center_y={g.center[1]!r}",
        f"# algorithm,{imap.algorithm}",
        "# row 0 = largest y; columns increase with x",
    ]
    for row in imap.values:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def map_from_csv(text):
    rows = [line for line in text.splitlines() if line and not line.startswith("#")]
    return np.array([[float(v) for v in r.split(",")] for r in rows])


def pgm_bytes(values):
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 2:
        raise DomainError("PGM export needs a 2D map")
    if np.any(vals < 0) or np.any(vals > 1) or not np.all(np.isfinite(vals)):
        raise DomainError("PGM export needs values in [0, 1]")
    rows, cols = vals.shape
    pix = np.rint(vals * 65535).astype(">u2")
    return f"P5\n{cols} {rows}\n65535\n".encode("ascii") + pix.tobytes()


def write_pgm(imap, path):
    """Write a normalized map as binary PGM, row 0 at the top."""
    data = pgm_bytes(imap.values)
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror}") from exc


def write_text(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror}") from exc
