"""Dataset files.

Two formats:

* text: one float per line, decimal or hex (``0x1.8p+1``); blank lines and
  ``#`` comments are skipped;
* binary: the 8-byte magic ``RSUMF64\\0`` followed by little-endian float64.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

MAGIC = b"RSUMF64\0"
BINARY_SUFFIXES = (".f64", ".bin")


class DatasetError(ValueError):
    pass


def _parse_token(tok: str, lineno: int) -> float:
    try:
        if "0x" in tok.lower():
            return float.fromhex(tok)
        return float(tok)
    except ValueError:
        raise DatasetError(f"line {lineno}: not a float: {tok!r}") from None


def read_dataset(path: str | os.PathLike) -> np.ndarray:
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise DatasetError(f"cannot read {p}: {exc.strerror}") from exc
    if raw.startswith(MAGIC):
        body = raw[len(MAGIC):]
        if len(body) % 8:
            raise DatasetError(f"{p}: binary payload is not a whole number of float64")
        return np.frombuffer(body, dtype="<f8").astype(np.float64)
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise DatasetError(f"{p}: neither a {MAGIC!r} binary file nor UTF-8 text") from None
    values = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            values.append(_parse_token(line, lineno))
    return np.array(values, dtype=np.float64)


def write_dataset(path: str | os.PathLike, values, *, binary: bool | None = None,
                  hex_floats: bool = False) -> None:
    """Write ``values``; ``binary=None`` picks the format from the suffix."""
    p = Path(path)
    a = np.ascontiguousarray(np.asarray(values, dtype=np.float64).reshape(-1))
    if binary is None:
        binary = p.suffix in BINARY_SUFFIXES
    if binary:
        p.write_bytes(MAGIC + a.astype("<f8").tobytes())
        return
    fmt = float.hex if hex_floats else repr
    p.write_text("".join(fmt(v) + "\n" for v in a.tolist()))
