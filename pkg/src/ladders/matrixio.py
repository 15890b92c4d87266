"""Plain-text matrix serialization with exact round-trip.

One matrix row per line, entries space-separated, each entry rendered as
``re+imi`` / ``re-imi`` with 17 significant digits (enough to reproduce any
IEEE double bit-exactly), lowercase ``i``, no spaces inside a number.
"""

from __future__ import annotations

import re

import numpy as np

__all__ = [
    "dump_matrix",
    "format_complex",
    "format_matrix",
    "load_matrix",
    "parse_complex",
    "parse_matrix",
]

_FLOAT = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_FULL = re.compile(rf"([+-]?{_FLOAT})([+-]{_FLOAT})i\Z")
_IMAG = re.compile(rf"([+-]?{_FLOAT})i\Z")
_REAL = re.compile(rf"([+-]?{_FLOAT})\Z")


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}i"


def parse_complex(token: str) -> complex:
    token = token.strip()
    m = _FULL.match(token)
    if m:
        return complex(float(m.group(1)), float(m.group(2)))
    m = _IMAG.match(token)
    if m:
        return complex(0.0, float(m.group(1)))
    m = _REAL.match(token)
    if m:
        return complex(float(m.group(1)), 0.0)
    raise ValueError(f"not a complex number: {token!r}")


def format_matrix(x) -> str:
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    rows = (" ".join(format_complex(z) for z in row) for row in a)
    return "\n".join(rows) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        rows.append([parse_complex(tok) for tok in line.split()])
    if not rows:
        raise ValueError("matrix text is empty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("matrix rows have inconsistent lengths")
    return np.array(rows, dtype=np.complex128)


def dump_matrix(x, path) -> str:
    """Write a matrix to ``path`` in the text format; returns the path."""
    text = format_matrix(x)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)
    return str(path)


def load_matrix(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        return parse_matrix(fh.read())
