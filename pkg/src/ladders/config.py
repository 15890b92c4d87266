"""Flat key=value configs describing an operator family.

Format: one ``key = value`` pair per line, ``#`` starts a comment line,
lists use brackets (``gammas = [1, 2, 1, 2]``), matrices use one level of
nesting (``R = [[1, 1], [0, 1]]``) with entries accepted in the same
``re+imi`` syntax the matrix dump format uses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .matrixio import parse_complex

__all__ = ["FamilyConfig", "KINDS", "load_config", "parse_config"]

KINDS = (
    "truncated_boson",
    "truncated_quon",
    "bosonlike_quon",
    "circulant_quon",
    "pseudo",
    "chain",
    "example_fixture",
    "general_matrix",
)

# keys each kind requires / additionally accepts
_REQUIRED = {
    "truncated_boson": {"L"},
    "truncated_quon": {"L", "q"},
    "bosonlike_quon": {"L", "q"},
    "circulant_quon": {"L", "q"},
    "pseudo": {"L", "q"},
    "chain": {"gammas"},
    "example_fixture": set(),
    "general_matrix": {"matrix"},
}
_OPTIONAL = {
    "truncated_boson": set(),
    "truncated_quon": set(),
    "bosonlike_quon": set(),
    "circulant_quon": set(),
    "pseudo": {"regime", "R"},
    "chain": {"M"},
    "example_fixture": {"q"},
    "general_matrix": set(),
}


@dataclass
class FamilyConfig:
    """Validated parameters for one operator family."""

    kind: str
    L: int | None = None
    M: int | None = None
    q: float | None = None
    regime: str | None = None
    gammas: np.ndarray | None = None
    R: np.ndarray | None = None
    matrix: np.ndarray | None = None
    seed: int | None = None


def _tokenize_list(value: str, line: int):
    """Parse a bracketed, possibly nested, comma-separated list."""
    pos = 0

    def parse_node():
        nonlocal pos
        while pos < len(value) and value[pos].isspace():
            pos += 1
        if pos >= len(value):
            raise ConfigError("unexpected end of list", line)
        if value[pos] == "[":
            pos += 1
            items = []
            while True:
                while pos < len(value) and value[pos].isspace():
                    pos += 1
                if pos < len(value) and value[pos] == "]":
                    pos += 1
                    return items
                items.append(parse_node())
                while pos < len(value) and value[pos].isspace():
                    pos += 1
                if pos < len(value) and value[pos] == ",":
                    pos += 1
                elif pos < len(value) and value[pos] == "]":
                    pos += 1
                    return items
                elif pos >= len(value):
                    raise ConfigError("unterminated list", line)
        start = pos
        while pos < len(value) and value[pos] not in ",]":
            pos += 1
        atom = value[start:pos].strip()
        if not atom:
            raise ConfigError("empty list element", line)
        return atom

    node = parse_node()
    while pos < len(value) and value[pos].isspace():
        pos += 1
    if pos != len(value):
        raise ConfigError(f"trailing characters after list: {value[pos:]!r}", line)
    if not isinstance(node, list):
        raise ConfigError("expected a bracketed list", line)
    return node


def _as_float_list(node, line: int) -> np.ndarray:
    out = []
    for item in node:
        if isinstance(item, list):
            raise ConfigError("expected a flat list of numbers", line)
        z = parse_complex(item)
        if z.imag != 0.0:
            raise ConfigError(f"expected a real number, got {item!r}", line)
        out.append(z.real)
    return np.array(out, dtype=float)


def _as_matrix(node, line: int) -> np.ndarray:
    if not node or not all(isinstance(row, list) for row in node):
        raise ConfigError("expected a nested list of rows", line)
    width = len(node[0])
    rows = []
    for row in node:
        if len(row) != width:
            raise ConfigError("matrix rows have inconsistent lengths", line)
        rows.append([parse_complex(item) for item in row])
    m = np.array(rows, dtype=np.complex128)
    if m.shape[0] != m.shape[1]:
        raise ConfigError(f"matrix must be square, got shape {m.shape}", line)
    return m


def parse_config(text: str) -> FamilyConfig:
    """Parse and validate config text, raising :class:`ConfigError` on defects."""
    pairs: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"expected key = value, got {line!r}", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in pairs:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        if not value:
            raise ConfigError(f"missing value for {key!r}", lineno)
        pairs[key] = (value, lineno)

    if "kind" not in pairs:
        raise ConfigError("missing required key 'kind'")
    kind, kind_line = pairs.pop("kind")
    if kind not in KINDS:
        raise ConfigError(f"unknown kind {kind!r}; expected one of {KINDS}", kind_line)

    allowed = _REQUIRED[kind] | _OPTIONAL[kind] | {"seed"}
    cfg = FamilyConfig(kind=kind)
    for key, (value, lineno) in pairs.items():
        if key not in allowed:
            raise ConfigError(f"key {key!r} is not valid for kind {kind!r}", lineno)
        if key in ("L", "M", "seed"):
            try:
                setattr(cfg, key, int(value))
            except ValueError:
                raise ConfigError(f"{key} must be an integer, got {value!r}", lineno)
        elif key == "q":
            try:
                cfg.q = float(value)
            except ValueError:
                raise ConfigError(f"q must be a real number, got {value!r}", lineno)
        elif key == "regime":
            if value not in ("quon", "bosonlike"):
                raise ConfigError(
                    f"regime must be 'quon' or 'bosonlike', got {value!r}", lineno
                )
            cfg.regime = value
        elif key == "gammas":
            cfg.gammas = _as_float_list(_tokenize_list(value, lineno), lineno)
        elif key in ("R", "matrix"):
            setattr(cfg, key, _as_matrix(_tokenize_list(value, lineno), lineno))

    missing = _REQUIRED[kind] - set(pairs)
    if missing:
        raise ConfigError(
            f"kind {kind!r} requires {sorted(missing)}; not found", kind_line
        )
    _validate(cfg, pairs)
    return cfg


def _line_of(pairs, key: str) -> int | None:
    return pairs[key][1] if key in pairs else None


def _validate(cfg: FamilyConfig, pairs) -> None:
    if cfg.L is not None and cfg.L < 1:
        raise ConfigError(f"L must be >= 1, got {cfg.L}", _line_of(pairs, "L"))
    if cfg.q is not None and not -1.0 <= cfg.q <= 1.0:
        raise ConfigError(f"q must lie in [-1, 1], got {cfg.q}", _line_of(pairs, "q"))
    if cfg.kind == "circulant_quon" and cfg.q is not None and abs(1.0 - cfg.q) < 1e-12:
        raise ConfigError(
            "circulant normalization 1/sqrt(1-q) is singular at q=1",
            _line_of(pairs, "q"),
        )
    if cfg.gammas is not None:
        if cfg.gammas.shape[0] < 2:
            raise ConfigError(
                "gammas needs at least 2 entries", _line_of(pairs, "gammas")
            )
        if np.any(cfg.gammas <= 0.0):
            raise ConfigError(
                "all gammas must be strictly positive", _line_of(pairs, "gammas")
            )
        if cfg.M is not None and cfg.M != cfg.gammas.shape[0]:
            raise ConfigError(
                f"M={cfg.M} disagrees with {cfg.gammas.shape[0]} gammas",
                _line_of(pairs, "M"),
            )
    if cfg.kind == "pseudo" and cfg.R is not None and cfg.L is not None:
        if cfg.R.shape[0] != cfg.L + 1:
            raise ConfigError(
                f"R has dimension {cfg.R.shape[0]}, pseudo with L={cfg.L} "
                f"needs {cfg.L + 1}",
                _line_of(pairs, "R"),
            )
    if cfg.matrix is not None and not np.all(np.isfinite(cfg.matrix)):
        raise ConfigError("matrix has non-finite entries", _line_of(pairs, "matrix"))


def load_config(path) -> FamilyConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
