"""Line-oriented ``key = value`` files for run settings and explicit modules.

A key whose value is left empty takes the indented lines below it as the
rows of an integer matrix::

    # a Sigma_3-module over Z/4
    n = 3
    q = 4
    iota.1 =
        0 1 0
        1 0 0
        0 0 1
    f.1 = 1 1 0

Blank lines and ``#`` comments are ignored.  Every error names its line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from .extension import ExtensionData, ModuleError, SigmaModule
from .linalg import ResidueMatrix, ResidueVector


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<config>"):
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)
        self.line = line


@dataclass
class Entry:
    value: Union[str, list[list[int]]]
    line: int


_KEY = re.compile(r"^[A-Za-z][A-Za-z0-9_.\-]*$")


def parse_text(text: str, source: str = "<config>") -> dict[str, Entry]:
    entries: dict[str, Entry] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if raw[:1].isspace() and current is not None:
            try:
                row = [int(tok) for tok in line.split()]
            except ValueError:
                raise ConfigError(f"matrix row must be integers: {line.strip()!r}", lineno, source)
            rows = entries[current].value
            if rows and len(rows[0]) != len(row):
                raise ConfigError("matrix rows of different lengths", lineno, source)
            rows.append(row)
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line.strip()!r}", lineno, source)
        key, value = (part.strip() for part in line.split("=", 1))
        if not _KEY.match(key):
            raise ConfigError(f"bad key {key!r}", lineno, source)
        if key in entries:
            raise ConfigError(f"duplicate key {key!r} (first on line {entries[key].line})", lineno, source)
        if value:
            entries[key] = Entry(value, lineno)
            current = None
        else:
            entries[key] = Entry([], lineno)
            current = key
    for key, e in entries.items():
        if isinstance(e.value, list) and not e.value:
            raise ConfigError(f"{key!r} has no value and no matrix rows", e.line, source)
    return entries


def parse_file(path: Union[str, Path]) -> dict[str, Entry]:
    path = Path(path)
    return parse_text(path.read_text(), str(path))


def _int(entries, key, source, default=None) -> int:
    if key not in entries:
        if default is None:
            raise ConfigError(f"missing key {key!r}", None, source)
        return default
    e = entries[key]
    try:
        return int(e.value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key!r} must be an integer", e.line, source)


def _matrix(e: Entry, key: str, source: str) -> list[list[int]]:
    if isinstance(e.value, list):
        return e.value
    # single-line form: rows separated by '|'
    try:
        return [[int(t) for t in chunk.split()] for chunk in e.value.split("|")]
    except ValueError:
        raise ConfigError(f"{key!r} must be a matrix of integers", e.line, source)


def _vector(e: Entry, key: str, source: str) -> list[int]:
    rows = _matrix(e, key, source)
    if len(rows) != 1:
        raise ConfigError(f"{key!r} must be a single row", e.line, source)
    return rows[0]


def load_extension(entries: dict[str, Entry], source: str = "<module>") -> ExtensionData:
    """Build :class:`ExtensionData` from ``n``, ``q``, ``iota.<s>``, ``gens`` and ``f.<s>`` keys.

    ``iota.<s>`` act on column vectors; ``gens`` rows span the submodule
    (defaults to the whole ambient module); ``rank`` defaults to the size of
    ``iota.1``.
    """
    known = {"n", "q", "rank", "gens"}
    n = _int(entries, "n", source)
    q = _int(entries, "q", source)
    if n < 2 or q < 1:
        raise ConfigError("need n >= 2 and q >= 1", entries["n"].line, source)
    for key, e in entries.items():
        base, _, idx = key.partition(".")
        if key in known:
            continue
        if base in ("iota", "f") and idx.isdigit() and 1 <= int(idx) <= n - 1:
            continue
        raise ConfigError(f"unknown key {key!r}", e.line, source)
    action = []
    for s in range(1, n):
        key = f"iota.{s}"
        if key not in entries:
            raise ConfigError(f"missing key {key!r}", None, source)
        action.append(_matrix(entries[key], key, source))
    rank = _int(entries, "rank", source, default=len(action[0]))
    gens = (
        _matrix(entries["gens"], "gens", source)
        if "gens" in entries
        else [[int(i == j) for j in range(rank)] for i in range(rank)]
    )
    f = []
    for s in range(1, n):
        key = f"f.{s}"
        if key not in entries:
            raise ConfigError(f"missing key {key!r}", None, source)
        f.append(_vector(entries[key], key, source))
    try:
        module = SigmaModule(
            n, q, rank, tuple(ResidueMatrix(tuple(map(tuple, a)), q) for a in action),
            ResidueMatrix(tuple(map(tuple, gens)), q),
        )
        return ExtensionData(module, tuple(ResidueVector(tuple(v), q) for v in f))
    except (ModuleError, ValueError) as exc:
        raise ConfigError(str(exc), None, source) from exc


def load_extension_file(path: Union[str, Path]) -> ExtensionData:
    return load_extension(parse_file(path), str(path))


def dump_extension(ext: ExtensionData) -> str:
    """Inverse of :func:`load_extension` (realizations are not serialized)."""
    mod = ext.module
    lines = [f"n = {mod.n}", f"q = {mod.q}", f"rank = {mod.rank}"]

    def block(key, rows):
        lines.append(f"{key} =")
        lines.extend("    " + " ".join(str(x) for x in row) for row in rows)

    for s in range(1, mod.n):
        block(f"iota.{s}", mod.iota(s).tolist())
    block("gens", mod.submodule_gens.tolist())
    for s, v in enumerate(ext.f, 1):
        lines.append(f"f.{s} = " + " ".join(str(x) for x in v.coords))
    return "\n".join(lines) + "\n"


@dataclass
class RunConfig:
    command: str = "analyze"
    n: list[int] = field(default_factory=lambda: [3])
    q: list[int] = field(default_factory=lambda: [2])
    family: str = "wreath"
    module_file: str | None = None
    budget_lifts: int = 10**7
    budget_group: int = 10**4
    format: str = "text"
    out: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.family != "wreath":
            raise ConfigError(f"unknown family {self.family!r}")
        if self.budget_lifts < 1 or self.budget_group < 1:
            raise ConfigError("budgets must be positive")
        if self.format not in ("text", "json"):
            raise ConfigError(f"format must be 'text' or 'json', got {self.format!r}")
        if self.workers < 1:
            raise ConfigError("workers must be positive")


def parse_range(text: str) -> list[int]:
    """``"5"``, ``"2..12"`` (inclusive) or ``"3,5,7"``; ``"3..2"`` is empty."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(t) for t in text.split(",") if t.strip()]


RUN_KEYS = {"n", "q", "q-range", "family", "module-file", "budget-lifts", "budget-group", "format", "out", "workers"}


def run_settings(entries: dict[str, Entry], source: str = "<config>") -> dict[str, object]:
    """Translate run-config file entries to the same names the command-line flags use."""
    out: dict[str, object] = {}
    for key, e in entries.items():
        if key not in RUN_KEYS:
            raise ConfigError(f"unknown key {key!r}", e.line, source)
        if isinstance(e.value, list):
            raise ConfigError(f"{key!r} must be a single value", e.line, source)
        try:
            if key in ("n", "q", "q-range"):
                out[key] = parse_range(e.value)
            elif key in ("budget-lifts", "budget-group", "workers"):
                out[key] = int(e.value)
            else:
                out[key] = e.value
        except ValueError:
            raise ConfigError(f"bad value for {key!r}: {e.value!r}", e.line, source)
    return out
