"""File formats: reference zero tables, ladder caches, JSON reports and CSV summaries."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np

from ..errors import CacheError, DomainError, ZeroTableError
from ..ladder import LadderTable, validate_table
from ..zeta_core import OmegaKind

CACHE_VERSION = "v1"
_HEADER = re.compile(
    r"^# ladderlab-cache (?P<version>v\d+) omega=(?P<omega>\S+) "
    r"anchor=(?P<anchor>\S+) value=(?P<value>\S+)\s*$")

SUMMARY_COLUMNS = ("check_id", "paper_eq", "T", "g", "k", "lhs", "rhs", "residual", "pass")


# --------------------------------------------------------------------------
# reference zeros
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroTable:
    source: Path
    gammas: np.ndarray

    def window(self, lo: float, hi: float) -> np.ndarray:
        return self.gammas[(self.gammas >= lo) & (self.gammas <= hi)]


def load_zero_table(path: str | os.PathLike) -> ZeroTable:
    """One zero ordinate per line; blank lines and lines starting with '#' are skipped.

    Values must be finite, nonnegative and strictly increasing in file order.
    """
    path = Path(path)
    values: list[float] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                x = float(line)
            except ValueError:
                raise ZeroTableError(f"{path}:{lineno}: cannot parse {line!r} as a number") from None
            if not math.isfinite(x) or x < 0:
                raise ZeroTableError(f"{path}:{lineno}: zero ordinate {line!r} must be finite and >= 0")
            if values and x == values[-1]:
                raise ZeroTableError(f"{path}:{lineno}: duplicate zero {line}")
            if values and x < values[-1]:
                raise ZeroTableError(f"{path}:{lineno}: {line} breaks increasing order "
                                     f"(previous {values[-1]!r})")
            values.append(x)
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return ZeroTable(path, arr)


# --------------------------------------------------------------------------
# ladder cache
# --------------------------------------------------------------------------

def save_ladder_cache(table: LadderTable, path: str | os.PathLike) -> Path:
    """Write the table as text; node pairs at 17 significant digits round-trip exactly.

    The file is written to a temporary name and renamed, so readers never
    see a partial cache.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    buf.write(f"# ladderlab-cache {CACHE_VERSION} omega={table.omega.value} "
              f"anchor={table.anchor_t!r} value={table.anchor_value!r}\n")
    np.savetxt(buf, np.column_stack([table.t, table.phi]), fmt="%.17g", delimiter=",")
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text(buf.getvalue(), encoding="utf-8")
    os.replace(tmp, path)
    return path


def read_cache_header(path: str | os.PathLike) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
    m = _HEADER.match(first)
    if not m:
        raise CacheError(f"{path}: missing or malformed ladderlab-cache header")
    return m.groupdict()


def load_ladder_cache(path: str | os.PathLike, omega: OmegaKind | str | None = None,
                      dense_order: int = 12) -> LadderTable:
    """Load a cached table; ``omega`` (if given) must match the cached weight."""
    head = read_cache_header(path)
    if head["version"] != CACHE_VERSION:
        raise CacheError(f"{path}: cache version {head['version']} is not supported "
                         f"(expected {CACHE_VERSION})")
    try:
        cached = OmegaKind.parse(head["omega"])
    except ValueError as exc:
        raise CacheError(f"{path}: {exc}") from None
    if omega is not None and OmegaKind.parse(omega) is not cached:
        raise CacheError(f"{path}: cached omega={cached.value} does not match "
                         f"requested {OmegaKind.parse(omega).value}")
    try:
        anchor, value = float(head["anchor"]), float(head["value"])
        data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    except ValueError as exc:
        raise CacheError(f"{path}: corrupted cache body: {exc}") from None
    if data.shape[1] != 2 or data.shape[0] < 2:
        raise CacheError(f"{path}: expected at least two 't,phi1' rows")
    t = np.ascontiguousarray(data[:, 0])
    phi = np.ascontiguousarray(data[:, 1])
    if t[0] != anchor or phi[0] != value:
        raise CacheError(f"{path}: first node ({t[0]!r}, {phi[0]!r}) disagrees with header anchor")
    table = LadderTable(cached, anchor, value, t, phi, dense_order)
    try:
        validate_table(table)
    except DomainError as exc:
        raise CacheError(f"{path}: {exc}") from None
    return table


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------

def _jsonable(x: Any) -> Any:
    if isinstance(x, Mapping):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def dumps_record(record: Mapping[str, Any]) -> str:
    return json.dumps(_jsonable(record), indent=2, sort_keys=False) + "\n"


def write_json(record: Mapping[str, Any], path: str | os.PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_record(record), encoding="utf-8")
    return path


def _fmt(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def summary_csv(rows: Iterable[Mapping[str, Any]]) -> str:
    """CSV text with SUMMARY_COLUMNS; ``pass`` is true/false, or ``error`` for failed cells."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in SUMMARY_COLUMNS])
    return buf.getvalue()
