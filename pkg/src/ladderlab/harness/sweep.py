"""Matrix sweeps over checks, run on a thread pool with deterministic output."""

from __future__ import annotations

import itertools
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from ..errors import LadderLabError
from .checks import CHECK_IDS, KINDS, run_check
from .config import ConfigError, RunConfig
from .io import summary_csv, write_json
from .tables import TableProvider

log = logging.getLogger(__name__)

_CONFIG_KEYS = {"omega", "t_anchor", "guard_fraction", "k0", "tolerances", "cache_dir", "threads"}


@dataclass
class SweepResult:
    rows: list[dict[str, Any]] = field(default_factory=list)
    records: list[dict[str, Any]] = field(default_factory=list)
    errors: list[dict[str, Any]] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(r["pass"] is True for r in self.rows)

    def csv(self) -> str:
        return summary_csv(self.rows)


def expand_matrix(spec: Mapping[str, Any]) -> list[dict[str, Any]]:
    """Cartesian product of the list-valued entries of a matrix block.

    ``{"check": ["unit"], "T": [1e5], "g": [5, 20], "k": [1, 2, 3]}`` gives six
    cells; scalar entries are shared by every cell.
    """
    keys = sorted(spec)
    axes = [spec[k] if isinstance(spec[k], list) else [spec[k]] for k in keys]
    return [dict(zip(keys, combo)) for combo in itertools.product(*axes)]


def parse_sweep(data: Mapping[str, Any]) -> tuple[RunConfig, list[dict[str, Any]]]:
    """Split a sweep document into its RunConfig and the list of check cells.

    Cells come from ``matrix`` (one block or a list of blocks, each expanded by
    ``expand_matrix``) and from ``cells`` (explicit parameter mappings).
    """
    unknown = set(data) - _CONFIG_KEYS - {"matrix", "cells"}
    if unknown:
        raise ConfigError(f"unknown sweep keys: {sorted(unknown)}")
    config = RunConfig.from_mapping({k: v for k, v in data.items() if k in _CONFIG_KEYS})
    blocks = data.get("matrix") or []
    if isinstance(blocks, Mapping):
        blocks = [blocks]
    cells: list[dict[str, Any]] = []
    for block in blocks:
        if not isinstance(block, Mapping) or "check" not in block:
            raise ConfigError("every matrix block needs a 'check' entry")
        cells.extend(expand_matrix(block))
    for cell in data.get("cells") or []:
        if not isinstance(cell, Mapping):
            raise ConfigError("'cells' must be a list of objects")
        cells.append(dict(cell))
    for cell in cells:
        if cell.get("check") not in KINDS:
            raise ConfigError(f"unknown check kind {cell.get('check')!r}; expected one of {list(KINDS)}")
        if "T" not in cell:
            raise ConfigError(f"cell {cell} lacks T")
    return config, cells


def _sort_key(row: Mapping[str, Any], cell: Mapping[str, Any]):
    def num(x):
        return -math.inf if x is None else float(x)
    return (str(row["check_id"]), num(row["T"]), num(row["g"]), num(row["k"]),
            json.dumps(cell, sort_keys=True, default=str))


def _num(x, kind):
    try:
        return None if x is None else kind(x)
    except (TypeError, ValueError):
        return None


def _run_cell(cell: Mapping[str, Any], config: RunConfig, tables: TableProvider):
    try:
        report, row = run_check(cell, config, tables)
        return row, report.to_record(), None
    except (LadderLabError, ConfigError, ValueError, ArithmeticError) as exc:
        log.warning("check %s failed: %s", cell, exc)
        row = {"check_id": CHECK_IDS[cell["check"]], "paper_eq": "", "T": _num(cell.get("T"), float),
               "g": _num(cell.get("g"), float), "k": _num(cell.get("k"), int), "lhs": None, "rhs": None,
               "residual": None, "pass": "error"}
        return row, None, {"cell": dict(cell), "error": f"{type(exc).__name__}: {exc}"}


def run_sweep(config: RunConfig, cells: list[Mapping[str, Any]], out_dir: str | Path | None = None,
              tables: TableProvider | None = None) -> SweepResult:
    """Run every cell, sort by (check_id, T, g, k) and optionally write the outputs.

    Ladder builds are serialized by the table provider, so no two workers
    build the same table; the checks themselves run in parallel.
    """
    tables = tables or TableProvider(config)
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        outcomes = list(pool.map(lambda c: _run_cell(c, config, tables), cells))

    order = sorted(range(len(cells)), key=lambda i: _sort_key(outcomes[i][0], cells[i]))
    result = SweepResult()
    for i in order:
        row, record, error = outcomes[i]
        result.rows.append(row)
        if record is not None:
            result.records.append(record)
        if error is not None:
            result.errors.append(error)

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for n, record in enumerate(result.records):
            write_json(record, out / f"{n:04d}_{record['check_id']}.json")
        (out / "summary.csv").write_text(result.csv(), encoding="utf-8")
        if result.errors:
            write_json({"errors": result.errors}, out / "errors.json")
    return result
