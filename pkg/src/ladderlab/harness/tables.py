"""Ladder tables on demand, shared in memory and persisted in the cache directory."""

from __future__ import annotations

import logging
import threading
from pathlib import Path

from ..errors import CacheError
from ..ladder import LadderTable, build_ladder, ladder_extent
from ..zeta_core import OmegaKind
from .config import RunConfig
from .io import load_ladder_cache, read_cache_header, save_ladder_cache

log = logging.getLogger(__name__)


def cache_path(cache_dir: Path, omega: OmegaKind, anchor: float, t_hi: float) -> Path:
    return Path(cache_dir) / f"ladder_{omega.value}_{anchor!r}_{t_hi!r}.csv"


class TableProvider:
    """Hands out tables covering [anchor, t_hi], building each at most once.

    A cached table with the same omega and anchor and a larger upper bound
    is reused.  Tables are immutable, so one instance serves every thread.
    """

    def __init__(self, config: RunConfig):
        self.config = config
        self._tables: dict[float, LadderTable] = {}
        self._lock = threading.Lock()

    def _from_disk(self, anchor: float, t_hi: float) -> LadderTable | None:
        cache_dir = self.config.cache_dir
        if not cache_dir.is_dir():
            return None
        best = None
        for path in sorted(cache_dir.glob(f"ladder_{self.config.omega.value}_*.csv")):
            try:
                head = read_cache_header(path)
                if float(head["anchor"]) != anchor or head["omega"] != self.config.omega.value:
                    continue
                table = load_ladder_cache(path, self.config.omega)
            except (CacheError, OSError, ValueError) as exc:
                log.warning("ignoring unusable cache %s: %s", path, exc)
                continue
            if table.t_hi >= t_hi and (best is None or table.t_hi < best.t_hi):
                best = table
        return best

    def get(self, anchor: float, t_hi: float) -> LadderTable:
        with self._lock:
            table = self._tables.get(anchor)
            if table is not None and table.t_hi >= t_hi:
                return table
            table = self._from_disk(anchor, t_hi)
            if table is None:
                log.info("building ladder on [%g, %g] (omega=%s)", anchor, t_hi, self.config.omega.value)
                table = build_ladder(anchor, t_hi, self.config.omega)
                try:
                    save_ladder_cache(table, cache_path(self.config.cache_dir, self.config.omega,
                                                        anchor, table.t_hi))
                except OSError as exc:
                    log.warning("could not write ladder cache: %s", exc)
            self._tables[anchor] = table
            return table

    def for_requirements(self, T: float, needs: list[tuple[float, int]]) -> LadderTable:
        """Table anchored per config that covers (T + g) reversed k times for each (g, k)."""
        anchor = self.config.anchor_for(T)
        t_hi = max([T + 1.0] + [ladder_extent(T, g, k, self.config.omega, anchor=anchor)
                                for g, k in needs])
        return self.get(anchor, round(t_hi, 0))
