"""Sign-change scanning and bracketed refinement for real functions on a line."""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.optimize import brentq


def scan_grid(a: float, b: float, step: float) -> np.ndarray:
    n = max(1, int(np.ceil((b - a) / step)))
    return np.linspace(a, b, n + 1)


def sign_change_brackets(values: np.ndarray) -> np.ndarray:
    """Indices i with values[i] and values[i+1] of strictly opposite sign, or values[i] == 0."""
    v = np.asarray(values)
    return np.nonzero((v[:-1] * v[1:] < 0) | (v[:-1] == 0))[0]


def refine_roots(
    f: Callable[[float], float],
    grid: np.ndarray,
    values: np.ndarray,
    xtol: float = 1e-12,
) -> np.ndarray:
    """Roots of f from every sign change of ``values`` sampled on ``grid``."""
    roots = []
    for i in sign_change_brackets(values):
        a, b = float(grid[i]), float(grid[i + 1])
        if values[i] == 0:
            roots.append(a)
            continue
        roots.append(brentq(f, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps))
    if values.size and values[-1] == 0:
        roots.append(float(grid[-1]))
    return np.unique(np.array(roots, dtype=float))
