"""Jacob's ladder phi_1 as the antiderivative of Z~^2, and its reverse iterates.

The table stores phi_1 at panel nodes.  Between nodes phi_1 is evaluated by
dense output: the node value plus a Gauss-Legendre integral of Z~^2 from the
node, so ``d phi1 / dt`` equals ``z_tilde_sq`` everywhere up to quadrature
error.  The reverse iterated integrals are exact consequences of that identity,
and a cubic interpolant (error ~h^4 * 1e3 at h = 0.05) would spoil them.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import zeta_core
from .errors import BracketError, ConvergenceError, DomainError
from .quadrature import adaptive_panels, gauss_legendre
from .zeta_core import EULER_GAMMA, OmegaKind


@dataclass(frozen=True)
class StepPolicy:
    """Panel control for ``build_ladder``.

    ``local_tol`` is the accepted |K21 - G10| per unit t on each panel.
    """

    h_max: float = 0.25
    h_min: float = 1e-6
    local_tol: float = 1e-9
    dense_order: int = 12
    chunk_panels: int = 40_000


@dataclass(frozen=True, eq=False)
class LadderTable:
    omega: OmegaKind
    anchor_t: float
    anchor_value: float
    t: np.ndarray
    phi: np.ndarray
    dense_order: int = 12

    def __post_init__(self):
        for arr in (self.t, self.phi):
            arr.setflags(write=False)

    @property
    def t_lo(self) -> float:
        return float(self.t[0])

    @property
    def t_hi(self) -> float:
        return float(self.t[-1])

    @property
    def phi_lo(self) -> float:
        return float(self.phi[0])

    @property
    def phi_hi(self) -> float:
        return float(self.phi[-1])

    def __len__(self) -> int:
        return self.t.size

    def covers(self, t_lo: float, t_hi: float) -> bool:
        return self.t_lo <= t_lo and t_hi <= self.t_hi


@dataclass(frozen=True)
class IteratedInterval:
    T: float
    g: float
    k: int
    lo: float
    hi: float

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack


@dataclass(frozen=True)
class ComponentSet:
    T: float
    g: float
    k: int
    components: tuple[IteratedInterval, ...]
    gaps: tuple[float, ...] = field(default=())

    def pairwise_disjoint(self) -> bool:
        comps = sorted(self.components, key=lambda c: c.lo)
        return all(a.hi < b.lo for a, b in zip(comps, comps[1:]))


def anchor_value(anchor_t: float) -> float:
    """phi_1 at the anchor, placing the first gap at (1 - c) t / ln t."""
    return anchor_t - (1.0 - EULER_GAMMA) * anchor_t / math.log(anchor_t)


def build_ladder(
    t_lo: float,
    t_hi: float,
    omega: OmegaKind | str = OmegaKind.LOG_T,
    step_policy: StepPolicy | None = None,
) -> LadderTable:
    """Integrate phi_1' = z_tilde_sq(t) from the anchor t_lo up to t_hi.

    The right side does not depend on phi_1, so each step is a panel
    quadrature; a panel whose error estimate exceeds the local tolerance is
    halved until it passes.
    """
    omega = OmegaKind.parse(omega)
    policy = step_policy or StepPolicy()
    if not (zeta_core.T_MIN_SUPPORTED <= t_lo < t_hi) or not math.isfinite(t_hi):
        raise DomainError(f"build_ladder: need {zeta_core.T_MIN_SUPPORTED} <= t_lo < t_hi, "
                          f"got [{t_lo}, {t_hi}]")

    def f(x):
        return zeta_core.z_tilde_sq(x, omega)

    n0 = max(1, int(math.ceil((t_hi - t_lo) / policy.h_max)))
    edges = np.linspace(t_lo, t_hi, n0 + 1)
    try:
        panels = adaptive_panels(f, edges, policy.local_tol, min_width=policy.h_min,
                                 max_evaluations=max(50 * 21 * n0, 1_000_000),
                                 chunk_panels=policy.chunk_panels)
    except ConvergenceError as exc:
        raise ConvergenceError(f"build_ladder: step policy failed: {exc}") from exc
    nodes = np.append(panels.lo, t_hi)
    a_val = anchor_value(t_lo)
    phi = a_val + np.concatenate([[0.0], np.cumsum(panels.value)])
    table = LadderTable(omega, float(t_lo), a_val, nodes, phi, policy.dense_order)
    validate_table(table)
    return table


def validate_table(table: LadderTable) -> None:
    """Raise DomainError unless nodes and values are strictly increasing and below the diagonal."""
    t, phi = table.t, table.phi
    if t.size < 2 or not np.all(np.diff(t) > 0):
        raise DomainError("ladder nodes are not strictly increasing")
    if not np.all(np.diff(phi) > 0):
        i = int(np.argmin(np.diff(phi)))
        raise DomainError(f"ladder values not strictly increasing near t={t[i]}")
    if not np.all(phi < t):
        i = int(np.argmax(phi >= t))
        raise DomainError(f"ladder crosses the diagonal at t={t[i]} "
                          f"(omega={table.omega.value})")


def _panel_index(table: LadderTable, u: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(table.t, u, side="right") - 1
    return np.clip(idx, 0, table.t.size - 2)


def _dense_increment(table: LadderTable, idx: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """Integral of Z~^2 from node idx over length delta (Gauss-Legendre)."""
    x, w = gauss_legendre(table.dense_order)
    offs = delta[:, None] * (0.5 * (x[None, :] + 1.0))
    nodes = np.broadcast_to(table.t[idx][:, None], offs.shape)
    vals = zeta_core.z_tilde_sq(nodes.ravel(), table.omega, offs.ravel()).reshape(offs.shape)
    return 0.5 * delta * (vals @ w)


def phi1(table: LadderTable, t):
    """phi_1(t) by dense output; no extrapolation outside [t_lo, t_hi]."""
    u = np.asarray(t, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u).ravel()
    if u.size and (u.min() < table.t_lo or u.max() > table.t_hi or not np.all(np.isfinite(u))):
        bad = u[(u < table.t_lo) | (u > table.t_hi) | ~np.isfinite(u)][0]
        raise DomainError(f"phi1: t={bad!r} outside table domain [{table.t_lo}, {table.t_hi}]")
    idx = _panel_index(table, u)
    out = table.phi[idx] + _dense_increment(table, idx, u - table.t[idx])
    return float(out[0]) if scalar else out.reshape(np.shape(t))


def phi1_offset(table: LadderTable, base, offset: np.ndarray):
    """phi_1(base + offset) as a new (base, offset) pair.

    Points are carried as a table value plus a small offset so that short
    intervals deep in the iteration keep their relative resolution; the sum
    base + offset would round to ulp(t).
    """
    offset = np.asarray(offset, dtype=float)
    base = np.broadcast_to(np.asarray(base, dtype=float), offset.shape)
    approx = base + offset
    if approx.size and (approx.min() < table.t_lo - 1e-9 * table.t_lo
                        or approx.max() > table.t_hi + 1e-9 * table.t_hi):
        bad = approx[(approx < table.t_lo) | (approx > table.t_hi)][0]
        raise DomainError(f"phi1: t={bad!r} outside table domain [{table.t_lo}, {table.t_hi}]")
    idx = _panel_index(table, approx)
    # base and the node are close, so their difference is exact
    delta = (base - table.t[idx]) + offset
    return table.phi[idx], _dense_increment(table, idx, delta)


def phi1_iter(table: LadderTable, t, r: int):
    """r-fold composition of phi_1; r = 0 is the identity."""
    if r < 0:
        raise ValueError("phi1_iter: r must be nonnegative")
    u = t
    for j in range(1, r + 1):
        try:
            u = phi1(table, u)
        except DomainError as exc:
            raise DomainError(f"phi1_iter: iterate {j} of {r} left the table: {exc}") from exc
    return u


def _invert_once(table: LadderTable, y: float) -> float:
    if not (table.phi_lo <= y <= table.phi_hi):
        raise BracketError(f"reverse_iterate: value {y!r} outside ladder range "
                           f"[{table.phi_lo}, {table.phi_hi}]; table domain too small")
    i = int(np.searchsorted(table.phi, y, side="right")) - 1
    i = min(max(i, 0), table.t.size - 2)
    a, b = float(table.t[i]), float(table.t[i + 1])
    offset = float(table.phi[i]) - y
    if offset == 0.0:
        return a

    x, w = gauss_legendre(table.dense_order)

    def residual(s: float) -> float:
        delta = s - a
        offs = delta * 0.5 * (x + 1.0)
        return offset + 0.5 * delta * float(zeta_core.z_tilde_sq(np.full(offs.size, a), table.omega, offs) @ w)

    fb = residual(b)
    if fb <= 0.0:
        return b
    return brentq(residual, a, b, xtol=1e-12, rtol=4 * np.finfo(float).eps, maxiter=200)


def reverse_iterate(table: LadderTable, target: float, k: int) -> float:
    """The k-fold preimage of target under phi_1, one bracketed solve per level."""
    if k < 0:
        raise ValueError("reverse_iterate: k must be nonnegative")
    x = float(target)
    for _ in range(k):
        x = _invert_once(table, x)
    return x


def interval_reverse(table: LadderTable, T: float, g: float, k: int) -> IteratedInterval:
    if g < 0:
        raise ValueError(f"interval_reverse: g={g} must be nonnegative")
    lo = reverse_iterate(table, T, k)
    hi = lo if g == 0 else reverse_iterate(table, T + g, k)
    if hi - lo > 0.5 * T / math.log(T):
        warnings.warn(f"iterated interval length {hi - lo:.6g} exceeds 0.5*T/ln T at T={T}",
                      RuntimeWarning, stacklevel=2)
    return IteratedInterval(float(T), float(g), int(k), lo, hi)


def component_set(table: LadderTable, T: float, g: float, k: int) -> ComponentSet:
    """Components [T^r, (T+g)^r] for r = 0..k and the gaps between consecutive ones."""
    comps = []
    lo, hi = float(T), float(T + g)
    for r in range(k + 1):
        if r:
            lo = _invert_once(table, lo)
            hi = lo if g == 0 else _invert_once(table, hi)
        comps.append(IteratedInterval(float(T), float(g), r, lo, hi))
    gaps = tuple(b.lo - a.hi for a, b in zip(comps, comps[1:]))
    return ComponentSet(float(T), float(g), int(k), tuple(comps), gaps)


def ladder_extent(T: float, g: float, k: int, omega: OmegaKind | str = OmegaKind.LOG_T,
                  margin: float = 0.08, anchor: float | None = None) -> float:
    """Estimate the table upper bound needed for (T + g) reversed k times.

    Uses the mean value ln(t / 2 pi) + 2c of Z^2 to model how the gap
    t - phi_1(t) drifts away from its value at the anchor (default T).
    """
    omega = OmegaKind.parse(omega)
    a = T if anchor is None else anchor
    gap0 = a - anchor_value(a)
    x = T + g
    for _ in range(k):
        drift = 1.0 - (math.log(x / (2 * math.pi)) + 2 * EULER_GAMMA) / zeta_core.omega_weight(x, omega)
        # solve x_new - (gap0 + drift * (x_new - a)) = x
        x = (x + gap0 - drift * a) / (1.0 - drift)
    return T + (x - T) * (1.0 + margin) + 50.0
