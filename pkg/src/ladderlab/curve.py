"""Zeros and extrema of Z on a window, and the arc length of the curve y = Z(t).

Between consecutive zeros gamma' < gamma'' of Z there is (at these heights)
a single critical point t0 where |Z| peaks.  The arc length over [T, T + H]
exceeds the vertical travel 2 * sum |Z(t0)| by theta_hat * H, and since
sqrt(1 + z'^2) <= 1 + |z'| that excess lies in (0, H) whenever the extrema
account for the whole vertical travel.
"""

from __future__ import annotations

import math
from itertools import cycle
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import zeta_core
from .energy import DEFAULT_LIMITS, EnergySpec, Limits, VerificationReport, energy_integral
from .errors import DomainError
from .ladder import LadderTable
from .quadrature import adaptive_gk
from .roots import refine_roots, scan_grid

SCAN_FRACTION = 0.25
SUSPECT_THRESHOLD = 1e-3
ZERO_XTOL = 1e-12
CRITICAL_XTOL = 1e-11
_GAP_SAMPLES = 9

REMAINDER_NOTE = (
    "The asymptotic remainder O(T^(A / ln ln T)) has an unspecified constant A; "
    "it is not bounded here and the pass rule uses only theta_hat in (0, 1).")


def mean_zero_gap(T: float) -> float:
    return 2 * math.pi / math.log(T / (2 * math.pi))


def _check_window(T: float, H: float, name: str) -> None:
    if not (math.isfinite(T) and math.isfinite(H)) or H < 0:
        raise DomainError(f"{name}: need finite T and H >= 0, got T={T}, H={H}")
    if T < zeta_core.T_MIN_SUPPORTED:
        raise DomainError(f"{name}: T={T} below supported range {zeta_core.T_MIN_SUPPORTED}")


def _z(t: float) -> float:
    return float(zeta_core.hardy_z(t))


def _zp(t: float) -> float:
    return float(zeta_core.hardy_z_prime(t))


def find_zeros(T: float, H: float, diagnostics: list[str] | None = None) -> np.ndarray:
    """Zeros of Z on [T, T + H] from sign changes on a grid of a quarter mean gap.

    Grid minima of |Z| without a sign change are examined at the extremum of
    Z in between.  If Z changes sign there the two zeros are recovered and noted;
    if |Z| merely dips below SUSPECT_THRESHOLD the gap is noted as suspect.
    """
    _check_window(T, H, "find_zeros")
    diag = diagnostics if diagnostics is not None else []
    if H == 0:
        return np.empty(0)
    grid = scan_grid(T, T + H, SCAN_FRACTION * mean_zero_gap(T))
    vals = zeta_core.hardy_z(grid)
    zeros = list(refine_roots(zeta_core.hardy_z, grid, vals, xtol=ZERO_XTOL))

    a = np.abs(vals)
    same_sign = (vals[:-2] * vals[1:-1] > 0) & (vals[1:-1] * vals[2:] > 0)
    minima = np.nonzero(same_sign & (a[1:-1] < a[:-2]) & (a[1:-1] < a[2:]))[0] + 1
    for i in minima:
        lo, hi = float(grid[i - 1]), float(grid[i + 1])
        sgn = math.copysign(1.0, vals[i])
        res = minimize_scalar(lambda t: sgn * _z(t), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        tm = float(res.x)
        zm = _z(tm)
        if zm * vals[i] < 0:
            z1 = brentq(zeta_core.hardy_z, lo, tm, xtol=ZERO_XTOL)
            z2 = brentq(zeta_core.hardy_z, tm, hi, xtol=ZERO_XTOL)
            zeros.extend([z1, z2])
            diag.append(f"recovered close zero pair at {z1:.12g}, {z2:.12g}")
        elif abs(zm) < SUSPECT_THRESHOLD:
            diag.append(f"suspected missed zero pair near t={tm:.12g}: |Z| min {abs(zm):.3g} "
                        f"without sign change")
    return np.unique(np.array(zeros, dtype=float))


@dataclass
class CriticalPointSet:
    """Zeros of Z and the extrema of |Z| between them on [T, T + H].

    ``t0s`` holds one critical point per gap between consecutive zeros plus
    any critical point of the two edge segments; ``interlacing_exceptions``
    counts gaps that did not hold exactly one root of Z'.
    """

    T: float
    H: float
    gammas: np.ndarray
    t0s: np.ndarray
    z_at_t0: np.ndarray
    diagnostics: list[str] = field(default_factory=list)
    interlacing_exceptions: int = 0

    @property
    def gaps(self) -> int:
        return max(self.gammas.size - 1, 0)

    def interior(self) -> np.ndarray:
        """Mask of t0s lying strictly between the first and last zero."""
        if self.gammas.size < 2:
            return np.zeros(self.t0s.size, dtype=bool)
        return (self.t0s > self.gammas[0]) & (self.t0s < self.gammas[-1])

    def interlaced(self) -> bool:
        """True when every gap between consecutive zeros holds exactly one t0."""
        t0 = self.t0s[self.interior()]
        if t0.size != self.gaps:
            return False
        return bool(np.all((self.gammas[:-1] < t0) & (t0 < self.gammas[1:])))


def _critical_roots(a: float, b: float) -> list[float]:
    if b <= a:
        return []
    grid = np.linspace(a, b, _GAP_SAMPLES)
    vals = zeta_core.hardy_z_prime(grid)
    return [float(x) for x in refine_roots(zeta_core.hardy_z_prime, grid, vals, xtol=CRITICAL_XTOL)]


def find_critical_points(T: float, H: float, gammas: Sequence[float] | None = None) -> CriticalPointSet:
    _check_window(T, H, "find_critical_points")
    diag: list[str] = []
    g = np.asarray(find_zeros(T, H, diag) if gammas is None else gammas, dtype=float)
    t0s: list[float] = []
    exceptions = 0
    for a, b in zip(g[:-1], g[1:]):
        roots = _critical_roots(float(a), float(b))
        if len(roots) != 1:
            exceptions += 1
            diag.append(f"gap [{a:.12g}, {b:.12g}] holds {len(roots)} roots of Z'")
        if roots:
            t0s.append(max(roots, key=lambda x: abs(_z(x))))

    # edge segments contribute their extrema of |Z| inside the window
    edges = [(T, float(g[0])), (float(g[-1]), T + H)] if g.size else [(T, T + H)]
    for a, b in edges:
        for x in _critical_roots(a, b):
            zx = _z(x)
            # an extremum of Z with Z Z'' > 0 is a minimum of |Z|, not an arch top
            h = 1e-4
            curv = (_zp(x + h) - _zp(x - h)) / (2 * h)
            if zx * curv < 0:
                t0s.append(x)
            else:
                diag.append(f"edge critical point at {x:.12g} is a minimum of |Z|")
    t0 = np.unique(np.array(t0s, dtype=float))
    z0 = zeta_core.hardy_z(t0) if t0.size else np.empty(0)
    return CriticalPointSet(float(T), float(H), g, t0, np.asarray(z0, dtype=float), diag, exceptions)


def arc_length(T: float, H: float, points: Sequence[float] | None = None,
               rel_tol: float = 1e-7) -> float:
    """Length of y = Z(t) over [T, T + H]; ``points`` (zeros, extrema) become panel edges."""
    _check_window(T, H, "arc_length")
    if H == 0:
        return 0.0

    def f(t):
        return np.sqrt(1.0 + np.square(zeta_core.hardy_z_prime(t)))

    res = adaptive_gk(f, T, T + H, abs_tol=rel_tol * H, breakpoints=points,
                      initial_width=0.5 * mean_zero_gap(T))
    return res.value


@dataclass(frozen=True)
class CurveReport:
    T: float
    H: float
    arc_length: float
    extrema_sum: float
    theta_hat: float
    remainder_note: str
    passed: bool
    zero_count: int
    critical_points: int
    interlacing_exceptions: int
    diagnostics: tuple[str, ...] = ()
    reference_mismatches: int | None = None

    def to_report(self) -> VerificationReport:
        """Report with lhs = arc length, rhs = extrema sum and residual = theta_hat."""
        return VerificationReport(
            "curve_length", "(arc_length(T, H) - 2 sum_t0 |Z(t0)|) / H = theta_hat in (0, 1)",
            {"T": self.T, "H": self.H}, self.arc_length, self.extrema_sum, self.theta_hat, 1.0,
            self.passed,
            {"theta_hat": self.theta_hat, "remainder_note": self.remainder_note,
             "zero_count": self.zero_count, "critical_points": self.critical_points,
             "interlacing_exceptions": self.interlacing_exceptions,
             "reference_mismatches": self.reference_mismatches,
             "diagnostics": list(self.diagnostics)},
        )


def _nearest_distance(points: np.ndarray, targets: np.ndarray) -> np.ndarray:
    if points.size == 0:
        return np.full(targets.size, np.inf)
    idx = np.searchsorted(points, targets)
    left = points[np.clip(idx - 1, 0, points.size - 1)]
    right = points[np.clip(idx, 0, points.size - 1)]
    return np.minimum(np.abs(targets - left), np.abs(targets - right))


def compare_to_reference(found: Sequence[float], reference: Sequence[float], tol: float = 1e-6) -> int:
    """Reference zeros with no found zero within tol, plus found zeros with no reference match."""
    found = np.sort(np.asarray(found, dtype=float))
    reference = np.sort(np.asarray(reference, dtype=float))
    missing = int(np.sum(_nearest_distance(found, reference) > tol))
    extra = int(np.sum(_nearest_distance(reference, found) > tol))
    return missing + extra


def curve_length_check(T: float, H: float, reference_zeros: Sequence[float] | None = None,
                       cps: CriticalPointSet | None = None) -> CurveReport:
    """theta_hat = (arc length - 2 sum |Z(t0)|) / H; passes iff it lies in (0, 1)."""
    cps = cps or find_critical_points(T, H)
    extrema = float(2.0 * np.abs(cps.z_at_t0).sum())
    points = np.concatenate([cps.gammas, cps.t0s])
    arc = arc_length(T, H, points)
    theta_hat = (arc - extrema) / H if H > 0 else float("nan")
    mismatches = None
    if reference_zeros is not None:
        ref = np.asarray(reference_zeros, dtype=float)
        ref = ref[(ref >= T) & (ref <= T + H)]
        mismatches = compare_to_reference(cps.gammas, ref)
    return CurveReport(float(T), float(H), arc, extrema, theta_hat, REMAINDER_NOTE,
                       bool(0.0 < theta_hat < 1.0), int(cps.gammas.size), int(cps.t0s.size),
                       cps.interlacing_exceptions, tuple(cps.diagnostics), mismatches)


def corollary3_check(table: LadderTable, T: float, H: float, k: int = 1, k_assign: Sequence[int] | None = None, *,
                     limits: Limits | None = None, sum_limits: Limits | None = None,
                     tolerance: float = 1e-6,
                     cps: CriticalPointSet | None = None) -> VerificationReport:
    """Arc length against the energies of the arch heights g(t0) = 2 |Z(t0)|.

    mid = energy(T, sum g(t0), k) and rhs = sum energy(T, g(t0), k(t0)) must
    agree within ``tolerance``; the report has lhs = arc length, rhs = the sum
    form, and residual = (lhs - rhs) / H, which must lie in (0, 1).
    ``k_assign`` is cycled over the critical points (default: all k).  Each
    g(t0) is guarded by ``limits``; the aggregate shift by ``sum_limits``,
    which defaults to the widest admissible guard fraction 0.5.
    """
    limits = limits or DEFAULT_LIMITS
    sum_limits = sum_limits or Limits(0.5, limits.k0)
    cps = cps or find_critical_points(T, H)
    gs = 2.0 * np.abs(cps.z_at_t0)
    ks = [k] * gs.size if k_assign is None else [int(x) for _, x in zip(gs, cycle(k_assign))]
    for g in gs:
        limits.check_g(T, float(g))
    total = math.fsum(gs)
    sum_limits.check_g(T, total)
    arc = arc_length(T, H, np.concatenate([cps.gammas, cps.t0s]))
    mid = energy_integral(table, EnergySpec(T, total, k, table.omega, sum_limits)).value
    terms = [energy_integral(table, EnergySpec(T, float(g), kk, table.omega, limits)).value
             for g, kk in zip(gs, ks)]
    rhs = math.fsum(terms)
    mid_residual = abs(mid - rhs) / max(abs(rhs), 1.0)
    term_residual = float(max((abs(e - g) / max(g, 1.0) for e, g in zip(terms, gs)), default=0.0))
    theta_hat = (arc - rhs) / H
    return VerificationReport(
        "corollary3", "arc_length(T, H) - sum_t0 energy(T, 2|Z(t0)|, k(t0)) in (0, H)",
        {"T": T, "H": H, "k": k, "k_assign": list(k_assign) if k_assign is not None else None,
         "omega": table.omega.value},
        arc, rhs, theta_hat, 1.0, bool(0.0 < theta_hat < 1.0 and mid_residual <= tolerance),
        {"mid": mid, "extrema_sum": total, "theta_hat": theta_hat, "mid_residual": mid_residual,
         "max_term_residual": term_residual, "critical_points": int(gs.size),
         "remainder_note": REMAINDER_NOTE, "diagnostics": list(cps.diagnostics)},
    )
