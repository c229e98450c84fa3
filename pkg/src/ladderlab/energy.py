"""Reverse iterated integrals (energies) and the identities built on them.

The energy of an upper shift g at depth k is

    E(T, g, k) = integral over [T^k, (T+g)^k] of prod_{r<k} Z~^2(phi_1^r(t)) dt

where T^k denotes the k-fold preimage of T under phi_1.  Substituting
u = phi_1^k(t) shows E = g exactly; the checks below compute E by quadrature
and compare against that value, against sums and products of other energies,
and against the change-of-variables oracle phi_1^k(hi) - phi_1^k(lo).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from . import zeta_core
from .errors import DomainError, GuardViolation
from .ladder import (IteratedInterval, LadderTable, component_set, interval_reverse,
                     phi1_offset, reverse_iterate)
from .quadrature import adaptive_gk
from .roots import refine_roots, scan_grid
from .zeta_core import OmegaKind

DEFAULT_GUARD_FRACTION = 0.1
DEFAULT_K0 = 10
EXACT_TOLERANCE = 1e-6
TREND_TOLERANCE = 0.5
# relative accuracy of |zeta|^2 energies inside the mean-value ratios
MEAN_VALUE_REL_TOL = 1e-6


@dataclass(frozen=True)
class Limits:
    """Admissibility limits: g <= guard_fraction * T / ln T and k <= k0."""

    guard_fraction: float = DEFAULT_GUARD_FRACTION
    k0: int = DEFAULT_K0

    def __post_init__(self):
        if not 0 < self.guard_fraction <= 0.5:
            raise ValueError(f"guard_fraction={self.guard_fraction} must lie in (0, 0.5]")
        if self.k0 < 1:
            raise ValueError(f"k0={self.k0} must be >= 1")

    def g_max(self, T: float) -> float:
        return self.guard_fraction * T / math.log(T)

    def check_g(self, T: float, g: float) -> None:
        if not math.isfinite(g) or g < 0:
            raise GuardViolation(f"g={g} must be finite and nonnegative")
        if g > self.g_max(T):
            raise GuardViolation(
                f"g={g:.6g} exceeds guard {self.guard_fraction}*T/ln T = {self.g_max(T):.6g} at T={T:.6g}")

    def check_k(self, k: int) -> None:
        if int(k) != k or not 1 <= k <= self.k0:
            raise ValueError(f"k={k} must be an integer in 1..k0={self.k0}")


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class EnergySpec:
    T: float
    g: float
    k: int
    omega: OmegaKind = OmegaKind.LOG_T
    limits: Limits = DEFAULT_LIMITS

    def __post_init__(self):
        object.__setattr__(self, "omega", OmegaKind.parse(self.omega))
        if self.T < zeta_core.T_MIN_SUPPORTED:
            raise DomainError(f"T={self.T} below supported range")
        self.limits.check_k(self.k)
        self.limits.check_g(self.T, self.g)


@dataclass(frozen=True)
class EnergyResult:
    value: float
    error_estimate: float
    interval: IteratedInterval
    z_evals: int


@dataclass
class VerificationReport:
    """Residual record for one identity check.

    ``residual`` is |lhs - rhs| / max(|rhs|, 1) and ``passed`` is
    ``residual <= tolerance``.  ``extras`` carries diagnostics that are not
    part of the serialized record.
    """

    check_id: str
    paper_eq: str
    inputs: dict[str, Any]
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    passed: bool
    extras: dict[str, Any] = field(default_factory=dict)

    RECORD_FIELDS = ("check_id", "paper_eq", "inputs", "lhs", "rhs", "residual", "tolerance", "pass")

    @classmethod
    def build(cls, check_id: str, paper_eq: str, inputs: dict, lhs: float, rhs: float,
              tolerance: float, extras: dict | None = None) -> "VerificationReport":
        residual = abs(lhs - rhs) / max(abs(rhs), 1.0)
        return cls(check_id, paper_eq, dict(inputs), float(lhs), float(rhs), float(residual),
                   float(tolerance), bool(residual <= tolerance), dict(extras or {}))

    def to_record(self) -> dict[str, Any]:
        return {
            "check_id": self.check_id,
            "paper_eq": self.paper_eq,
            "inputs": self.inputs,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


# --------------------------------------------------------------------------
# integrals
# --------------------------------------------------------------------------

def _check_table(table: LadderTable, omega: OmegaKind) -> None:
    if table.omega is not omega:
        raise ValueError(f"table built with omega={table.omega.value}, spec asks {omega.value}")


def _zero_breakpoints(table: LadderTable, T: float, g: float, k: int) -> np.ndarray:
    """Points of [T^k, (T+g)^k] where some factor Z(phi_1^r(t)) vanishes."""
    comps = component_set(table, T, g, k).components
    pts = []
    for r in range(k):
        level = comps[k - r]
        a, b = level.lo, level.hi
        # same scan density as the zero finder: a quarter of the mean gap
        step = 0.25 * 2 * math.pi / math.log(a / (2 * math.pi))
        grid = scan_grid(a, b, step)
        zeros = refine_roots(zeta_core.hardy_z, grid, zeta_core.hardy_z(grid))
        for gamma in zeros:
            pts.append(reverse_iterate(table, gamma, r) if r else gamma)
    return np.array(sorted(pts))


def _iterated_integrand(table: LadderTable, origin: float, k: int, weight: Callable | None,
                        counter: list, factor: Callable[[np.ndarray], np.ndarray]) -> Callable:
    """Integrand in the offset s = t - origin.

    Each iterate is carried as (table value, offset) so that intervals far
    shorter than ulp(t) * phi_1^k' keep their resolution.  ``weight``
    receives phi_1^k(t) as such a pair.
    """
    dense = table.dense_order

    def integrand(s: np.ndarray) -> np.ndarray:
        base, off = np.full(s.size, origin), s
        prod = factor(base, off)
        for _ in range(1, k):
            base, off = phi1_offset(table, base, off)
            prod = prod * factor(base, off)
        counter[0] += s.size * (k + (k - 1) * dense)
        if weight is not None:
            if k:
                base, off = phi1_offset(table, base, off)
                counter[0] += s.size * dense
            prod = prod * weight(base, off)
        return prod

    return integrand


def _integrate(table: LadderTable, interval: IteratedInterval, factor, abs_tol: float,
               weight=None, split_at_zeros: bool = True):
    counter = [0]
    f = _iterated_integrand(table, interval.lo, interval.k, weight, counter, factor)
    bps = None
    if split_at_zeros:
        bps = _zero_breakpoints(table, interval.T, interval.g, interval.k) - interval.lo
    res = adaptive_gk(f, 0.0, interval.hi - interval.lo, abs_tol=abs_tol, breakpoints=bps,
                      initial_width=0.5 / interval.k,
                      min_width=1e-14 * interval.length)
    return res, counter[0]


def energy_integral(table: LadderTable, spec: EnergySpec, *, split_at_zeros: bool = True) -> EnergyResult:
    """Quadrature of prod_{r<k} Z~^2(phi_1^r(t)) over the reverse iterated interval.

    Absolute error target is max(1e-8 g, 1e-10).
    """
    _check_table(table, spec.omega)
    interval = interval_reverse(table, spec.T, spec.g, spec.k)
    if spec.g == 0 or interval.hi == interval.lo:
        return EnergyResult(0.0, 0.0, interval, 0)
    tol = 0.25 * max(1e-8 * spec.g, 1e-10)

    def factor(base, off):
        return zeta_core.z_tilde_sq(base, table.omega, off)

    res, evals = _integrate(table, interval, factor, tol, split_at_zeros=split_at_zeros)
    return EnergyResult(max(res.value, 0.0), res.error, interval, evals)


def change_of_variables_value(table: LadderTable, interval: IteratedInterval) -> float:
    """phi_1^k(hi) - phi_1^k(lo): the exact value of the energy on this interval.

    Both endpoints are iterated as (table value, offset) pairs, the same
    representation the energy integrand uses.
    """
    base = np.full(2, interval.lo)
    off = np.array([0.0, interval.hi - interval.lo])
    for _ in range(interval.k):
        base, off = phi1_offset(table, base, off)
    return float((base[1] - base[0]) + (off[1] - off[0]))


def zeta_energy(table: LadderTable, T: float, g: float, k: int, rel_tol: float = 1e-9) -> float:
    """Same interval as the energy, integrand prod_{r<k} |zeta(1/2 + i phi_1^r(t))|^2.

    ``rel_tol`` is relative to g ln^k T, the size of the integral.  Deep
    iterations (k >= 15 at T = 10^4) make the integrand step slightly where an
    iterate crosses a table node; a tight tolerance then forces bisection down
    to the rounding floor.
    """
    interval = interval_reverse(table, T, g, k)
    if interval.hi == interval.lo:
        return 0.0

    def factor(base, off):
        return np.square(zeta_core.hardy_z(base, off))

    scale = math.log(T) ** k
    res, _ = _integrate(table, interval, factor, rel_tol * max(g, 1e-3) * scale)
    return res.value


# --------------------------------------------------------------------------
# identity checks
# --------------------------------------------------------------------------

def _energy(table, T, g, k, limits) -> EnergyResult:
    return energy_integral(table, EnergySpec(T, g, k, table.omega, limits))


def unit_operator_check(table: LadderTable, spec: EnergySpec,
                        tolerance: float = EXACT_TOLERANCE) -> VerificationReport:
    """H g = g: the energy operator acting through the upper limit is the identity."""
    res = energy_integral(table, spec)
    cycle = change_of_variables_value(table, res.interval) if spec.g else 0.0
    return VerificationReport.build(
        "unit_operator", "energy(T, g, k) = g",
        {"T": spec.T, "g": spec.g, "k": spec.k, "omega": spec.omega.value},
        res.value, spec.g, tolerance,
        {"interval": (res.interval.lo, res.interval.hi), "error_estimate": res.error_estimate,
         "closed_cycle_value": cycle, "z_evals": res.z_evals},
    )


def _parts(parts: Sequence[tuple[float, int]]) -> list[tuple[float, int]]:
    out = [(float(g), int(k)) for g, k in parts]
    if not out:
        raise ValueError("at least one part is required")
    return out


def additivity_check(table: LadderTable, T: float, parts: Sequence[tuple[float, int]], k: int, *,
                     limits: Limits = DEFAULT_LIMITS, tolerance: float = EXACT_TOLERANCE,
                     g_total: float | None = None, tail_bound: float | None = None) -> VerificationReport:
    """energy(T, sum g_l, k) against sum_l energy(T, g_l, k_l).

    An infinite series is passed as a finite head plus ``g_total`` and a
    caller-declared ``tail_bound`` on |sum(head) - g_total|.
    """
    parts = _parts(parts)
    total = math.fsum(g for g, _ in parts)
    if g_total is not None:
        bound = 0.0 if tail_bound is None else tail_bound
        if abs(total - g_total) > bound:
            raise ValueError(f"truncated sum {total} differs from g_total {g_total} "
                             f"by more than tail bound {bound}")
    for g, kl in parts:
        limits.check_k(kl)
        if g < 0:
            raise GuardViolation(f"part g={g} is negative")
    limits.check_g(T, total)
    lhs = _energy(table, T, total, k, limits).value
    terms = [_energy(table, T, g, kl, limits).value for g, kl in parts]
    return VerificationReport.build(
        "additivity", "energy(T, sum g_l, k) = sum_l energy(T, g_l, k_l)",
        {"T": T, "k": k, "parts": [list(p) for p in parts], "omega": table.omega.value},
        lhs, math.fsum(terms), tolerance, {"terms": terms, "g_total": total},
    )


def multiplicativity_check(table: LadderTable, T: float, factors: Sequence[tuple[float, int]], k: int, *,
                           limits: Limits = DEFAULT_LIMITS,
                           tolerance: float = EXACT_TOLERANCE) -> VerificationReport:
    """energy(T, prod g_l, k) against prod_l energy(T, g_l, k_l)."""
    factors = _parts(factors)
    for g, kl in factors:
        if not g > 0:
            raise GuardViolation(f"factor g={g} must be positive")
        limits.check_k(kl)
        limits.check_g(T, g)
    product = math.prod(g for g, _ in factors)
    limits.check_g(T, product)
    lhs = _energy(table, T, product, k, limits).value
    terms = [_energy(table, T, g, kl, limits).value for g, kl in factors]
    return VerificationReport.build(
        "multiplicativity", "energy(T, prod g_l, k) = prod_l energy(T, g_l, k_l)",
        {"T": T, "k": k, "factors": [list(f) for f in factors], "omega": table.omega.value},
        lhs, math.prod(terms), tolerance, {"terms": terms, "g_product": product},
    )


def fourier_function(index: int, l: float) -> Callable[[np.ndarray], np.ndarray]:
    """Index 0 is the constant 1; 2j-1 is cos(j pi t / l); 2j is sin(j pi t / l)."""
    if index < 0:
        raise ValueError("Fourier index must be nonnegative")
    if index == 0:
        return lambda t: np.ones_like(t)
    j = (index + 1) // 2
    if index % 2:
        return lambda t: np.cos(j * math.pi * t / l)
    return lambda t: np.sin(j * math.pi * t / l)


def parse_fourier_index(name: str | int) -> int:
    """Accept 0/'const', 'cosN' or 'sinN' (N >= 1), or a raw integer index."""
    if isinstance(name, int):
        return name
    s = str(name).strip().lower()
    if s in ("const", "1", "one"):
        return 0
    if s.startswith("cos"):
        return 2 * int(s[3:]) - 1
    if s.startswith("sin"):
        return 2 * int(s[3:])
    return int(s)


def orthogonality_check(table: LadderTable, T: float, l: float, m: int | str, n: int | str, k: int, *,
                        limits: Limits = DEFAULT_LIMITS,
                        tolerance: float = EXACT_TOLERANCE) -> VerificationReport:
    """Orthogonality of the Fourier system on [0, 2l] transferred to [T^k, (T+2l)^k].

    The diagonal value is 2l for the constant function and l otherwise; for
    m != n the tolerance becomes absolute, tolerance * l.
    """
    m_idx, n_idx = parse_fourier_index(m), parse_fourier_index(n)
    spec = EnergySpec(T, 2 * l, k, table.omega, limits)
    interval = interval_reverse(table, T, spec.g, k)
    fm, fn = fourier_function(m_idx, l), fourier_function(n_idx, l)

    def weight(base, off):
        s = (base - T) + off
        return fm(s) * fn(s)

    def factor(base, off):
        return zeta_core.z_tilde_sq(base, table.omega, off)

    res, evals = _integrate(table, interval, factor, 0.25e-8 * l, weight=weight)
    if m_idx != n_idx:
        rhs, tol = 0.0, tolerance * l
    else:
        rhs, tol = (2 * l if m_idx == 0 else l), tolerance
    return VerificationReport.build(
        "orthogonality", "int f_m(phi^k - T) f_n(phi^k - T) prod Z~^2 = delta_mn A_n",
        {"T": T, "l": l, "m": m_idx, "n": n_idx, "k": k, "omega": table.omega.value},
        res.value, rhs, tol, {"error_estimate": res.error, "z_evals": evals},
    )


def mean_value_error_scale(T: float, k: int) -> float:
    return k * k / math.log(T)


def _mean_value_report(check_id, paper_eq, inputs, lhs, rhs, T, k_max, tolerance):
    scale = mean_value_error_scale(T, k_max)
    tol = tolerance if tolerance is not None else max(TREND_TOLERANCE, scale)
    rep = VerificationReport.build(check_id, paper_eq, inputs, lhs, rhs, tol)
    rep.residual = abs(lhs / rhs - 1.0)
    rep.passed = rep.residual <= rep.tolerance
    rep.extras.update({"ratio": lhs / rhs, "error_scale": scale, "non_convergent": scale >= 1.0})
    return rep


def example1_ratio(table: LadderTable, T: float, g1: float, g2: float, k: int, *,
                   k1: int = 1, k2: int | None = None, limits: Limits = DEFAULT_LIMITS,
                   tolerance: float | None = None) -> VerificationReport:
    """Additive mean-value form with |zeta|^2 integrands.

    Compares the k-fold |zeta|^2 energy of g1 + g2 with
    ln^(k - k1) T * (k1-fold energy of g1) + ln^(k - k2) T * (k2-fold energy of g2).
    ``k2`` defaults to min(k, 7), which reproduces the (17; 1, 7) configuration
    at k = 17.  The residual is |ratio - 1|; the relation is asymptotic with
    error of order k^2 / ln T, flagged non-convergent once that reaches 1.
    """
    k2 = min(k, 7) if k2 is None else k2
    for kk in (k, k1, k2):
        limits.check_k(kk)
    for g in (g1, g2, g1 + g2):
        limits.check_g(T, g)
    lnT = math.log(T)
    rt = MEAN_VALUE_REL_TOL
    lhs = zeta_energy(table, T, g1 + g2, k, rt)
    rhs = (lnT ** (k - k1) * zeta_energy(table, T, g1, k1, rt)
           + lnT ** (k - k2) * zeta_energy(table, T, g2, k2, rt))
    return _mean_value_report(
        "example1_mean_value", "int_k^(g1+g2) prod|zeta|^2 ~ ln^(k-k1)T I_k1(g1) + ln^(k-k2)T I_k2(g2)",
        {"T": T, "g1": g1, "g2": g2, "k": k, "k1": k1, "k2": k2}, lhs, rhs, T, max(k, k1, k2), tolerance)


def example2_ratio(table: LadderTable, T: float, g1: float, g2: float, *, k1: int = 1, k2: int = 1,
                   limits: Limits = DEFAULT_LIMITS, tolerance: float | None = None) -> VerificationReport:
    """Multiplicative mean-value form.

    Compares the single |zeta|^2 integral of g1 * g2 with
    ln^-(k1 + k2 - 1) T * (k1-fold of g1) * (k2-fold of g2); (k1, k2) = (17, 7)
    gives the exponent 23.
    """
    for kk in (k1, k2):
        limits.check_k(kk)
    for g in (g1, g2, g1 * g2):
        limits.check_g(T, g)
    if not (g1 > 0 and g2 > 0):
        raise GuardViolation("example2 factors must be positive")
    lnT = math.log(T)
    exponent = k1 + k2 - 1
    rt = MEAN_VALUE_REL_TOL
    lhs = zeta_energy(table, T, g1 * g2, 1, rt)
    rhs = lnT ** (-exponent) * zeta_energy(table, T, g1, k1, rt) * zeta_energy(table, T, g2, k2, rt)
    rep = _mean_value_report(
        "example2_mean_value", "int_1^(g1 g2) |zeta|^2 ~ ln^-(k1+k2-1)T I_k1(g1) I_k2(g2)",
        {"T": T, "g1": g1, "g2": g2, "k1": k1, "k2": k2}, lhs, rhs, T, max(k1, k2), tolerance)
    rep.extras["log_exponent"] = exponent
    return rep


def factorize(n: int) -> list[tuple[int, int]]:
    """Trial division: [(p, alpha), ...] with p increasing."""
    if n < 2:
        raise ValueError(f"n={n}: factorization needs n >= 2")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            a = 0
            while n % p == 0:
                n //= p
                a += 1
            out.append((p, a))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def canonical_factorization_check(table: LadderTable, T: float, n: int, k: int,
                                  k_assign: Sequence[int] | None = None, *,
                                  limits: Limits = DEFAULT_LIMITS, tolerance: float = EXACT_TOLERANCE,
                                  with_mean_value: bool = True) -> VerificationReport:
    """energy(T, n, k) against prod_l energy(T, p_l, k(l))^alpha_l for n = prod p_l^alpha_l.

    ``k_assign`` gives one depth per distinct prime (default all 1).  The
    |zeta|^2 form with its ln T weight is reported in ``extras`` as a ratio.
    """
    fac = factorize(int(n))
    ks = [1] * len(fac) if k_assign is None else [int(x) for x in k_assign]
    if len(ks) != len(fac):
        raise ValueError(f"k_assign has {len(ks)} entries for {len(fac)} distinct primes of {n}")
    limits.check_k(k)
    for (p, _), kl in zip(fac, ks):
        limits.check_k(kl)
        limits.check_g(T, p)
    limits.check_g(T, n)
    lhs = _energy(table, T, float(n), k, limits).value
    terms = [_energy(table, T, float(p), kl, limits).value for (p, _), kl in zip(fac, ks)]
    rhs = math.prod(e ** a for e, (_, a) in zip(terms, fac))
    extras: dict[str, Any] = {"factorization": fac, "terms": terms}
    if with_mean_value:
        exponent = sum(a * kl for (_, a), kl in zip(fac, ks)) - k
        rt = MEAN_VALUE_REL_TOL
        lz = math.log(T) ** exponent * zeta_energy(table, T, float(n), k, rt)
        rz = math.prod(zeta_energy(table, T, float(p), kl, rt) ** a for (p, a), kl in zip(fac, ks))
        extras.update({"mean_value_ratio": lz / rz, "log_exponent": exponent,
                       "mean_value_error_scale": mean_value_error_scale(T, max([k, *ks]))})
    return VerificationReport.build(
        "canonical_factorization", "energy(T, n, k) = prod_l energy(T, p_l, k(l))^alpha_l",
        {"T": T, "n": int(n), "k": k, "k_assign": ks, "omega": table.omega.value},
        lhs, rhs, tolerance, extras,
    )


def figure_measures(table: LadderTable, T: float, parts: Sequence[tuple[float, int]], k: int, *,
                    mode: str = "sum", limits: Limits = DEFAULT_LIMITS) -> tuple[float, list[float]]:
    """Areas under the energy integrands: the whole figure and each part.

    In ``"sum"`` mode the whole figure spans the shift sum g_l, in ``"product"``
    mode the product.  Each area is the corresponding energy.
    """
    parts = _parts(parts)
    if mode == "sum":
        whole = math.fsum(g for g, _ in parts)
    elif mode == "product":
        whole = math.prod(g for g, _ in parts)
    else:
        raise ValueError(f"mode must be 'sum' or 'product', got {mode!r}")
    m_whole = _energy(table, T, whole, k, limits).value
    return m_whole, [_energy(table, T, g, kl, limits).value for g, kl in parts]


def figures_disjoint(table: LadderTable, T: float, parts: Sequence[tuple[float, int]]) -> bool:
    """Bases of part figures are pairwise disjoint across parts with distinct depths."""
    parts = _parts(parts)
    spans = {}
    for g, kl in parts:
        iv = interval_reverse(table, T, g, kl)
        prev = spans.get(kl)
        spans[kl] = iv if prev is None or iv.hi > prev.hi else prev
    ivs = sorted(spans.values(), key=lambda iv: iv.lo)
    return all(a.hi < b.lo for a, b in zip(ivs, ivs[1:]))
