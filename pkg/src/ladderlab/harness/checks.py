"""One entry point per check kind, shared by the CLI and the sweep runner.

A check is a mapping with a ``check`` kind and its parameters, named as the
CLI flags are (``T``, ``g``, ``k``, ``parts``, ...).
"""

from __future__ import annotations

import math
from typing import Any, Callable, Mapping

from .. import curve, energy
from ..energy import EnergySpec, VerificationReport, factorize
from .config import ConfigError, RunConfig
from .io import load_zero_table
from .tables import TableProvider

# CLI kind -> check_id used in reports
CHECK_IDS = {
    "unit": "unit_operator",
    "additivity": "additivity",
    "multiplicativity": "multiplicativity",
    "orthogonality": "orthogonality",
    "factorization": "canonical_factorization",
    "example1": "example1_mean_value",
    "example2": "example2_mean_value",
    "curve": "curve_length",
    "corollary3": "corollary3",
}
KINDS = tuple(CHECK_IDS)


def parse_pairs(value: Any, name: str) -> list[tuple[float, int]]:
    """'5:2,7:4' or [[5, 2], [7, 4]] -> [(5.0, 2), (7.0, 4)]."""
    if isinstance(value, str):
        items = [p for p in value.replace(" ", "").split(",") if p]
        pairs = []
        for item in items:
            g, sep, k = item.partition(":")
            if not sep:
                raise ConfigError(f"--{name}: item {item!r} is not of the form g:k")
            pairs.append((g, k))
    elif isinstance(value, (list, tuple)):
        pairs = list(value)
    else:
        raise ConfigError(f"--{name}: expected 'g:k,...' or a list of [g, k] pairs")
    out = []
    for pair in pairs:
        try:
            g, k = pair
            out.append((float(g), _as_int(k, name)))
        except (TypeError, ValueError):
            raise ConfigError(f"--{name}: cannot read {pair!r} as a (g, k) pair") from None
    if not out:
        raise ConfigError(f"--{name}: at least one g:k pair is required")
    return out


def parse_int_list(value: Any, name: str) -> list[int] | None:
    if value is None:
        return None
    if isinstance(value, str):
        value = [v for v in value.replace(" ", "").split(",") if v]
    try:
        return [_as_int(v, name) for v in value]
    except (TypeError, ValueError):
        raise ConfigError(f"--{name}: expected a comma-separated list of integers") from None


def _as_int(value: Any, name: str) -> int:
    x = float(value)
    if not x.is_integer():
        raise ConfigError(f"--{name}: {value!r} is not an integer")
    return int(x)


def _need(params: Mapping[str, Any], name: str, kind: type = float):
    if params.get(name) is None:
        raise ConfigError(f"check {params.get('check')!r} requires --{name}")
    try:
        return _as_int(params[name], name) if kind is int else kind(params[name])
    except (TypeError, ValueError):
        raise ConfigError(f"--{name}: invalid value {params[name]!r}") from None


# Each runner returns (report, summary g, summary k).

def _unit(cfg: RunConfig, tables: TableProvider, p):
    T, g, k = _need(p, "T"), _need(p, "g"), _need(p, "k", int)
    spec = EnergySpec(T, g, k, cfg.omega, cfg.limits)
    table = tables.for_requirements(T, [(g, k)])
    return energy.unit_operator_check(table, spec, cfg.tolerance("unit_operator")), g, k


def _additivity(cfg, tables, p):
    T, k = _need(p, "T"), _need(p, "k", int)
    parts = parse_pairs(_need(p, "parts", lambda x: x), "parts")
    total = math.fsum(g for g, _ in parts)
    cfg.limits.check_g(T, total)
    table = tables.for_requirements(T, [(total, k), *parts])
    rep = energy.additivity_check(table, T, parts, k, limits=cfg.limits,
                                  tolerance=cfg.tolerance("additivity"),
                                  g_total=p.get("g_total"), tail_bound=p.get("tail_bound"))
    return rep, total, k


def _multiplicativity(cfg, tables, p):
    T, k = _need(p, "T"), _need(p, "k", int)
    factors = parse_pairs(_need(p, "factors", lambda x: x), "factors")
    product = math.prod(g for g, _ in factors)
    cfg.limits.check_g(T, product)
    table = tables.for_requirements(T, [(product, k), *factors])
    rep = energy.multiplicativity_check(table, T, factors, k, limits=cfg.limits,
                                        tolerance=cfg.tolerance("multiplicativity"))
    return rep, product, k


def _orthogonality(cfg, tables, p):
    T, l, k = _need(p, "T"), _need(p, "l"), _need(p, "k", int)
    m, n = _need(p, "m", str), _need(p, "n", str)
    try:
        mi, ni = energy.parse_fourier_index(m), energy.parse_fourier_index(n)
    except ValueError:
        raise ConfigError(f"--m/--n: expected const, cosN, sinN or an index; got {m!r}, {n!r}") from None
    EnergySpec(T, 2 * l, k, cfg.omega, cfg.limits)
    table = tables.for_requirements(T, [(2 * l, k)])
    rep = energy.orthogonality_check(table, T, l, mi, ni, k, limits=cfg.limits,
                                     tolerance=cfg.tolerance("orthogonality"))
    return rep, 2 * l, k


def _factorization(cfg, tables, p):
    T, n, k = _need(p, "T"), _need(p, "n", int), _need(p, "k", int)
    ks = parse_int_list(p.get("k_assign"), "k-assign")
    if n < 2:
        raise ConfigError(f"--n: n={n} must be >= 2")
    cfg.limits.check_g(T, n)
    primes = factorize(n)
    kl = ks or [1] * len(primes)
    table = tables.for_requirements(T, [(float(n), k)] + [(float(q), kk) for (q, _), kk in zip(primes, kl)])
    rep = energy.canonical_factorization_check(table, T, n, k, ks, limits=cfg.limits,
                                               tolerance=cfg.tolerance("canonical_factorization"))
    return rep, float(n), k


def _example1(cfg, tables, p):
    T, g1, g2, k = _need(p, "T"), _need(p, "g1"), _need(p, "g2"), _need(p, "k", int)
    k1 = _as_int(p.get("k1") or 1, "k1")
    k2 = _as_int(p["k2"], "k2") if p.get("k2") is not None else min(k, 7)
    cfg.limits.check_g(T, g1 + g2)
    table = tables.for_requirements(T, [(g1 + g2, k), (g1, k1), (g2, k2)])
    rep = energy.example1_ratio(table, T, g1, g2, k, k1=k1, k2=k2, limits=cfg.limits,
                                tolerance=p.get("tolerance"))
    return rep, g1 + g2, k


def _example2(cfg, tables, p):
    T, g1, g2 = _need(p, "T"), _need(p, "g1"), _need(p, "g2")
    k1 = _as_int(p.get("k1") or 1, "k1")
    k2 = _as_int(p.get("k2") or 1, "k2")
    cfg.limits.check_g(T, g1 * g2)
    table = tables.for_requirements(T, [(g1 * g2, 1), (g1, k1), (g2, k2)])
    rep = energy.example2_ratio(table, T, g1, g2, k1=k1, k2=k2, limits=cfg.limits,
                                tolerance=p.get("tolerance"))
    return rep, g1 * g2, max(k1, k2)


def _curve(cfg, tables, p):
    T, H = _need(p, "T"), _need(p, "H")
    ref = None
    if p.get("zeros"):
        ref = load_zero_table(p["zeros"]).gammas
    return curve.curve_length_check(T, H, ref).to_report(), None, None


def _corollary3(cfg, tables, p):
    T, H, k = _need(p, "T"), _need(p, "H"), _need(p, "k", int)
    ks = parse_int_list(p.get("k_assign"), "k-assign")
    limits = cfg.limits
    for kk in [k, *(ks or [])]:
        limits.check_k(kk)
    cps = curve.find_critical_points(T, H)
    gs = [2.0 * abs(z) for z in cps.z_at_t0]
    total = math.fsum(gs)
    kmax = max([k, *(ks or [])])
    table = tables.for_requirements(T, [(total, kmax)] + [(max(gs, default=0.0), kmax)])
    rep = curve.corollary3_check(table, T, H, k, ks, limits=limits,
                                 tolerance=cfg.tolerance("corollary3"), cps=cps)
    return rep, None, k


RUNNERS: dict[str, Callable] = {
    "unit": _unit,
    "additivity": _additivity,
    "multiplicativity": _multiplicativity,
    "orthogonality": _orthogonality,
    "factorization": _factorization,
    "example1": _example1,
    "example2": _example2,
    "curve": _curve,
    "corollary3": _corollary3,
}


def run_check(params: Mapping[str, Any], config: RunConfig,
              tables: TableProvider) -> tuple[VerificationReport, dict[str, Any]]:
    """Run one check; returns the report and its summary row."""
    kind = params.get("check")
    if kind not in RUNNERS:
        raise ConfigError(f"unknown check kind {kind!r}; expected one of {list(KINDS)}")
    report, g, k = RUNNERS[kind](config, tables, params)
    row = {
        "check_id": report.check_id, "paper_eq": report.paper_eq,
        "T": float(params["T"]), "g": g, "k": k,
        "lhs": report.lhs, "rhs": report.rhs, "residual": report.residual, "pass": report.passed,
    }
    return report, row
