"""Hardy's Z-function on the critical line in double precision.

The production path is the Riemann-Siegel formula: main sum plus the
remainder corrections C0..C4, evaluated by a numba kernel.  Correction
polynomials come from the Taylor series of

    Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p)

about p = 1/2, generated once at import with mpmath (the series division
is unstable in double precision).

The phases theta(t) - t ln n are formed in double-double arithmetic and
reduced mod 2 pi before the cosine, so the error does not grow with the
size of theta.  Arguments may be split as t + offset; both parts enter the
phase exactly, which the ladder uses to evaluate at points known only as
a base plus a tiny increment.

Observed accuracy against mpmath (see tests/test_zeta_core.py):

    t       |Z error|
    50      ~3e-7    (truncated remainder series)
    1e5     ~4e-15
    1e6     ~2e-14
    1e7     ~2e-12

Below ``T_MIN_SUPPORTED`` only the slow Euler-Maclaurin path is available.
"""

from __future__ import annotations

import enum
import functools
import math

import mpmath
import numpy as np
from llvmlite import ir
from numba import njit, types
from numba.extending import intrinsic
from numpy.polynomial import polynomial as P
from scipy.special import bernoulli

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061
T_MIN_SUPPORTED = 50.0
THETA_T_MIN = 10.0

_TWO_PI = 2.0 * math.pi
_PSI_DEGREE = 90


class OmegaKind(enum.Enum):
    """Surrogate for the weight omega(t) = (1 + O(ln ln t / ln t)) ln t."""

    LOG_T = "log_t"
    LOG_T_OVER_2PI = "log_t_2pi"
    LOG_T_OVER_2PI_PLUS_2C = "log_t_2pi_2c"

    @classmethod
    def parse(cls, value: "OmegaKind | str") -> "OmegaKind":
        if isinstance(value, cls):
            return value
        for kind in cls:
            if value in (kind.value, kind.name):
                return kind
        raise ValueError(f"unknown omega kind {value!r}; expected one of "
                         f"{[k.value for k in cls]}")


# --------------------------------------------------------------------------
# Riemann-Siegel correction polynomials
# --------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _psi_series(degree: int = _PSI_DEGREE, dps: int = 90) -> tuple[float, ...]:
    # With p = 1/2 + x:  Psi = -cos(2 pi x^2 - 5 pi / 8) / cos(2 pi x)
    with mpmath.workdps(dps):
        pi = mpmath.pi
        a = -5 * pi / 8
        num = [mpmath.mpf(0)] * (degree + 1)
        den = [mpmath.mpf(0)] * (degree + 1)
        for j in range(degree // 2 + 1):
            c = (2 * pi) ** j / mpmath.factorial(j)
            sign = -1 if (j // 2) % 2 else 1
            # cos(u + a) with u = 2 pi x^2, expanded in powers of u
            term = (mpmath.cos(a) if j % 2 == 0 else -mpmath.sin(a)) * c * sign
            num[2 * j] = -term
            den[2 * j] = (-1) ** j * (2 * pi) ** (2 * j) / mpmath.factorial(2 * j)
        q = [mpmath.mpf(0)] * (degree + 1)
        for n in range(degree + 1):
            s = num[n]
            for m in range(1, n + 1):
                s -= den[m] * q[n - m]
            q[n] = s / den[0]
        return tuple(float(v) for v in q)


def _correction_polynomials() -> tuple[np.ndarray, np.ndarray]:
    psi = np.array(_psi_series())
    n = psi.size

    def d(k: int) -> np.ndarray:
        out = np.zeros(n)
        dk = P.polyder(psi, k) if k else psi
        out[: dk.size] = dk
        return out

    pi = math.pi
    c0 = d(0)
    c1 = -d(3) / (96 * pi**2)
    c2 = d(2) / (64 * pi**2) + d(6) / (18432 * pi**4)
    c3 = -d(1) / (64 * pi**2) - d(5) / (3840 * pi**4) - d(9) / (5308416 * pi**6)
    c4 = (d(0) / (128 * pi**2) + 19 * d(4) / (24576 * pi**4)
          + 11 * d(8) / (5898240 * pi**6) + d(12) / (2038431744 * pi**8))
    coef = np.vstack([c0, c1, c2, c3, c4])
    dcoef = np.zeros_like(coef)
    for j in range(coef.shape[0]):
        dj = P.polyder(coef[j])
        dcoef[j, : dj.size] = dj
    return coef, dcoef


_RS_COEF, _RS_DCOEF = _correction_polynomials()


# --------------------------------------------------------------------------
# double-double constants
# --------------------------------------------------------------------------

def _dd(x) -> tuple[float, float]:
    hi = float(x)
    return hi, float(x - mpmath.mpf(hi))


def _dd_constants():
    with mpmath.workdps(40):
        ln2 = _dd(mpmath.log(2))
        ln2pi = _dd(mpmath.log(2 * mpmath.pi))
        two_pi = _dd(2 * mpmath.pi)
        tab = np.array([_dd(mpmath.log(mpmath.mpf(0.5) + mpmath.mpf(j) / _LOG_STEPS))
                        for j in range(_LOG_STEPS // 2 + 1)])
    return np.array([*ln2, *ln2pi, *two_pi]), tab


_LOG_STEPS = 1024
_DD_CONST, _LOG_TABLE = _dd_constants()


@functools.lru_cache(maxsize=8)
def _log_n_dd(nmax: int) -> tuple[np.ndarray, np.ndarray]:
    """ln n for n = 1..nmax as (hi, lo) arrays."""
    with mpmath.workdps(40):
        pairs = np.array([_dd(mpmath.log(n)) for n in range(1, nmax + 1)])
    hi, lo = np.ascontiguousarray(pairs[:, 0]), np.ascontiguousarray(pairs[:, 1])
    hi.setflags(write=False)
    lo.setflags(write=False)
    return hi, lo


# --------------------------------------------------------------------------
# numba kernels
# --------------------------------------------------------------------------

@njit(cache=True, nogil=True, inline="always")
def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@intrinsic
def _fma(typingctx, a, b, c):
    """Fused a * b + c with one rounding (llvm.fma; exact in software if no FMA unit)."""
    sig = types.float64(types.float64, types.float64, types.float64)

    def codegen(context, builder, signature, args):
        d = ir.DoubleType()
        fn = builder.module.declare_intrinsic("llvm.fma", [d], ir.FunctionType(d, [d, d, d]))
        return builder.call(fn, args)

    return sig, codegen


@njit(cache=True, nogil=True, inline="always")
def _two_prod(a, b):
    p = a * b
    return p, _fma(a, b, -p)


@njit(cache=True, nogil=True, inline="always")
def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    e += al + bl
    return _two_sum(s, e)


@njit(cache=True, nogil=True, inline="always")
def _dd_mul_d(ah, al, bh, bl):
    # (ah + al) * (bh + bl) dropping al * bl
    p, e = _two_prod(ah, bh)
    e += ah * bl + al * bh
    return _two_sum(p, e)


@njit(cache=True, nogil=True)
def _dd_log(th, tl, const, table):
    m, e = math.frexp(th)
    j = int((m - 0.5) * 1024.0 + 0.5)
    c = 0.5 + j / 1024.0
    lp = math.log1p((m - c) / c) + tl / th
    hi, lo = _dd_mul_d(float(e), 0.0, const[0], const[1])
    hi, lo = _dd_add(hi, lo, table[j, 0], table[j, 1])
    return _dd_add(hi, lo, lp, 0.0)


@njit(cache=True, nogil=True)
def _theta_dd(th, tl, const, table):
    """theta(th + tl) as a double-double; the asymptotic tail is added in double."""
    lh, ll = _dd_log(th, tl, const, table)
    lh, ll = _dd_add(lh, ll, -const[2], -const[3])
    ph, pl = _dd_mul_d(th, tl, lh, ll)
    ph, pl = _dd_add(ph, pl, -th, -tl)
    ti = 1.0 / th
    t2 = ti * ti
    tail = ti * (1.0 / 48.0 + t2 * (7.0 / 5760.0 + t2 * (31.0 / 80640.0
           + t2 * (127.0 / 430080.0 + t2 * (511.0 / 1216512.0)))))
    return _dd_add(0.5 * ph, 0.5 * pl, tail - math.pi / 8.0, 0.0)


@njit(cache=True, nogil=True)
def _theta_scalar(t):
    ti = 1.0 / t
    t2 = ti * ti
    tail = ti * (1.0 / 48.0 + t2 * (7.0 / 5760.0 + t2 * (31.0 / 80640.0
           + t2 * (127.0 / 430080.0 + t2 * (511.0 / 1216512.0)))))
    return 0.5 * t * math.log(t / (2.0 * math.pi)) - 0.5 * t - math.pi / 8.0 + tail


@njit(cache=True, nogil=True)
def _theta_prime_scalar(t):
    ti = 1.0 / t
    t2 = ti * ti
    tail = t2 * (1.0 / 48.0 + t2 * (21.0 / 5760.0 + t2 * (155.0 / 80640.0
           + t2 * (889.0 / 430080.0 + t2 * (4599.0 / 1216512.0)))))
    return 0.5 * math.log(t / (2.0 * math.pi)) - tail


@njit(cache=True, nogil=True)
def _horner(c, j, x):
    s = 0.0
    for i in range(c.shape[1] - 1, -1, -1):
        s = s * x + c[j, i]
    return s


@njit(cache=True, nogil=True)
def _rs_kernel(ts, tls, coef, dcoef, logn, logn_lo, rsqrtn, const, table,
               want_z, want_zp, out_z, out_zp):
    """Riemann-Siegel Z and Z' at ts + tls.

    The phases theta(t) - t ln n reach ~t ln t, so they are formed and
    reduced mod 2 pi in double-double; in plain double they would carry an
    error of ulp(t ln t), about 1e-10 at t = 1e5.
    """
    two_pi = 2.0 * math.pi
    ncorr = coef.shape[0]
    for i in range(ts.shape[0]):
        th = ts[i]
        tl = tls[i]
        t = th + tl
        tau = math.sqrt(t / two_pi)
        nmax = int(tau)
        ah, al = _theta_dd(th, tl, const, table)
        dth = _theta_prime_scalar(t)
        s = 0.0
        ds = 0.0
        for n in range(nmax):
            ph, pl = _dd_mul_d(th, tl, logn[n], logn_lo[n])
            ph, pl = _dd_add(ah, al, -ph, -pl)
            q = math.floor(ph / two_pi + 0.5)
            qh, ql = _dd_mul_d(q, 0.0, const[4], const[5])
            arg = (ph - qh) + (pl - ql)
            if want_z:
                s += rsqrtn[n] * math.cos(arg)
            if want_zp:
                ds -= rsqrtn[n] * math.sin(arg) * (dth - logn[n])
        x = tau - nmax - 0.5
        itau = 1.0 / tau
        sign = 1.0 if (nmax - 1) % 2 == 0 else -1.0
        # remainder R = sign * tau^(-1/2) * sum_j C_j(p) tau^(-j)
        r = 0.0
        dr_dp = 0.0
        dr_dtau = 0.0
        for j in range(ncorr - 1, -1, -1):
            cj = _horner(coef, j, x)
            r = r * itau + cj
            if want_zp:
                dr_dp = dr_dp * itau + _horner(dcoef, j, x)
                dr_dtau += -j * cj * itau ** (j + 1)
        scale = sign / math.sqrt(tau)
        if want_z:
            out_z[i] = 2.0 * s + scale * r
        if want_zp:
            # d/dt = (dtau/dt) d/dtau, dtau/dt = 1 / (4 pi tau); p moves with tau
            dtau_dt = 1.0 / (2.0 * two_pi * tau)
            d_inner = dr_dp + dr_dtau - 0.5 * itau * r
            out_zp[i] = 2.0 * ds + scale * d_inner * dtau_dt


# --------------------------------------------------------------------------
# public API
# --------------------------------------------------------------------------

def _as_checked_array(t, t_min: float, name: str) -> tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr).ravel()
    if arr.size and (not np.all(np.isfinite(arr)) or arr.min() < t_min):
        bad = arr[~np.isfinite(arr) | (arr < t_min)][0]
        raise DomainError(f"{name}: t={bad!r} outside supported range t >= {t_min}")
    return arr, scalar


def _shape_like(values: np.ndarray, template, scalar: bool):
    if scalar:
        return float(values[0])
    return values.reshape(np.shape(template))


def theta(t):
    """Riemann-Siegel theta via its Stirling expansion (valid for t >= 10)."""
    arr, scalar = _as_checked_array(t, THETA_T_MIN, "theta")
    out = (0.5 * arr * np.log(arr / _TWO_PI) - 0.5 * arr - math.pi / 8
           + 1 / (48 * arr) + 7 / (5760 * arr**3) + 31 / (80640 * arr**5)
           + 127 / (430080 * arr**7) + 511 / (1216512 * arr**9))
    return _shape_like(out, t, scalar)


def theta_prime(t):
    arr, scalar = _as_checked_array(t, THETA_T_MIN, "theta_prime")
    out = (0.5 * np.log(arr / _TWO_PI) - 1 / (48 * arr**2) - 21 / (5760 * arr**4)
           - 155 / (80640 * arr**6) - 889 / (430080 * arr**8) - 4599 / (1216512 * arr**10))
    return _shape_like(out, t, scalar)


def _pair(t, offset, t_min: float, name: str):
    """Split t + offset into (hi, lo) with hi = fl(t + offset); validates hi."""
    if offset is None:
        arr, scalar = _as_checked_array(t, t_min, name)
        return arr, np.zeros_like(arr), scalar
    base = np.asarray(t, dtype=float)
    off = np.asarray(offset, dtype=float)
    base, off = np.broadcast_arrays(base, off)
    scalar = base.ndim == 0
    base, off = np.atleast_1d(base).ravel(), np.atleast_1d(off).ravel()
    hi = base + off
    bb = hi - base
    lo = (base - (hi - bb)) + (off - bb)
    _as_checked_array(hi, t_min, name)
    return hi, lo, scalar


def _rs_eval(hi: np.ndarray, lo: np.ndarray, want_z: bool, want_zp: bool):
    nmax = int(math.sqrt(hi.max() / _TWO_PI)) + 1 if hi.size else 1
    nmax = 1 << max(nmax - 1, 1).bit_length()
    logn, logn_lo = _log_n_dd(nmax)
    out_z = np.empty(hi.size)
    out_zp = np.empty(hi.size)
    _rs_kernel(hi, lo, _RS_COEF, _RS_DCOEF, logn, logn_lo, _rsqrt_n(nmax), _DD_CONST, _LOG_TABLE,
               want_z, want_zp, out_z, out_zp)
    return out_z, out_zp


@functools.lru_cache(maxsize=8)
def _rsqrt_n(nmax: int) -> np.ndarray:
    out = 1.0 / np.sqrt(np.arange(1, nmax + 1, dtype=float))
    out.setflags(write=False)
    return out


def _shape_pair(values, t, offset, scalar):
    if scalar:
        return float(values[0])
    shape = np.broadcast_shapes(np.shape(t), np.shape(offset)) if offset is not None else np.shape(t)
    return values.reshape(shape)


def hardy_z(t, offset=None):
    """Z(t + offset) by the Riemann-Siegel formula; requires t + offset >= T_MIN_SUPPORTED.

    ``offset`` lets callers address points between adjacent doubles near t,
    which matters when many iterates of a map are composed.
    """
    hi, lo, scalar = _pair(t, offset, T_MIN_SUPPORTED, "hardy_z")
    z, _ = _rs_eval(hi, lo, True, False)
    return _shape_pair(z, t, offset, scalar)


def hardy_z_prime(t, offset=None):
    """Z'(t) from the differentiated Riemann-Siegel sum and remainder."""
    hi, lo, scalar = _pair(t, offset, T_MIN_SUPPORTED, "hardy_z_prime")
    _, zp = _rs_eval(hi, lo, False, True)
    return _shape_pair(zp, t, offset, scalar)


def hardy_z_and_prime(t, offset=None):
    hi, lo, scalar = _pair(t, offset, T_MIN_SUPPORTED, "hardy_z_and_prime")
    z, zp = _rs_eval(hi, lo, True, True)
    return _shape_pair(z, t, offset, scalar), _shape_pair(zp, t, offset, scalar)


def zeta_abs_sq(t):
    """|zeta(1/2 + it)|^2, taken as Z(t)^2 (the only zeta path in the package)."""
    return np.square(hardy_z(t))


def omega_weight(t, omega: OmegaKind = OmegaKind.LOG_T):
    omega = OmegaKind.parse(omega)
    arr = np.asarray(t, dtype=float)
    if omega is OmegaKind.LOG_T:
        w = np.log(arr)
    elif omega is OmegaKind.LOG_T_OVER_2PI:
        w = np.log(arr / _TWO_PI)
    else:
        w = np.log(arr / _TWO_PI) + 2 * EULER_GAMMA
    return float(w) if np.ndim(w) == 0 else w


def z_tilde_sq(t, omega: OmegaKind = OmegaKind.LOG_T, offset=None):
    """Z(t)^2 / omega(t): the derivative of the ladder.  Evaluated at t + offset."""
    omega = OmegaKind.parse(omega)
    z = hardy_z(t, offset)
    u = t if offset is None else np.add(t, offset)
    return np.square(z) / omega_weight(u, omega)


# --------------------------------------------------------------------------
# slow path for small t
# --------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _em_bernoulli(m: int) -> np.ndarray:
    b = bernoulli(2 * m)
    return np.array([b[2 * j] / math.factorial(2 * j) for j in range(1, m + 1)])


def zeta_critical_em(t: float, terms: int | None = None, m: int = 12) -> complex:
    """zeta(1/2 + it) by Euler-Maclaurin summation. Slow; for t < 50 and tests."""
    if not math.isfinite(t) or t <= 0:
        raise DomainError(f"zeta_critical_em: t={t!r} must be positive")
    s = complex(0.5, t)
    nterms = terms or max(30, int(math.ceil(t)) + 10)
    n = np.arange(1, nterms, dtype=float)
    head = np.sum(np.exp(-s * np.log(n)))
    big_n = float(nterms)
    total = head + big_n ** (1 - s) / (s - 1) + 0.5 * big_n ** (-s)
    rising = s
    power = big_n ** (-s - 1)
    for j, b in enumerate(_em_bernoulli(m), start=1):
        total += b * rising * power
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        power /= big_n * big_n
    return complex(total)


def hardy_z_em(t: float) -> float:
    """Z(t) from the Euler-Maclaurin zeta; valid for t >= THETA_T_MIN."""
    if not math.isfinite(t) or t < THETA_T_MIN:
        raise DomainError(f"hardy_z_em: t={t!r} outside t >= {THETA_T_MIN}")
    value = np.exp(1j * theta(t)) * zeta_critical_em(t)
    return float(value.real)
