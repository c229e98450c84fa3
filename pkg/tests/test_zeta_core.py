import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ladderlab import zeta_core as zc
from ladderlab.errors import DomainError

mpmath.mp.dps = 30


def mp_z(t):
    return float(mpmath.siegelz(mpmath.mpf(t)))


# |Z(t) - Z_mpmath(t)| bounds, with headroom over the observed errors
Z_CASES = [
    (50.0, 1e-6),
    (100.0, 1e-6),
    (1000.5, 1e-9),
    (12345.678, 1e-11),
    (100000.25, 1e-12),
    (1000000.125, 1e-11),
    (10000000.3, 1e-9),
]


@pytest.mark.parametrize("t,tol", Z_CASES)
def test_hardy_z_matches_mpmath(t, tol):
    assert abs(zc.hardy_z(t) - mp_z(t)) <= tol


@pytest.mark.parametrize("t", [60.0, 1000.5, 100000.25, 1000000.125])
def test_hardy_z_prime_matches_mpmath(t):
    ref = float(mpmath.siegelz(mpmath.mpf(t), derivative=1))
    scale = max(1.0, abs(ref))
    assert abs(zc.hardy_z_prime(t) - ref) <= (1e-5 if t < 100 else 1e-9) * scale


def test_hardy_z_zero_known_ordinate():
    # first zero of zeta on the critical line
    gamma1 = 14.134725141734693790
    assert abs(zc.hardy_z_em(gamma1)) < 1e-10
    gamma = float(mpmath.zetazero(100).imag)
    assert abs(zc.hardy_z(gamma)) < 1e-6


@pytest.mark.parametrize("t", [10.0, 17.5, 50.0, 1e3, 1e5, 1e7])
def test_theta_matches_mpmath(t):
    ref = float(mpmath.siegeltheta(mpmath.mpf(t)))
    assert abs(zc.theta(t) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_theta_prime_matches_derivative():
    for t in (20.0, 500.0, 1e6):
        ref = float(mpmath.siegeltheta(mpmath.mpf(t), derivative=1))
        assert abs(zc.theta_prime(t) - ref) <= 1e-13 * max(1.0, ref)


def test_vector_and_scalar_agree():
    ts = np.linspace(1e5, 1e5 + 10, 37)
    vec = zc.hardy_z(ts)
    assert vec.shape == ts.shape
    assert np.array_equal(vec, np.array([zc.hardy_z(float(t)) for t in ts]))
    z, zp = zc.hardy_z_and_prime(ts)
    assert np.array_equal(z, vec)
    assert np.array_equal(zp, zc.hardy_z_prime(ts))


def test_offset_equals_shifted_argument_when_exact():
    base = np.full(5, 100000.0)
    off = np.array([0.0, 0.125, 0.5, 1.0, 3.75])   # base + off exact in binary
    assert np.allclose(zc.hardy_z(base, off), zc.hardy_z(base + off), rtol=0, atol=1e-13)


def test_offset_below_ulp_is_honoured():
    t = 100000.3
    ulp = math.ulp(t)
    offs = np.array([-0.3, -0.1, 0.0, 0.1, 0.3]) * ulp
    z = zc.hardy_z(np.full(offs.size, t), offs)
    slope = zc.hardy_z_prime(t)
    # the sub-ulp increments follow the tangent line
    assert np.allclose(z - zc.hardy_z(t), slope * offs, rtol=1e-3, atol=1e-20)


@pytest.mark.parametrize("kind", list(zc.OmegaKind))
def test_z_tilde_sq_is_z_squared_over_weight(kind):
    ts = np.linspace(5e4, 5e4 + 3, 11)
    expected = np.square(zc.hardy_z(ts)) / zc.omega_weight(ts, kind)
    assert np.allclose(zc.z_tilde_sq(ts, kind), expected, rtol=1e-15, atol=0)


def test_weights():
    t = 1e5
    assert zc.omega_weight(t, "log_t") == pytest.approx(math.log(t))
    assert zc.omega_weight(t, "log_t_2pi") == pytest.approx(math.log(t / (2 * math.pi)))
    assert zc.omega_weight(t, "log_t_2pi_2c") == pytest.approx(
        math.log(t / (2 * math.pi)) + 2 * zc.EULER_GAMMA)
    with pytest.raises(ValueError):
        zc.OmegaKind.parse("log_log_t")


def test_zeta_abs_sq_is_z_squared():
    assert zc.zeta_abs_sq(1234.5) == pytest.approx(zc.hardy_z(1234.5) ** 2, rel=1e-15)


@pytest.mark.parametrize("t", [20.0, 40.0])
def test_euler_maclaurin_path(t):
    ref = complex(mpmath.zeta(mpmath.mpc(0.5, t)))
    assert abs(zc.zeta_critical_em(t) - ref) < 1e-10
    assert abs(zc.hardy_z_em(t) - mp_z(t)) < 1e-10


def test_domain_errors():
    with pytest.raises(DomainError):
        zc.hardy_z(49.0)
    with pytest.raises(DomainError):
        zc.hardy_z(np.array([100.0, float("nan")]))
    with pytest.raises(DomainError):
        zc.theta(5.0)
    with pytest.raises(DomainError):
        zc.hardy_z_em(3.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=50.0, max_value=1e7))
def test_theta_increasing_above_support(t):
    assert zc.theta_prime(t) > 0
    assert zc.theta(t * (1 + 1e-9) + 1e-6) > zc.theta(t)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=1e3, max_value=1e6))
def test_z_within_main_sum_bound(t):
    # |2 sum_{n <= N} n^-1/2 cos(...)| <= 4 sqrt(N); the remainder is O(t^-1/4)
    n = math.sqrt(t / (2 * math.pi))
    assert abs(zc.hardy_z(t)) < 4 * math.sqrt(n) + 1
