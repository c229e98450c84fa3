import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from ladderlab import zeta_core as zc
from ladderlab.errors import BracketError, DomainError
from ladderlab.ladder import (EULER_GAMMA, LadderTable, StepPolicy, anchor_value, build_ladder,
                              component_set, interval_reverse, ladder_extent, phi1, phi1_iter,
                              phi1_offset, reverse_iterate, validate_table)


@pytest.fixture(scope="module")
def small_table():
    return build_ladder(1000.0, 1100.0)


def test_anchor_value_places_gap():
    t = 1e5
    assert t - anchor_value(t) == pytest.approx((1 - EULER_GAMMA) * t / math.log(t), rel=1e-14)


def test_table_invariants(small_table, table_1e5):
    for tab in (small_table, table_1e5):
        validate_table(tab)
        assert np.all(np.diff(tab.t) > 0)
        assert np.all(np.diff(tab.phi) > 0)
        assert np.all(tab.phi < tab.t)
        assert tab.phi[0] == anchor_value(tab.t_lo)
        assert not tab.t.flags.writeable


def test_increments_match_scipy_quad(small_table):
    a, b = 1003.25, 1017.5

    def f(t):
        return float(zc.z_tilde_sq(t))

    ref, _ = integrate.quad(f, a, b, epsabs=1e-12, epsrel=1e-12, limit=500)
    assert abs((phi1(small_table, b) - phi1(small_table, a)) - ref) < 1e-9


def test_derivative_is_z_tilde_sq(table_1e5):
    t = np.array([100123.4, 101000.1, 110000.7])
    h = 1e-3
    fd = (phi1(table_1e5, t + h) - phi1(table_1e5, t - h)) / (2 * h)
    assert np.allclose(fd, zc.z_tilde_sq(t), atol=1e-6)


def test_phi1_hits_nodes_exactly(table_1e5):
    idx = np.array([0, 17, 5000, len(table_1e5) - 2])
    assert np.array_equal(phi1(table_1e5, table_1e5.t[idx]), table_1e5.phi[idx])


def test_phi1_offset_agrees_with_phi1(table_1e5):
    base = np.array([100500.0, 110000.0, 120000.0])
    off = np.array([0.25, 1e-9, 3.5])
    b, o = phi1_offset(table_1e5, base, off)
    assert np.allclose(b + o, phi1(table_1e5, base + off), rtol=0, atol=1e-9)


def test_phi1_rejects_outside_domain(table_1e5):
    with pytest.raises(DomainError):
        phi1(table_1e5, table_1e5.t_hi + 1.0)
    with pytest.raises(DomainError):
        phi1(table_1e5, 99999.0)
    with pytest.raises(DomainError, match="iterate"):
        phi1_iter(table_1e5, table_1e5.t_lo + 1.0, 2)   # phi_1 maps below the anchor


def test_phi1_iter_composes(table_1e5):
    t = 120000.0
    assert phi1_iter(table_1e5, t, 0) == t
    assert phi1_iter(table_1e5, t, 2) == phi1(table_1e5, phi1(table_1e5, t))


def test_reverse_iterate_out_of_range(table_1e5):
    with pytest.raises(BracketError):
        reverse_iterate(table_1e5, 1e5, 40)
    with pytest.raises(ValueError):
        reverse_iterate(table_1e5, 1e5, -1)


def test_interval_reverse_contains_preimages(table_1e5):
    iv = interval_reverse(table_1e5, 1e5, 20.0, 3)
    assert iv.lo > 1e5 and iv.length > 0
    assert phi1_iter(table_1e5, iv.lo, 3) == pytest.approx(1e5, abs=1e-7)
    assert phi1_iter(table_1e5, iv.hi, 3) == pytest.approx(1e5 + 20.0, abs=1e-7)
    with pytest.raises(ValueError):
        interval_reverse(table_1e5, 1e5, -1.0, 1)


def test_component_set_structure(table_1e5):
    cs = component_set(table_1e5, 1e5, 5.0, 4)
    assert len(cs.components) == 5
    assert cs.components[0].lo == 1e5 and cs.components[0].hi == 1e5 + 5.0
    assert cs.pairwise_disjoint()
    assert all(g > 0 for g in cs.gaps)


def test_ladder_extent_is_sufficient(table_1e4):
    for g, k in [(20.0, 5), (1.0, 3)]:
        need = interval_reverse(table_1e4, 1e4, g, k).hi
        assert need < ladder_extent(1e4, g, k)


def test_build_ladder_domain_errors():
    with pytest.raises(DomainError):
        build_ladder(10.0, 100.0)
    with pytest.raises(DomainError):
        build_ladder(200.0, 100.0)
    with pytest.raises(ValueError):
        build_ladder(200.0, 210.0, "bad_omega")


def test_validate_table_rejects_broken_tables():
    t = np.array([100.0, 101.0, 102.0])
    with pytest.raises(DomainError, match="strictly increasing"):
        validate_table(LadderTable(zc.OmegaKind.LOG_T, 100.0, 90.0, t, np.array([90.0, 91.0, 90.5])))
    with pytest.raises(DomainError, match="diagonal"):
        validate_table(LadderTable(zc.OmegaKind.LOG_T, 100.0, 90.0, t, np.array([90.0, 95.0, 103.0])))


def test_step_policy_does_not_change_values():
    coarse = build_ladder(2000.0, 2030.0, step_policy=StepPolicy(h_max=0.25))
    fine = build_ladder(2000.0, 2030.0, step_policy=StepPolicy(h_max=0.05))
    ts = np.linspace(2000.0, 2030.0, 41)
    assert np.allclose(phi1(coarse, ts), phi1(fine, ts), rtol=0, atol=1e-9)


@pytest.mark.parametrize("kind", ["log_t_2pi", "log_t_2pi_2c"])
def test_other_weights_build(kind):
    tab = build_ladder(5000.0, 5050.0, kind)
    assert tab.omega is zc.OmegaKind.parse(kind)
    assert np.all(np.diff(tab.phi) > 0)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=1e5, max_value=1e5 + 500), st.integers(min_value=1, max_value=5))
def test_reverse_then_forward_roundtrip(table_1e5, T, k):
    x = reverse_iterate(table_1e5, T, k)
    assert abs(phi1_iter(table_1e5, x, k) - T) <= 1e-8 * T
