import numpy as np
import pytest

from ladderlab import curve
from ladderlab import zeta_core as zc
from ladderlab.errors import DomainError


def test_zeros_match_reference(reference_zeros):
    found = curve.find_zeros(100.0, 30.0)
    ref = reference_zeros.window(100.0, 130.0)
    assert found.size == ref.size
    assert np.max(np.abs(found - ref)) < 1e-6
    assert curve.compare_to_reference(found, ref) == 0


def test_compare_counts_missing_and_extra():
    ref = np.array([1.0, 2.0, 3.0])
    assert curve.compare_to_reference([1.0, 2.0, 3.0], ref) == 0
    assert curve.compare_to_reference([1.0, 3.0], ref) == 1
    assert curve.compare_to_reference([1.0, 2.0, 2.5, 3.0], ref) == 1
    assert curve.compare_to_reference([], ref) == 3


def test_zero_count_near_1e5():
    # 154 zeros lie in [10^5, 10^5 + 100], including a close pair near 100036.6
    diag = []
    zeros = curve.find_zeros(1e5, 100.0, diag)
    assert zeros.size == 154
    assert any("close zero pair" in d for d in diag)
    assert np.all(np.abs(zc.hardy_z(zeros)) < 1e-9)


def test_critical_points_interlace():
    cps = curve.find_critical_points(1000.0, 50.0)
    assert cps.interlaced()
    assert cps.interlacing_exceptions == 0
    assert np.all(np.abs(zc.hardy_z_prime(cps.t0s)) < 1e-8)


def test_arc_length_bounds():
    T, H = 2000.0, 20.0
    cps = curve.find_critical_points(T, H)
    arc = curve.arc_length(T, H, np.concatenate([cps.gammas, cps.t0s]))
    # the graph is longer than its projection and than its total vertical travel
    assert arc > H
    assert arc >= 2 * np.abs(cps.z_at_t0[cps.interior()]).sum()
    assert curve.arc_length(T, 0.0) == 0.0


def test_arc_length_of_flat_reference():
    # with no breakpoints the rule still integrates the smooth graph accurately
    a = curve.arc_length(5000.0, 3.0)
    b = curve.arc_length(5000.0, 3.0, rel_tol=1e-10)
    assert abs(a - b) < 1e-6 * 3.0


def test_curve_report_fields():
    rep = curve.curve_length_check(1000.0, 40.0)
    assert 0 < rep.theta_hat < 1 and rep.passed
    vr = rep.to_report()
    assert vr.residual == rep.theta_hat and vr.lhs == rep.arc_length
    assert list(vr.to_record()) == ["check_id", "paper_eq", "inputs", "lhs", "rhs", "residual",
                                    "tolerance", "pass"]


def test_window_validation():
    with pytest.raises(DomainError):
        curve.find_zeros(10.0, 5.0)
    with pytest.raises(DomainError):
        curve.arc_length(1000.0, -1.0)
    assert curve.find_zeros(1000.0, 0.0).size == 0


def test_corollary3_small_window(table_1e4):
    # windows much shorter than this are dominated by the two cut edge arches
    cps = curve.find_critical_points(1e4, 30.0)
    rep = curve.corollary3_check(table_1e4, 1e4, 30.0, k=2, cps=cps)
    assert rep.passed
    assert rep.extras["mid_residual"] <= 1e-6
    # every energy term reproduces its arch height
    assert rep.extras["max_term_residual"] <= 1e-6
    assert rep.rhs == pytest.approx(2 * np.abs(cps.z_at_t0).sum(), rel=1e-6)
