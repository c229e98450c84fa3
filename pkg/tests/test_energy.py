import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ladderlab import energy as E
from ladderlab.errors import GuardViolation
from ladderlab.ladder import build_ladder, interval_reverse, phi1_iter
from ladderlab.zeta_core import OmegaKind

T5 = 1e5


def test_limits_guard_arithmetic():
    lim = E.Limits()
    assert lim.g_max(1000.0) == pytest.approx(0.1 * 1000 / math.log(1000))
    with pytest.raises(GuardViolation, match="exceeds guard"):
        lim.check_g(1000.0, 500.0)
    with pytest.raises(GuardViolation):
        lim.check_g(1e5, -1.0)
    with pytest.raises(ValueError):
        lim.check_k(11)
    with pytest.raises(ValueError):
        E.Limits(guard_fraction=0.6)


def test_energy_spec_validates():
    with pytest.raises(GuardViolation):
        E.EnergySpec(1000.0, 500.0, 1)
    with pytest.raises(ValueError):
        E.EnergySpec(1e5, 1.0, 0)
    assert E.EnergySpec(1e5, 1.0, 2, "log_t").omega is OmegaKind.LOG_T


def test_zero_shift_has_zero_energy(table_1e5):
    res = E.energy_integral(table_1e5, E.EnergySpec(T5, 0.0, 3))
    assert res.value == 0.0 and res.interval.length == 0.0


def test_k1_energy_is_plain_integral(table_1e5):
    # with k = 1 the interval is the preimage itself and the oracle is phi_1(hi) - phi_1(lo)
    res = E.energy_integral(table_1e5, E.EnergySpec(T5, 3.0, 1))
    iv = res.interval
    assert phi1_iter(table_1e5, iv.hi, 1) - phi1_iter(table_1e5, iv.lo, 1) == pytest.approx(3.0, abs=1e-8)
    assert res.value == pytest.approx(3.0, rel=1e-8)


def test_split_at_zeros_is_an_accelerator_not_a_requirement(table_1e5):
    spec = E.EnergySpec(T5, 2.0, 2)
    a = E.energy_integral(table_1e5, spec).value
    b = E.energy_integral(table_1e5, spec, split_at_zeros=False).value
    assert abs(a - b) < 1e-8


def test_omega_mismatch_is_rejected(table_1e5):
    with pytest.raises(ValueError, match="omega"):
        E.energy_integral(table_1e5, E.EnergySpec(T5, 1.0, 1, "log_t_2pi"))


def test_change_of_variables_oracle(table_1e5):
    iv = interval_reverse(table_1e5, T5, 7.0, 4)
    assert E.change_of_variables_value(table_1e5, iv) == pytest.approx(7.0, abs=1e-7)


@pytest.mark.parametrize("k", [1, 3])
def test_unit_operator(table_1e5, k):
    rep = E.unit_operator_check(table_1e5, E.EnergySpec(T5, 5.0, k))
    assert rep.passed and rep.residual <= 1e-6
    rec = rep.to_record()
    assert list(rec) == list(E.VerificationReport.RECORD_FIELDS)
    assert rec["pass"] is True


def test_report_residual_definition():
    rep = E.VerificationReport.build("x", "eq", {}, 2.5, 2.0, 0.1)
    assert rep.residual == pytest.approx(0.25) and not rep.passed
    rep = E.VerificationReport.build("x", "eq", {}, 0.5, 0.0, 1.0)
    assert rep.residual == 0.5 and rep.passed


def test_additivity_mixed_depths(table_1e5):
    rep = E.additivity_check(table_1e5, T5, [(3.0, 1), (4.0, 3)], 2)
    assert rep.passed, rep
    assert rep.extras["terms"][0] == pytest.approx(3.0, rel=1e-6)


def test_additivity_truncation_bound(table_1e5):
    with pytest.raises(ValueError, match="tail bound"):
        E.additivity_check(table_1e5, T5, [(0.5, 1), (0.25, 1)], 1, g_total=1.0, tail_bound=1e-3)
    rep = E.additivity_check(table_1e5, T5, [(0.5, 1), (0.25, 1)], 1, g_total=1.0, tail_bound=0.3)
    assert rep.passed


def test_multiplicativity(table_1e5):
    rep = E.multiplicativity_check(table_1e5, T5, [(2.0, 1), (3.5, 2)], 3)
    assert rep.passed
    with pytest.raises(GuardViolation):
        E.multiplicativity_check(table_1e5, T5, [(0.0, 1), (3.0, 1)], 1)


def test_fourier_index_parsing():
    assert E.parse_fourier_index("const") == 0
    assert E.parse_fourier_index("cos2") == 3
    assert E.parse_fourier_index("sin2") == 4
    assert E.parse_fourier_index(5) == 5
    f = E.fourier_function(3, 2.0)
    assert f(np.array([1.0]))[0] == pytest.approx(math.cos(math.pi))


def test_orthogonality_off_diagonal(table_1e5):
    rep = E.orthogonality_check(table_1e5, T5, 2.0, "cos1", "sin1", 1)
    assert rep.rhs == 0.0 and rep.tolerance == pytest.approx(2e-6)
    assert rep.passed


def test_factorize():
    assert E.factorize(2) == [(2, 1)]
    assert E.factorize(12) == [(2, 2), (3, 1)]
    assert E.factorize(30) == [(2, 1), (3, 1), (5, 1)]
    assert E.factorize(97) == [(97, 1)]
    with pytest.raises(ValueError):
        E.factorize(1)


def test_factorization_k_assign_length(table_1e5):
    with pytest.raises(ValueError, match="k_assign"):
        E.canonical_factorization_check(table_1e5, T5, 12, 1, [1])


def test_figures(table_1e5):
    parts = [(2.0, 1), (3.0, 2)]
    whole, areas = E.figure_measures(table_1e5, T5, parts, 1)
    assert whole == pytest.approx(sum(areas), rel=1e-7)
    assert E.figures_disjoint(table_1e5, T5, parts)
    with pytest.raises(ValueError):
        E.figure_measures(table_1e5, T5, parts, 1, mode="ratio")


def test_zeta_energy_scale(table_1e5):
    # |zeta|^2 = omega Z~^2 and omega varies by < 1% across the components
    val = E.zeta_energy(table_1e5, T5, 4.0, 2)
    assert val / (4.0 * math.log(T5) ** 2) == pytest.approx(1.0, abs=0.02)


def test_mean_value_reports_carry_scale(table_1e5):
    rep = E.example1_ratio(table_1e5, T5, 2.0, 3.0, 2)
    assert rep.inputs["k2"] == 2
    assert rep.extras["error_scale"] == pytest.approx(4 / math.log(T5))
    assert not rep.extras["non_convergent"]
    rep2 = E.example2_ratio(table_1e5, T5, 2.0, 3.0, k1=1, k2=2)
    assert rep2.extras["log_exponent"] == 2
    assert rep2.passed


def test_alternative_weight_unit_operator():
    tab = build_ladder(20000.0, 23000.0, "log_t_2pi_2c")
    rep = E.unit_operator_check(tab, E.EnergySpec(20000.0, 3.0, 2, "log_t_2pi_2c"))
    assert rep.passed


@settings(max_examples=12, deadline=None)
@given(st.floats(min_value=1e5, max_value=1e5 + 300),
       st.floats(min_value=1e-3, max_value=20.0),
       st.integers(min_value=1, max_value=4))
def test_energy_matches_oracle_property(table_1e5, T, g, k):
    res = E.energy_integral(table_1e5, E.EnergySpec(T, g, k))
    oracle = E.change_of_variables_value(table_1e5, res.interval)
    assert abs(res.value - oracle) <= 1e-8 * g + 1e-10
