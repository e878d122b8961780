import math

import pytest
from hypothesis import given, strategies as st

from geowalk.budget import (accuracy_budget, budget_report, error_constant, kappa, min_chord,
                            mixing_time_bound, oracle_call_budget)
from geowalk.errors import ContractViolation
from geowalk.manifolds import CurvatureBounds

B14 = CurvatureBounds(1.0, 4.0)

# Recomputed independently at 50 digits.
THETA_01 = 4.495507306102486e-4
C_14 = 65.15242860708083


def test_constants():
    assert B14.alpha == pytest.approx(8 * math.pi, rel=1e-15)
    assert B14.beta == pytest.approx(10.0, rel=1e-15)
    assert error_constant(B14.alpha, B14.beta) == pytest.approx(C_14, rel=1e-13)
    assert kappa(B14) == pytest.approx(1 - math.cos(math.pi / 4), rel=1e-14)


def test_mixing_time():
    assert mixing_time_bound(B14, math.pi / 4, 0.1, D=10.0) == 14
    assert mixing_time_bound(B14, math.pi / 4, 0.1) == 10
    assert mixing_time_bound(B14, math.pi / 4, 20.0, D=10.0) == 0
    assert mixing_time_bound(CurvatureBounds(1.0, 1.0), math.pi / 2, 0.1) == 0
    with pytest.raises(ContractViolation):
        mixing_time_bound(B14, 1.0, 0.1)


def test_accuracy_budget_values():
    acc = accuracy_budget(B14, B14.alpha, B14.beta, 0.1)
    assert acc.theta_eps == pytest.approx(THETA_01, rel=1e-12)
    assert acc.I_eps == 12
    assert not acc.degenerate
    theta, i_eps = acc
    assert (theta, i_eps) == (acc.theta_eps, 12)


@pytest.mark.parametrize("k", [1, 2, 5, 9])
def test_accuracy_budget_inverse(k):
    eps = 2 * math.pi * math.cos(math.pi / 4) ** k
    assert accuracy_budget(B14, B14.alpha, B14.beta, eps).I_eps == k


@given(st.floats(1e-4, 1.0), st.sampled_from([0.5, 2.0, 0.25, 4.0, 8.0]))
def test_theta_linear_in_eps(eps, c):
    a = accuracy_budget(B14, B14.alpha, B14.beta, eps).theta_eps
    b = accuracy_budget(B14, B14.alpha, B14.beta, c * eps).theta_eps
    assert b == c * a


def test_degenerate_sphere():
    b = CurvatureBounds(1.0, 1.0)
    acc = accuracy_budget(b, b.alpha, b.beta, 0.2)
    assert acc.degenerate and acc.I_eps == 1
    assert acc.theta_eps == pytest.approx(0.004309117118801489, rel=1e-12)
    rep = budget_report(b, 0.2)
    assert rep.degenerate and rep.I_eps == 1 and rep.t_mix == 0


def test_oracle_call_budget():
    assert oracle_call_budget(B14, 0.1) == 12 * (1748 + 200)
    assert oracle_call_budget(B14, 0.1, "linear") == 12 * (6989 + 200)
    assert min_chord(B14, 0.1, "geometric") >= min_chord(B14, 0.1, "linear")


@pytest.mark.parametrize("ratio", [2.0, 3.0, 8.0])
def test_budget_grows_with_ratio(ratio):
    lo = oracle_call_budget(CurvatureBounds(1.0, ratio), 0.1)
    hi = oracle_call_budget(CurvatureBounds(1.0, 2 * ratio), 0.1)
    assert hi > lo


def test_report_matches_independent_formulas():
    m2, M2, eps, T, D = 1.0, 4.0, 0.1, math.pi / 4, 10.0
    rep = budget_report(CurvatureBounds(m2, M2), eps, T=T, D=D)
    alpha, beta = 2 * math.pi * M2 / m2, 5 * math.sqrt(M2 / m2)
    kap = 1 - math.cos(math.pi * math.sqrt(m2) / (2 * math.sqrt(M2)))
    theta = eps * math.sqrt(M2) * kap / (2 * (1 + math.pi / 2 * alpha + (math.pi / 2) ** 2 * beta))
    i_raw = math.log(eps * math.sqrt(m2) / (2 * math.pi)) / math.log(1 - kap)
    chords = math.ceil((math.pi / (2 * math.sqrt(M2))) / (2 * math.sin(theta) / math.sqrt(M2)))
    for got, want in [(rep.kappa, kap), (rep.theta_eps, theta), (rep.alpha, alpha), (rep.beta, beta)]:
        assert got == pytest.approx(want, rel=1e-12)
    assert rep.I_eps == math.ceil(i_raw)
    assert rep.N_eps == math.ceil(i_raw) * (chords + 200)
    assert rep.t_mix == math.ceil(math.log(eps / D) / math.log(math.cos(math.sqrt(m2) * T)))
    assert rep.kappa > 0 and rep.kappa <= 1
    assert set(rep.to_dict()) >= {"kappa", "theta_eps", "I_eps", "N_eps", "t_mix", "N_eps_linear"}


def test_bad_inputs():
    with pytest.raises(ContractViolation):
        accuracy_budget(B14, B14.alpha, B14.beta, 0.0)
    with pytest.raises(ContractViolation):
        accuracy_budget(B14, -1.0, B14.beta, 0.1)
    with pytest.raises(ValueError):
        min_chord(B14, 0.1, "other")
