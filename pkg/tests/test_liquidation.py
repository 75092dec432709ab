import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from loanliq import (
    InfeasibleError,
    InvestmentDecision,
    build_liquidation_problem,
    detect_shortfall,
    post_liquidation_state,
    solve_liquidation,
    worst_case_comparison,
)
from loanliq.analysis import injected_decision
from loanliq.capital import expected_losses
from loanliq.liquidation import cash_coefficients
from loanliq.lp import enumerate_vertices

from conftest import REF_WEIGHTS, random_universe, reachable_floor

# published plans, percent of assets
TABLE = [
    (1, None, (2.91, 7.07, 0.0)),
    (1, 0.0005, (1.86, 8.20, 0.0)),
    (1, 0.001, (0.0, 3.93, 6.93)),
    (2, None, (0.0, 10.21, 0.0)),
    (2, 0.0005, (0.0, 10.21, 0.0)),
    (2, 0.001, (0.0, 3.93, 6.93)),
]


def _plan(loans, bank, model, theta2):
    dec = injected_decision(REF_WEIGHTS[model], loans, bank)
    return dec, solve_liquidation(build_liquidation_problem(dec, loans, bank, theta2 is not None, theta2=theta2))


def test_shortfall(bank):
    assert detect_shortfall(bank, 0.04) == pytest.approx(0.096)
    from dataclasses import replace
    assert detect_shortfall(replace(bank, alpha_d=0.1), 0.04) is None


def test_cash_coefficients(loans):
    np.testing.assert_allclose(cash_coefficients(loans), [1.015, 0.9405, 0.8528], atol=1e-12)


@pytest.mark.parametrize("model,theta2,expected", TABLE)
def test_reference_tables(loans, bank, model, theta2, expected):
    _, plan = _plan(loans, bank, model, theta2)
    assert np.array(plan.betas) * 100 == pytest.approx(expected, abs=0.1)
    assert plan.cash_raised == pytest.approx(0.096, abs=1e-6)


@pytest.mark.parametrize("model,theta2,expected", TABLE)
def test_against_highs(loans, bank, model, theta2, expected):
    dec, plan = _plan(loans, bank, model, theta2)
    A_ub = [-expected_losses(loans)] if theta2 is not None else None
    b_ub = [-theta2] if theta2 is not None else None
    ref = linprog([l.haircut for l in loans], A_ub=A_ub, b_ub=b_ub, A_eq=[cash_coefficients(loans)],
                  b_eq=[0.096], bounds=[(0, w) for w in dec.weights], method="highs")
    assert plan.haircut_loss == pytest.approx(ref.fun, abs=1e-9)


def test_insolvency_reference(loans, bank):
    # remaining liability 0.9 * 0.96; both default scenarios sink Model 2's input
    for model, p in ((1, 0.007442), (2, 0.122)):
        dec, p4 = _plan(loans, bank, model, None)
        _, p3 = _plan(loans, bank, model, 0.001)
        s4 = post_liquidation_state(dec, p4, bank, loans)
        s3 = post_liquidation_state(dec, p3, bank, loans)
        assert s4.remaining_liability == pytest.approx(0.864)
        assert s4.insolvency_probability == pytest.approx(p, abs=1e-12)
        assert s3.insolvency_probability <= s4.insolvency_probability + 1e-12


def test_unreachable_floor_reports_gap(loans, bank):
    dec = injected_decision(REF_WEIGHTS[1], loans, bank)
    with pytest.raises(InfeasibleError) as exc:
        solve_liquidation(build_liquidation_problem(dec, loans, bank, True, theta2=0.005))
    assert exc.value.gap > 0
    assert "unreachable" in exc.value.reason


def test_capacity_shortfall(loans, bank):
    dec = InvestmentDecision((1.0, 0.0, 0.0), 0.04)
    with pytest.raises(InfeasibleError) as exc:
        build_liquidation_problem(dec, loans, bank, False, required_cash=1.5)
    assert exc.value.gap == pytest.approx(1.5 - 1.015)


def test_dimension_mismatch(loans, bank):
    with pytest.raises(ValueError):
        build_liquidation_problem(InvestmentDecision((0.5, 0.5), 0.04), loans, bank)


def test_worst_case_reference(loans, bank):
    dec, p4 = _plan(loans, bank, 1, None)
    _, p3 = _plan(loans, bank, 1, 0.001)
    wc = worst_case_comparison(dec, p3, p4, loans)
    assert wc.safe_gain == pytest.approx(0.0291 * 1.03, abs=1e-4)
    assert wc.risky_cost == pytest.approx((0.0393 - 0.0707) * 0.9 + 0.0693 * 0.91, abs=2e-4)
    # on this instance Model 3 is the worse choice if everything defaults
    assert wc.inequality_holds == wc.model3_better
    assert not wc.model3_better


def _random_instance(seed):
    rng = np.random.default_rng(seed)
    loans, cfg = random_universe(rng)
    w = rng.dirichlet(np.ones(3))
    dec = injected_decision(w / w.sum(), loans, cfg)
    need = detect_shortfall(cfg, dec.equity)
    if need is None or need > float(np.dot(dec.weights, cash_coefficients(loans))):
        return None
    # half the draws may exceed what can be liquidated, exercising the infeasible path
    theta2 = rng.uniform(0, 2 * min(reachable_floor(dec.weights, loans, need), 0.99 * cfg.theta1))
    theta2 = min(theta2, 0.99 * cfg.theta1)
    return loans, cfg, dec, theta2


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_model3_loss_at_least_model4_and_vertex_optimal(seed):
    inst = _random_instance(seed)
    if inst is None:
        return
    loans, cfg, dec, theta2 = inst
    p4 = build_liquidation_problem(dec, loans, cfg, False)
    plan4 = solve_liquidation(p4)
    verts = enumerate_vertices(p4.lp)
    assert plan4.haircut_loss == pytest.approx(min(p4.lp.objective_value(v) for v in verts), abs=1e-8)
    assert plan4.cash_raised == pytest.approx(p4.required_cash, abs=1e-9)
    p3 = build_liquidation_problem(dec, loans, cfg, True, theta2=theta2)
    try:
        plan3 = solve_liquidation(p3)
    except InfeasibleError:
        assert enumerate_vertices(p3.lp) == []
        return
    v3 = enumerate_vertices(p3.lp)
    assert plan3.haircut_loss == pytest.approx(min(p3.lp.objective_value(v) for v in v3), abs=1e-8)
    assert plan3.haircut_loss >= plan4.haircut_loss - 1e-12
    wc = worst_case_comparison(dec, plan3, plan4, loans)
    assert wc.inequality_holds == wc.model3_better
