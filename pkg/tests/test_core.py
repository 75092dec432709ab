import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from loanliq import (
    InvestmentDecision,
    LoanClass,
    ValidationError,
    enumerate_scenarios,
    final_value,
    limited_liability_payoff,
    portfolio_realization,
    present_value,
)
from loanliq.core import payoff_surface, validate_universe

from conftest import random_universe


def test_present_value_half_period_interest(loans):
    assert present_value(loans[1], 1.0) == pytest.approx(1.045)
    assert present_value(loans[2], 0.5) == pytest.approx(0.5 * 1.066)


def test_final_value_default_and_performing(loans):
    assert final_value(loans[1], 1.0, False) == pytest.approx(1.09)
    assert final_value(loans[1], 1.0, True) == pytest.approx(0.9)
    assert final_value(loans[2], 2.0, True) == pytest.approx(2 * 0.91)


def test_safe_loan_cannot_default(loans):
    with pytest.raises(ValueError):
        final_value(loans[0], 1.0, True)


@pytest.mark.parametrize("field,kwargs", [
    ("pd", dict(pd=1.2)),
    ("lgd", dict(lgd=-0.1)),
    ("haircut", dict(haircut=1.0)),
    ("rate", dict(rate=-1.5)),
])
def test_loan_validation_names_field(field, kwargs):
    base = dict(id=1, rate=0.09, pd=0.05, lgd=0.1, haircut=0.1)
    base.update(kwargs)
    with pytest.raises(ValidationError) as exc:
        LoanClass(**base)
    assert exc.value.field == field


def test_universe_ordering_enforced(loans):
    bad = (loans[0], loans[2].__class__(1, 0.2, 0.05, 0.1, 0.1), loans[2])
    with pytest.raises(ValidationError) as exc:
        validate_universe(bad)
    assert exc.value.field == "rate"


def test_reference_scenarios(loans):
    scen = enumerate_scenarios(loans)
    assert len(scen) == 4
    # order: no default, only loan 2, only loan 1, both
    np.testing.assert_allclose(scen.probabilities, [0.824442, 0.114558, 0.053558, 0.007442], atol=1e-12)
    np.testing.assert_allclose(
        scen.payoff_matrix,
        [[1.03, 1.09, 1.132], [1.03, 1.09, 0.91], [1.03, 0.9, 1.132], [1.03, 0.9, 0.91]],
        atol=1e-12,
    )


def test_duplicate_ids_rejected(loans):
    with pytest.raises(ValidationError):
        enumerate_scenarios([loans[0], loans[1], loans[1]])


def _brute_payoff(w, e, loans, delta):
    """Independent expectation over all default patterns."""
    risky = [l for l in loans if not l.is_safe]
    total = 0.0
    for pattern in itertools.product([False, True], repeat=len(risky)):
        p = math.prod(l.pd if d else 1 - l.pd for l, d in zip(risky, pattern))
        flags = dict(zip([l.id for l in risky], pattern))
        x = sum(wi * ((1 + l.rate) if not flags.get(l.id, False) else (1 - l.lgd)) for wi, l in zip(w, loans))
        total += p * max(x - (1 - e), 0.0)
    return total - delta * e


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_scenario_probabilities_sum_to_one(seed):
    loans, _ = random_universe(np.random.default_rng(seed))
    scen = enumerate_scenarios(loans)
    assert abs(math.fsum(scen.probabilities) - 1.0) <= 1e-12
    assert len(scen) == 2 ** 2


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    raw=st.lists(st.floats(0, 1), min_size=3, max_size=3).filter(lambda v: sum(v) > 1e-3),
    e=st.floats(0.01, 1.0),
)
def test_payoff_matches_brute_force(seed, raw, e):
    loans, cfg = random_universe(np.random.default_rng(seed))
    w = np.array(raw) / sum(raw)
    w[-1] = 1.0 - w[:-1].sum()
    w = np.clip(w, 0, 1)
    dec = InvestmentDecision.from_solver(w, e)
    got = limited_liability_payoff(dec, enumerate_scenarios(loans), cfg.delta)
    assert got == pytest.approx(_brute_payoff(dec.weights, dec.equity, loans, cfg.delta), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    raw=st.lists(st.floats(0, 1), min_size=3, max_size=3).filter(lambda v: sum(v) > 1e-3),
    es=st.lists(st.floats(0.0, 1.0), min_size=2, max_size=8),
)
def test_objective_non_increasing_in_equity(seed, raw, es):
    loans, cfg = random_universe(np.random.default_rng(seed))
    assert cfg.delta >= 1.0
    w = np.array(raw) / sum(raw)
    es = np.sort(np.array(es))
    vals = payoff_surface(np.tile(w, (len(es), 1)), es, enumerate_scenarios(loans), cfg.delta)
    assert np.all(np.diff(vals) <= 1e-12)


def test_realization_accepts_weights(loans):
    scen = enumerate_scenarios(loans)
    s = scen.scenarios[3]
    assert portfolio_realization((0.0, 0.5, 0.5), s) == pytest.approx(0.5 * 0.9 + 0.5 * 0.91)


def test_decision_validation():
    with pytest.raises(ValidationError) as exc:
        InvestmentDecision((0.5, 0.6, 0.0), 0.04)
    assert exc.value.field == "weights"
    with pytest.raises(ValidationError):
        InvestmentDecision((1.0, 0.0, 0.0), 0.0)
