import numpy as np
import pytest

from loanliq import capital_requirement, equity_floor, expected_loss, expected_losses, portfolio_risk
from loanliq.capital import risk_profile


def test_expected_losses(loans):
    np.testing.assert_allclose(expected_losses(loans), [0.0, 0.0061, 0.01098], atol=1e-15)
    assert expected_loss(loans[2]) == pytest.approx(0.122 * 0.09)


def test_portfolio_risk_reference_portfolio(loans):
    # both reference portfolios sit under theta1 = 1.2%
    assert portfolio_risk((0.0291, 0.4418, 0.5291), loans) == pytest.approx(0.4418 * 0.0061 + 0.5291 * 0.01098)
    assert portfolio_risk((0.0, 0.2778, 0.7222), loans) < 0.012


def test_equity_floor_is_max_of_leverage_and_capital():
    charges = (0.0, 0.04, 0.1)
    assert equity_floor((0.0, 0.0, 1.0), charges, 0.04) == pytest.approx(0.1)
    assert equity_floor((1.0, 0.0, 0.0), charges, 0.04) == pytest.approx(0.04)
    assert capital_requirement((0.2, 0.3, 0.5), charges) == pytest.approx(0.012 + 0.05)


def test_dimension_mismatch(loans):
    with pytest.raises(ValueError):
        capital_requirement((0.5, 0.5), (0.0, 0.1, 0.1))
    with pytest.raises(ValueError):
        portfolio_risk((1.0,), loans)


def test_risk_profile(loans):
    rp = risk_profile((0.0, 0.5, 0.5), loans, (0.0, 0.04, 0.04), 0.04)
    assert rp.equity_floor == pytest.approx(0.04)
    assert rp.portfolio_risk == pytest.approx(0.5 * 0.0061 + 0.5 * 0.01098)
