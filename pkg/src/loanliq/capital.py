"""Expected loss, portfolio risk and the equity floor.

Portfolio risk is the weighted expected loss ``sum_i x_i * pd_i * lgd_i``.
The capital requirement is a linear rule ``K(x) = sum_i x_i * k_i`` with
per-loan charges ``k_i`` taken from configuration; keeping it linear keeps
every feasible set polyhedral.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import LoanClass


@dataclass(frozen=True)
class RiskProfile:
    expected_losses: tuple[float, ...]
    portfolio_risk: float
    capital_requirement: float
    equity_floor: float


def expected_loss(loan: LoanClass) -> float:
    return loan.pd * loan.lgd


def expected_losses(loans: Sequence[LoanClass]) -> np.ndarray:
    return np.array([expected_loss(l) for l in loans])


def _check_dims(weights, other, what: str) -> tuple[np.ndarray, np.ndarray]:
    w = np.asarray(weights, dtype=float)
    o = np.asarray(other, dtype=float)
    if w.shape != o.shape:
        raise ValueError(f"dimension mismatch: {w.size} weights vs {o.size} {what}")
    return w, o


def portfolio_risk(weights: Sequence[float], loans: Sequence[LoanClass]) -> float:
    w, el = _check_dims(weights, expected_losses(loans), "loans")
    return float(w @ el)


def capital_requirement(weights: Sequence[float], charges: Sequence[float]) -> float:
    w, k = _check_dims(weights, charges, "capital charges")
    return float(w @ k)


def equity_floor(weights: Sequence[float], charges: Sequence[float], k_lev: float) -> float:
    """Smallest admissible equity: ``max(k_lev, K(x))``."""
    return max(k_lev, capital_requirement(weights, charges))


def risk_profile(weights: Sequence[float], loans: Sequence[LoanClass], charges: Sequence[float], k_lev: float) -> RiskProfile:
    return RiskProfile(
        expected_losses=tuple(expected_losses(loans).tolist()),
        portfolio_risk=portfolio_risk(weights, loans),
        capital_requirement=capital_requirement(weights, charges),
        equity_floor=equity_floor(weights, charges, k_lev),
    )
