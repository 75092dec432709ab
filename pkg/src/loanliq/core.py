"""
Domain types and the three-date balance-sheet arithmetic.

The bank's balance sheet is normalised to one unit of assets at t=0, so a
portfolio weight ``x_i`` is also the money amount lent in loan class ``i``
and deposits are ``d = 1 - e``. Loan values follow

    t=1 present value   (1 + r_i / 2) * principal
    t=2 final value     (1 + r_i) * principal      if the loan performs
                        (1 - lgd_i) * principal    if it defaults

Risky-loan defaults are independent, so the joint law of the t=2 portfolio
value is a finite set of ``2**n_risky`` scenarios.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError

WEIGHT_SUM_TOL = 1e-9
PROB_SUM_TOL = 1e-12


@dataclass(frozen=True)
class LoanClass:
    """One loan type. ``id == 0`` is the safe loan."""

    id: int
    rate: float
    pd: float
    lgd: float
    haircut: float
    name: str = ""

    def __post_init__(self):
        if self.id < 0:
            raise ValidationError("id", f"must be non-negative, got {self.id}")
        if not 0.0 <= self.pd <= 1.0:
            raise ValidationError("pd", f"must lie in [0, 1], got {self.pd}")
        if not 0.0 <= self.lgd <= 1.0:
            raise ValidationError("lgd", f"must lie in [0, 1], got {self.lgd}")
        if not 0.0 <= self.haircut < 1.0:
            raise ValidationError("haircut", f"must lie in [0, 1), got {self.haircut}")
        if self.rate <= -1.0:
            raise ValidationError("rate", f"must exceed -1, got {self.rate}")
        if self.is_safe and (self.pd != 0.0 or self.lgd != 0.0 or self.haircut != 0.0):
            raise ValidationError("pd", "the safe loan (id 0) must have pd = lgd = haircut = 0")

    @property
    def is_safe(self) -> bool:
        return self.id == 0


def validate_universe(loans: Sequence[LoanClass]) -> None:
    """Check the ordering assumptions of a loan universe.

    Sorted by id, rates must be strictly increasing and risky-loan haircuts
    strictly increasing. Solvers do not require this; config loading does.
    """
    ordered = sorted(loans, key=lambda l: l.id)
    ids = [l.id for l in ordered]
    if len(set(ids)) != len(ids):
        raise ValidationError("id", f"duplicate loan ids in {ids}")
    if sum(l.is_safe for l in ordered) != 1:
        raise ValidationError("id", "exactly one safe loan (id 0) is required")
    for prev, cur in zip(ordered, ordered[1:]):
        if not cur.rate > prev.rate:
            raise ValidationError("rate", f"rates must increase with id (loan {cur.id})")
        if not cur.haircut > prev.haircut:
            raise ValidationError("haircut", f"haircuts must increase with id (loan {cur.id})")


@dataclass(frozen=True)
class BankConfig:
    """Market and regulatory parameters for one bank."""

    delta: float
    k_lev: float
    theta1: float
    haircut_cap: float
    alpha_w: float
    alpha_d: float
    capital_charges: tuple[float, ...]
    theta2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "capital_charges", tuple(float(c) for c in self.capital_charges))
        if not 0.0 < self.k_lev <= 1.0:
            raise ValidationError("k_lev", f"must lie in (0, 1], got {self.k_lev}")
        # theta1 = 0 is accepted as the degenerate "no risky lending" budget
        if self.theta1 < 0.0:
            raise ValidationError("theta1", f"must be non-negative, got {self.theta1}")
        if self.theta2 < 0.0:
            raise ValidationError("theta2", f"must be non-negative, got {self.theta2}")
        if self.theta2 > 0.0 and not self.theta2 < self.theta1:
            raise ValidationError("theta2", f"must be below theta1={self.theta1}, got {self.theta2}")
        if self.haircut_cap < 0.0:
            raise ValidationError("haircut_cap", f"must be non-negative, got {self.haircut_cap}")
        if not 0.0 <= self.alpha_w <= 1.0:
            raise ValidationError("alpha_w", f"must lie in [0, 1], got {self.alpha_w}")
        if self.alpha_d < 0.0:
            raise ValidationError("alpha_d", f"must be non-negative, got {self.alpha_d}")
        for c in self.capital_charges:
            if not 0.0 <= c <= 1.0:
                raise ValidationError("capital_charges", f"every charge must lie in [0, 1], got {c}")


@dataclass(frozen=True)
class InvestmentDecision:
    """Portfolio weights and equity fraction chosen at t=0."""

    weights: tuple[float, ...]
    equity: float

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        object.__setattr__(self, "weights", w)
        if any(not 0.0 <= v <= 1.0 for v in w):
            raise ValidationError("weights", f"each weight must lie in [0, 1], got {w}")
        if abs(math.fsum(w) - 1.0) > WEIGHT_SUM_TOL:
            raise ValidationError("weights", f"weights must sum to 1, got {math.fsum(w)!r}")
        if not 0.0 < self.equity <= 1.0:
            raise ValidationError("equity", f"must lie in (0, 1], got {self.equity}")

    @property
    def deposits(self) -> float:
        return 1.0 - self.equity

    @classmethod
    def from_solver(cls, weights, equity) -> "InvestmentDecision":
        # clip round-off from the vertex solve before validation
        w = np.clip(np.asarray(weights, dtype=float), 0.0, 1.0)
        w[np.abs(w) < 1e-13] = 0.0
        return cls(tuple(w.tolist()), float(min(max(equity, 0.0), 1.0)))


@dataclass(frozen=True)
class Scenario:
    default_mask: tuple[bool, ...]
    probability: float
    unit_payoffs: tuple[float, ...]


@dataclass(frozen=True)
class ScenarioSet:
    """All joint default outcomes of a loan universe (loans ordered by id)."""

    loan_ids: tuple[int, ...]
    scenarios: tuple[Scenario, ...]

    def __len__(self):
        return len(self.scenarios)

    def __iter__(self):
        return iter(self.scenarios)

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([s.probability for s in self.scenarios])

    @property
    def payoff_matrix(self) -> np.ndarray:
        """(n_scenarios, n_loans) array of terminal payoff per unit invested."""
        return np.array([s.unit_payoffs for s in self.scenarios])


@dataclass(frozen=True)
class LiquidationPlan:
    """Amounts of each loan sold at t=1, in balance-sheet units (same unit as weights)."""

    betas: tuple[float, ...]
    haircut_loss: float
    cash_raised: float

    @classmethod
    def from_betas(cls, betas, loans: Sequence[LoanClass]) -> "LiquidationPlan":
        b = tuple(float(v) for v in betas)
        if len(b) != len(loans):
            raise ValueError(f"{len(b)} betas for {len(loans)} loans")
        loss = math.fsum(bi * l.haircut for bi, l in zip(b, loans))
        cash = math.fsum(bi * (1.0 - l.haircut) * present_value(l, 1.0) for bi, l in zip(b, loans))
        return cls(b, loss, cash)


def present_value(loan: LoanClass, principal: float) -> float:
    """Value at t=1 of ``principal`` lent at t=0 (half a period of interest)."""
    if principal < 0:
        raise ValueError(f"principal must be non-negative, got {principal}")
    return (1.0 + loan.rate / 2.0) * principal


def final_value(loan: LoanClass, principal: float, defaulted: bool) -> float:
    """Value at t=2. A defaulted loan recovers ``1 - lgd`` of principal, no interest."""
    if principal < 0:
        raise ValueError(f"principal must be non-negative, got {principal}")
    if defaulted:
        if loan.is_safe:
            raise ValueError("the safe loan cannot default")
        return (1.0 - loan.lgd) * principal
    return (1.0 + loan.rate) * principal


def sorted_loans(loans: Sequence[LoanClass]) -> list[LoanClass]:
    return sorted(loans, key=lambda l: l.id)


def enumerate_scenarios(loans: Sequence[LoanClass]) -> ScenarioSet:
    """Enumerate every joint default outcome under independent defaults.

    Scenarios are ordered by the default mask read as a binary number with the
    lowest-id risky loan as the most significant bit, so for the three-loan
    universe the order is (none, only loan 2, only loan 1, both).
    """
    if not loans:
        raise ValueError("loan list is empty")
    ids = [l.id for l in loans]
    if len(set(ids)) != len(ids):
        raise ValidationError("id", f"duplicate loan ids in {sorted(ids)}")
    loans = sorted_loans(loans)
    if sum(l.is_safe for l in loans) != 1:
        raise ValidationError("id", "exactly one safe loan (id 0) is required")

    risky = [i for i, l in enumerate(loans) if not l.is_safe]
    out = []
    for bits in itertools.product((False, True), repeat=len(risky)):
        mask = [False] * len(loans)
        prob = 1.0
        for pos, hit in zip(risky, bits):
            mask[pos] = hit
            pd = loans[pos].pd
            prob *= pd if hit else 1.0 - pd
        payoffs = tuple(final_value(l, 1.0, m) for l, m in zip(loans, mask))
        out.append(Scenario(tuple(mask), prob, payoffs))
    return ScenarioSet(tuple(l.id for l in loans), tuple(out))


def portfolio_realization(decision: InvestmentDecision | Sequence[float], scenario: Scenario) -> float:
    """Terminal value X of a portfolio in one scenario (weights or a decision)."""
    weights = decision.weights if isinstance(decision, InvestmentDecision) else tuple(decision)
    if len(weights) != len(scenario.unit_payoffs):
        raise ValueError(
            f"dimension mismatch: {len(weights)} weights, {len(scenario.unit_payoffs)} loans in scenario"
        )
    return math.fsum(w * p for w, p in zip(weights, scenario.unit_payoffs))


def limited_liability_payoff(decision: InvestmentDecision, scenarios: ScenarioSet, delta: float) -> float:
    """Expected shareholder payoff ``E[max(X - (1 - e), 0)] - delta * e``."""
    liability = 1.0 - decision.equity
    upside = math.fsum(
        s.probability * max(portfolio_realization(decision, s) - liability, 0.0) for s in scenarios
    )
    return upside - delta * decision.equity


def payoff_surface(weights: np.ndarray, equity: np.ndarray, scenarios: ScenarioSet, delta: float) -> np.ndarray:
    """Vectorised ``limited_liability_payoff`` over many (weights, equity) rows.

    ``weights`` has shape (m, n_loans) and ``equity`` shape (m,).
    """
    weights = np.atleast_2d(np.asarray(weights, dtype=float))
    equity = np.asarray(equity, dtype=float).reshape(-1)
    X = weights @ scenarios.payoff_matrix.T  # (m, n_scen)
    upside = np.maximum(X - (1.0 - equity)[:, None], 0.0) @ scenarios.probabilities
    return upside - delta * equity
