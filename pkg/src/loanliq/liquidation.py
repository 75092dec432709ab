"""
The t=1 liquidation decision.

When withdrawals exceed new deposits (``alpha_w > alpha_d``) the bank must
raise ``(alpha_w - alpha_d) * d`` in cash by selling loans. Selling ``beta_i``
of loan ``i`` (balance-sheet units, ``0 <= beta_i <= x_i``) raises
``beta_i * (1 - haircut_i) * (1 + r_i / 2)`` and loses ``beta_i * haircut_i``.

Model 4 minimises the haircut loss subject to raising exactly the shortfall.
Model 3 adds a floor ``sum(beta_i * EL_i) >= theta2`` on the expected loss
carried by the liquidated slice, which pushes sales away from the safe loan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .capital import expected_losses
from .core import (
    BankConfig,
    InvestmentDecision,
    LiquidationPlan,
    LoanClass,
    enumerate_scenarios,
    present_value,
    sorted_loans,
)
from .errors import InfeasibleError, SolverError
from .lp import INFEASIBLE, OPTIMAL, LinearProgram, Row, solve_lp


def detect_shortfall(config: BankConfig, equity: float) -> float | None:
    """Cash the bank must raise at t=1, or ``None`` if new deposits cover withdrawals."""
    if config.alpha_d >= config.alpha_w:
        return None
    return (config.alpha_w - config.alpha_d) * (1.0 - equity)


def cash_coefficients(loans: Sequence[LoanClass]) -> np.ndarray:
    """Cash raised per unit sold: ``(1 - haircut_i) * (1 + r_i / 2)``."""
    return np.array([(1.0 - l.haircut) * present_value(l, 1.0) for l in loans])


@dataclass(frozen=True)
class LiquidationProblem:
    investment: InvestmentDecision
    loans: tuple[LoanClass, ...]
    required_cash: float
    risk_floor: float | None
    lp: LinearProgram

    @property
    def model(self) -> int:
        return 4 if self.risk_floor is None else 3


def build_liquidation_problem(
    investment: InvestmentDecision,
    loans: Sequence[LoanClass],
    config: BankConfig,
    use_risk_floor: bool = True,
    theta2: float | None = None,
    required_cash: float | None = None,
) -> LiquidationProblem:
    """Assemble the Model 3 (``use_risk_floor``) or Model 4 linear program.

    ``theta2`` overrides ``config.theta2``; ``required_cash`` overrides the
    shortfall implied by the config's withdrawal fractions.
    """
    loans = tuple(sorted_loans(loans))
    n = len(loans)
    x = np.asarray(investment.weights)
    if x.size != n:
        raise ValueError(f"dimension mismatch: {x.size} weights for {n} loans")
    if required_cash is None:
        required_cash = detect_shortfall(config, investment.equity)
        if required_cash is None:
            raise ValueError("new deposits cover withdrawals; there is nothing to liquidate")
    if required_cash < 0:
        raise ValueError(f"required cash must be non-negative, got {required_cash}")

    cash = cash_coefficients(loans)
    capacity = float(x @ cash)
    if capacity < required_cash - 1e-12:
        raise InfeasibleError(
            f"liquidating the whole portfolio raises only {capacity:.6g} against {required_cash:.6g} required",
            gap=required_cash - capacity,
            stage="liquidate",
        )

    floor = None
    rows = ()
    if use_risk_floor:
        floor = config.theta2 if theta2 is None else float(theta2)
        if floor < 0:
            raise ValueError(f"theta2 must be non-negative, got {floor}")
        rows = (Row(tuple(expected_losses(loans)), floor, ">=", "risk_floor"),)
    lp = LinearProgram(
        objective=tuple(l.haircut for l in loans),
        sense="min",
        equalities=(Row(tuple(cash), required_cash, "==", "cash"),),
        inequalities=rows,
        bounds=tuple((0.0, float(v)) for v in x),
        names=tuple(f"beta{i}" for i in range(n)),
    )
    return LiquidationProblem(investment, loans, float(required_cash), floor, lp)


def _max_floor_reachable(problem: LiquidationProblem) -> float:
    lp = problem.lp
    probe = LinearProgram(
        tuple(expected_losses(problem.loans)), "max", lp.equalities, (), lp.bounds, lp.names
    )
    sol = solve_lp(probe, lexicographic=False)
    return sol.objective_value if sol.ok else math.nan


def solve_liquidation(problem: LiquidationProblem) -> LiquidationPlan:
    sol = solve_lp(problem.lp)
    if sol.status == INFEASIBLE:
        if problem.risk_floor is not None:
            reach = _max_floor_reachable(problem)
            raise InfeasibleError(
                f"risk floor theta2={problem.risk_floor:.6g} unreachable: at most {reach:.6g} "
                "expected loss can be liquidated while raising the required cash",
                gap=problem.risk_floor - reach,
                stage="liquidate",
            )
        raise InfeasibleError("cash requirement cannot be met within the holdings", stage="liquidate")
    if sol.status != OPTIMAL:
        raise SolverError(f"liquidation LP ended with status {sol.status!r}")
    x = np.asarray(problem.investment.weights)
    betas = np.clip(np.asarray(sol.point), 0.0, x)
    return LiquidationPlan.from_betas(betas, problem.loans)


def zero_plan(loans: Sequence[LoanClass]) -> LiquidationPlan:
    return LiquidationPlan.from_betas([0.0] * len(loans), loans)


@dataclass(frozen=True)
class PostLiquidationState:
    remaining_weights: tuple[float, ...]
    remaining_liability: float
    insolvency_probability: float
    realizations: tuple[float, ...]


def post_liquidation_state(
    investment: InvestmentDecision,
    plan: LiquidationPlan,
    config: BankConfig,
    loans: Sequence[LoanClass],
) -> PostLiquidationState:
    """What is left at t=2 after the sale, and how likely the bank is to fail.

    Insolvency means the remaining portfolio's t=2 value falls short of the
    deposits still owed, ``(1 - alpha_w + alpha_d) * (1 - e)``.
    """
    loans = sorted_loans(loans)
    remaining = np.asarray(investment.weights) - np.asarray(plan.betas)
    remaining = np.where(np.abs(remaining) < 1e-15, 0.0, remaining)
    if (remaining < -1e-9).any():
        raise ValueError("plan sells more than the bank holds")
    remaining = np.maximum(remaining, 0.0)
    liability = (1.0 - config.alpha_w + config.alpha_d) * (1.0 - investment.equity)
    scen = enumerate_scenarios(loans)
    values = scen.payoff_matrix @ remaining
    fail = values < liability - 1e-12
    p = math.fsum(s.probability for s, f in zip(scen, fail) if f)
    return PostLiquidationState(tuple(remaining.tolist()), liability, p, tuple(values.tolist()))


@dataclass(frozen=True)
class WorstCaseComparison:
    """Both plans evaluated when every risky loan defaults.

    ``safe_gain`` is the extra safe-loan value Model 3 keeps,
    ``(beta0_m4 - beta0_m3) * (1 + r_0)``; ``risky_cost`` is the recovery value
    it gives up by selling more risky loans,
    ``sum_i (beta_i_m3 - beta_i_m4) * (1 - lgd_i)``. The inequality
    ``safe_gain >= risky_cost`` is exactly ``model3_value >= model4_value``.
    """

    safe_gain: float
    risky_cost: float
    model3_value: float
    model4_value: float

    @property
    def inequality_holds(self) -> bool:
        return self.safe_gain >= self.risky_cost - 1e-12

    @property
    def model3_better(self) -> bool:
        return self.model3_value >= self.model4_value - 1e-12


def worst_case_comparison(
    investment: InvestmentDecision,
    plan_m3: LiquidationPlan,
    plan_m4: LiquidationPlan,
    loans: Sequence[LoanClass],
) -> WorstCaseComparison:
    loans = sorted_loans(loans)
    x = np.asarray(investment.weights)
    worst = np.array([1.0 + l.rate if l.is_safe else 1.0 - l.lgd for l in loans])
    b3, b4 = np.asarray(plan_m3.betas), np.asarray(plan_m4.betas)
    safe = np.array([l.is_safe for l in loans])
    safe_gain = float(((b4 - b3) * worst)[safe].sum())
    risky_cost = float(((b3 - b4) * worst)[~safe].sum())
    return WorstCaseComparison(
        safe_gain=safe_gain,
        risky_cost=risky_cost,
        model3_value=float((x - b3) @ worst),
        model4_value=float((x - b4) @ worst),
    )
