"""
Sensitivity checks and the full two-stage comparison.

These turn the qualitative claims about the models into numbers that can be
checked on a given instance:

* haircut loss grows fastest in the least liquid loan (its gradient in the
  amounts sold is the haircut vector);
* tightening the haircut cap never increases the holding of the least liquid
  loan (``cap_sweep``);
* raising the liquidation risk floor never increases sales of the safe loan
  (``floor_sweep``);
* ``compare_models`` runs invest (Model 1/2) x liquidate (Model 3/4) and
  records which dominance claims hold.

Claims are evaluated per instance and reported; nothing here asserts them
for arbitrary configurations.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .capital import equity_floor
from .core import BankConfig, InvestmentDecision, LiquidationPlan, LoanClass, sorted_loans
from .errors import InfeasibleError, LoanLiqError
from .invest import InvestSolution, build_invest_problem, solve_invest
from .liquidation import (
    PostLiquidationState,
    WorstCaseComparison,
    build_liquidation_problem,
    detect_shortfall,
    post_liquidation_state,
    solve_liquidation,
    worst_case_comparison,
    zero_plan,
)

MONO_TOL = 1e-9


@dataclass(frozen=True)
class HaircutSensitivity:
    gradient: tuple[float, ...]
    ordered: bool


def haircut_gradient(betas: Sequence[float], loans: Sequence[LoanClass]) -> HaircutSensitivity:
    """Gradient of ``sum(beta_i * haircut_i)`` in ``beta``; constant, equal to the haircuts."""
    loans = sorted_loans(loans)
    if len(betas) != len(loans):
        raise ValueError(f"dimension mismatch: {len(betas)} amounts for {len(loans)} loans")
    grad = tuple(l.haircut for l in loans)
    ordered = all(b >= a for a, b in zip(grad, grad[1:]))
    return HaircutSensitivity(grad, ordered)


def haircut_loss(betas: Sequence[float], loans: Sequence[LoanClass]) -> float:
    return float(np.dot(betas, [l.haircut for l in sorted_loans(loans)]))


@dataclass(frozen=True)
class CapSweepRow:
    haircut_cap: float
    weights: tuple[float, ...]
    equity: float
    haircut_used: float
    objective: float


@dataclass(frozen=True)
class CapSweep:
    rows: tuple[CapSweepRow, ...]
    violations: tuple[float, ...]

    @property
    def illiquid_non_increasing(self) -> bool:
        return not self.violations


def cap_sweep(loans: Sequence[LoanClass], config: BankConfig, cap_grid: Sequence[float]) -> CapSweep:
    """Re-solve Model 1 for each haircut cap, largest cap first.

    ``violations`` lists caps at which the least liquid loan's weight rose
    relative to the previous (larger) cap.
    """
    loans = sorted_loans(loans)
    if any(c < 0 for c in cap_grid):
        raise ValueError("haircut caps must be non-negative")
    rows = []
    for cap in sorted(set(float(c) for c in cap_grid), reverse=True):
        sol = solve_invest(build_invest_problem(loans, replace(config, haircut_cap=cap), True))
        used = float(np.dot(sol.weights, [l.haircut for l in loans]))
        rows.append(CapSweepRow(cap, sol.weights, sol.equity, used, sol.objective_value))
    violations = tuple(
        cur.haircut_cap for prev, cur in zip(rows, rows[1:]) if cur.weights[-1] > prev.weights[-1] + MONO_TOL
    )
    return CapSweep(tuple(rows), violations)


@dataclass(frozen=True)
class FloorSweepRow:
    theta2: float
    plan: LiquidationPlan | None
    insolvency_probability: float | None
    reason: str = ""

    @property
    def feasible(self) -> bool:
        return self.plan is not None

    @property
    def beta0(self) -> float | None:
        return None if self.plan is None else self.plan.betas[0]


@dataclass(frozen=True)
class FloorSweep:
    rows: tuple[FloorSweepRow, ...]
    violations: tuple[float, ...]

    @property
    def safe_sales_non_increasing(self) -> bool:
        return not self.violations

    @property
    def infeasible(self) -> tuple[float, ...]:
        return tuple(r.theta2 for r in self.rows if not r.feasible)


def floor_sweep(
    investment: InvestmentDecision,
    loans: Sequence[LoanClass],
    config: BankConfig,
    theta2_grid: Sequence[float],
) -> FloorSweep:
    """Solve Model 3 along increasing risk floors; infeasible floors are reported, not raised."""
    loans = sorted_loans(loans)
    rows = []
    for t2 in sorted(set(float(t) for t in theta2_grid)):
        try:
            plan = solve_liquidation(build_liquidation_problem(investment, loans, config, True, theta2=t2))
        except InfeasibleError as exc:
            rows.append(FloorSweepRow(t2, None, None, exc.reason))
            continue
        state = post_liquidation_state(investment, plan, config, loans)
        rows.append(FloorSweepRow(t2, plan, state.insolvency_probability))
    feasible = [r for r in rows if r.feasible]
    violations = tuple(cur.theta2 for prev, cur in zip(feasible, feasible[1:]) if cur.beta0 > prev.beta0 + MONO_TOL)
    return FloorSweep(tuple(rows), violations)


@dataclass(frozen=True)
class LiquidationCell:
    """One liquidation model applied to one t=0 portfolio."""

    model: int
    theta2: float | None
    plan: LiquidationPlan | None
    state: PostLiquidationState | None
    error: str = ""

    @property
    def feasible(self) -> bool:
        return self.plan is not None


@dataclass(frozen=True)
class InputRow:
    """Everything computed downstream of one investment model."""

    invest_model: int
    solution: InvestSolution
    decision: InvestmentDecision
    source: str
    required_cash: float | None
    model4: LiquidationCell
    model3: tuple[LiquidationCell, ...]
    worst_case: tuple[WorstCaseComparison | None, ...]


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple[InputRow, ...]
    claims: dict = field(default_factory=dict)

    def row(self, invest_model: int) -> InputRow:
        return next(r for r in self.rows if r.invest_model == invest_model)


def _liquidate(decision, loans, config, model, theta2=None) -> LiquidationCell:
    if detect_shortfall(config, decision.equity) is None:
        plan = zero_plan(loans)
    else:
        try:
            plan = solve_liquidation(
                build_liquidation_problem(decision, loans, config, model == 3, theta2=theta2)
            )
        except InfeasibleError as exc:
            return LiquidationCell(model, theta2, None, None, str(exc))
    return LiquidationCell(model, theta2, plan, post_liquidation_state(decision, plan, config, loans))


def injected_decision(weights: Sequence[float], loans: Sequence[LoanClass], config: BankConfig) -> InvestmentDecision:
    """A t=0 decision from given weights, holding equity at its regulatory floor."""
    return InvestmentDecision(tuple(weights), equity_floor(weights, config.capital_charges, config.k_lev))


def compare_models(
    loans: Sequence[LoanClass],
    config: BankConfig,
    theta2_values: Sequence[float] | None = None,
    injected: Mapping[int, Sequence[float]] | None = None,
) -> ComparisonReport:
    """Run the full two-stage pipeline for both investment and both liquidation models.

    ``injected`` maps an investment model (1 or 2) to weights that replace the
    solved portfolio as input to the t=1 stage; the solved portfolio is still
    reported.
    """
    loans = sorted_loans(loans)
    theta2_values = tuple(theta2_values) if theta2_values is not None else (config.theta2,)
    injected = dict(injected or {})
    rows = []
    for model, cap in ((1, True), (2, False)):
        try:
            sol = solve_invest(build_invest_problem(loans, config, cap))
        except LoanLiqError as exc:
            raise type(exc)(f"[invest model {model}] {exc}") from exc
        if model in injected:
            decision, source = injected_decision(injected[model], loans, config), "injected"
        else:
            decision, source = sol.decision, "solved"
        m4 = _liquidate(decision, loans, config, 4)
        m3 = tuple(_liquidate(decision, loans, config, 3, t2) for t2 in theta2_values)
        worst = tuple(
            worst_case_comparison(decision, c.plan, m4.plan, loans) if c.feasible and m4.feasible else None
            for c in m3
        )
        rows.append(InputRow(model, sol, decision, source, detect_shortfall(config, decision.equity), m4, m3, worst))

    r1, r2 = rows
    claims = {
        "model1_holds_less_illiquid": r1.solution.weights[-1] <= r2.solution.weights[-1] + MONO_TOL,
        "model3_loss_at_least_model4": all(
            c.plan.haircut_loss >= r.model4.plan.haircut_loss - MONO_TOL
            for r in rows for c in r.model3 if c.feasible and r.model4.feasible
        ),
        "model3_insolvency_at_most_model4": all(
            c.state.insolvency_probability <= r.model4.state.insolvency_probability + MONO_TOL
            for r in rows for c in r.model3 if c.feasible and r.model4.feasible
        ),
        "model1_input_insolvency_at_most_model2_input": (
            r1.model4.feasible and r2.model4.feasible
            and r1.model4.state.insolvency_probability <= r2.model4.state.insolvency_probability + MONO_TOL
        ),
        "worst_case_model3_better": all(w.model3_better for r in rows for w in r.worst_case if w is not None),
    }
    return ComparisonReport(tuple(rows), claims)
