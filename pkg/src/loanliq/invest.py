"""
The t=0 investment decision.

Model 1 maximises the shareholders' limited-liability payoff

    E[max(X - (1 - e), 0)] - delta * e

over portfolio weights ``x`` and equity ``e`` subject to

    0 <= x_i <= 1, sum(x) = 1              (no short selling, full investment)
    e >= k_lev, e >= K(x), e <= 1          (equity floors)
    sum(x_i * EL_i) <= theta1              (risk budget)
    sum(x_i * haircut_i) <= L              (haircut cap, Model 1 only)

Model 2 is the same problem without the haircut cap.

The objective is convex in ``(x, e)``: each scenario term is the maximum of
two affine functions and ``-delta * e`` is affine. Its maximum over the
polytope is therefore attained at a vertex, and evaluating the objective on
every vertex gives the exact global optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .capital import expected_losses, equity_floor
from .core import (
    BankConfig,
    InvestmentDecision,
    LoanClass,
    ScenarioSet,
    enumerate_scenarios,
    payoff_surface,
    sorted_loans,
)
from .errors import InfeasibleError, ValidationError
from .lp import FEAS_TOL, LinearProgram, Row, active_constraints, enumerate_vertices

TIE_TOL = 1e-12


@dataclass(frozen=True)
class InvestProblem:
    loans: tuple[LoanClass, ...]
    config: BankConfig
    include_haircut_cap: bool
    polytope: LinearProgram
    scenarios: ScenarioSet

    @property
    def model(self) -> int:
        return 1 if self.include_haircut_cap else 2

    def is_feasible(self, weights: Sequence[float], equity: float, tol: float = FEAS_TOL) -> bool:
        return self.polytope.max_violation(list(weights) + [equity]) <= tol

    def objective(self, weights: Sequence[float], equity: float) -> float:
        return float(payoff_surface(np.asarray(weights)[None, :], np.array([equity]), self.scenarios, self.config.delta)[0])


@dataclass(frozen=True)
class InvestSolution:
    decision: InvestmentDecision
    objective_value: float
    binding_constraints: tuple[str, ...]
    vertex_count: int
    oracle_gap: float | None = None
    method: str = "vertex"

    @property
    def weights(self) -> tuple[float, ...]:
        return self.decision.weights

    @property
    def equity(self) -> float:
        return self.decision.equity


def build_invest_problem(
    loans: Sequence[LoanClass], config: BankConfig, include_haircut_cap: bool = True
) -> InvestProblem:
    """Assemble the linear feasible set of Model 1 (cap on) or Model 2 (cap off).

    Variables are ``(x_0, ..., x_{n-1}, e)``. Box bounds carry ``0 <= x_i <= 1``
    and ``0 <= e <= 1``; the named rows are ``leverage_floor``,
    ``capital_floor``, ``risk_cap`` and, for Model 1, ``haircut_cap``.
    """
    if config.theta1 < 0:
        raise ValidationError("theta1", f"must be non-negative, got {config.theta1}")
    if config.haircut_cap < 0:
        raise ValidationError("haircut_cap", f"must be non-negative, got {config.haircut_cap}")
    loans = tuple(sorted_loans(loans))
    n = len(loans)
    if len(config.capital_charges) != n:
        raise ValueError(f"dimension mismatch: {len(config.capital_charges)} capital charges for {n} loans")

    el = expected_losses(loans)
    gam = np.array([l.haircut for l in loans])
    charges = np.asarray(config.capital_charges)

    def row(xc, ec, rhs, sense, name):
        return Row(tuple(xc) + (ec,), rhs, sense, name)

    zeros = np.zeros(n)
    rows = [
        row(zeros, 1.0, config.k_lev, ">=", "leverage_floor"),
        row(-charges, 1.0, 0.0, ">=", "capital_floor"),
        row(el, 0.0, config.theta1, "<=", "risk_cap"),
    ]
    if include_haircut_cap:
        rows.append(row(gam, 0.0, config.haircut_cap, "<=", "haircut_cap"))
    polytope = LinearProgram(
        objective=(0.0,) * (n + 1),
        sense="max",
        equalities=(row(np.ones(n), 0.0, 1.0, "==", "budget"),),
        inequalities=tuple(rows),
        bounds=((0.0, 1.0),) * (n + 1),
        names=tuple(f"x{i}" for i in range(n)) + ("e",),
    )
    return InvestProblem(loans, config, include_haircut_cap, polytope, enumerate_scenarios(loans))


def _pick_best(points: np.ndarray, values: np.ndarray) -> int:
    """Index of the best value; ties go to the lexicographically smallest point."""
    best = values.max()
    tied = np.flatnonzero(values >= best - TIE_TOL)
    return int(min(tied, key=lambda i: tuple(points[i])))


def solve_invest(problem: InvestProblem) -> InvestSolution:
    """Global maximiser of the limited-liability payoff by vertex enumeration."""
    vertices = enumerate_vertices(problem.polytope)
    if not vertices:
        raise InfeasibleError(f"Model {problem.model} feasible set is empty", stage="invest")
    V = np.array(vertices)
    n = len(problem.loans)
    values = payoff_surface(V[:, :n], V[:, n], problem.scenarios, problem.config.delta)
    k = _pick_best(V, values)
    decision = InvestmentDecision.from_solver(V[k, :n], V[k, n])
    point = list(decision.weights) + [decision.equity]
    return InvestSolution(
        decision=decision,
        objective_value=float(values[k]),
        binding_constraints=("budget",) + active_constraints(problem.polytope, point),
        vertex_count=len(vertices),
    )


def simplex_grid(n: int, divisions: int) -> np.ndarray:
    """All integer compositions of ``divisions`` into ``n`` parts, scaled to sum to 1."""
    if n == 1:
        return np.array([[1.0]])

    def comps(parts, total):
        if parts == 1:
            return np.array([[total]])
        blocks = []
        for first in range(total + 1):
            rest = comps(parts - 1, total - first)
            blocks.append(np.column_stack([np.full(len(rest), first), rest]))
        return np.vstack(blocks)

    return comps(n, divisions) / divisions


def grid_oracle(problem: InvestProblem, step: float = 0.005) -> InvestSolution:
    """Brute-force search over a simplex grid with equity set to its floor.

    Independent of the vertex solver: it never builds the polytope's vertex
    set, only tests grid points against the model constraints directly.
    """
    if not 0.0 < step <= 0.1:
        raise ValueError(f"grid step must lie in (0, 0.1], got {step}")
    divisions = int(round(1.0 / step))
    loans, cfg = problem.loans, problem.config
    X = simplex_grid(len(loans), divisions)
    charges = np.asarray(cfg.capital_charges)
    e = np.maximum(cfg.k_lev, X @ charges)
    ok = (e <= 1.0 + 1e-12) & (X @ expected_losses(loans) <= cfg.theta1 + 1e-12)
    if problem.include_haircut_cap:
        ok &= X @ np.array([l.haircut for l in loans]) <= cfg.haircut_cap + 1e-12
    if not ok.any():
        raise InfeasibleError("no grid point satisfies the constraints", stage="grid_oracle")
    X, e = X[ok], e[ok]
    values = payoff_surface(X, e, problem.scenarios, cfg.delta)
    k = _pick_best(np.column_stack([X, e]), values)
    decision = InvestmentDecision.from_solver(X[k], e[k])
    assert abs(decision.equity - equity_floor(decision.weights, charges, cfg.k_lev)) < 1e-12
    return InvestSolution(decision, float(values[k]), (), len(X), method=f"grid:{step}")


def with_oracle_gap(solution: InvestSolution, oracle: InvestSolution) -> InvestSolution:
    return replace(solution, oracle_gap=solution.objective_value - oracle.objective_value)
