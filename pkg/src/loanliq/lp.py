"""
Small dense linear programming.

``solve_lp`` is a two-phase tableau simplex with Bland's pivoting rule, so a
given problem always follows the same pivot path. Problems here have a
handful of variables; clarity and determinism matter more than speed.

``enumerate_vertices`` lists every extreme point of the feasible polytope by
solving each full-rank active set. It doubles as an independent check on
``solve_lp`` and as the exact maximiser of convex objectives.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

FEAS_TOL = 1e-9
DEDUP_TOL = 1e-8
OPT_TOL = 1e-8
PIVOT_TOL = 1e-12
MAX_VERTEX_VARS = 12

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
NUMERICAL_FAILURE = "numerical_failure"


@dataclass(frozen=True)
class Row:
    coeffs: tuple[float, ...]
    rhs: float
    sense: str = "<="
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if self.sense not in ("<=", ">=", "=="):
            raise ValueError(f"unknown row sense {self.sense!r}")

    def value(self, x) -> float:
        return float(np.dot(self.coeffs, x))

    def violation(self, x) -> float:
        lhs = self.value(x)
        if self.sense == "<=":
            return max(lhs - self.rhs, 0.0)
        if self.sense == ">=":
            return max(self.rhs - lhs, 0.0)
        return abs(lhs - self.rhs)


@dataclass(frozen=True)
class LinearProgram:
    """``min`` or ``max`` of ``objective . x`` over rows and box bounds.

    Bounds default to ``[0, inf)``; use ``-math.inf`` / ``math.inf`` for
    missing sides.
    """

    objective: tuple[float, ...]
    sense: str = "min"
    equalities: tuple[Row, ...] = ()
    inequalities: tuple[Row, ...] = ()
    bounds: tuple[tuple[float, float], ...] | None = None
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        n = len(self.objective)
        object.__setattr__(self, "objective", tuple(float(c) for c in self.objective))
        eqs = tuple(r if r.sense == "==" else Row(r.coeffs, r.rhs, "==", r.name) for r in self.equalities)
        object.__setattr__(self, "equalities", eqs)
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        for r in eqs + self.inequalities:
            if len(r.coeffs) != n:
                raise ValueError(f"dimension mismatch: row {r.name or r} has {len(r.coeffs)} coefficients, objective has {n}")
        for r in self.inequalities:
            if r.sense == "==":
                raise ValueError("equality rows belong in `equalities`")
        bounds = self.bounds if self.bounds is not None else tuple((0.0, math.inf) for _ in range(n))
        bounds = tuple((float(lo), float(hi)) for lo, hi in bounds)
        if len(bounds) != n:
            raise ValueError(f"dimension mismatch: {len(bounds)} bounds for {n} variables")
        for j, (lo, hi) in enumerate(bounds):
            if lo > hi:
                raise ValueError(f"bound on variable {j}: lower {lo} exceeds upper {hi}")
        object.__setattr__(self, "bounds", bounds)
        names = self.names if self.names is not None else tuple(f"x{j}" for j in range(n))
        if len(names) != n:
            raise ValueError("one name per variable required")
        object.__setattr__(self, "names", tuple(names))

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def all_rows(self) -> list[Row]:
        """Rows plus finite bounds expressed as rows, in a fixed order."""
        rows = list(self.equalities) + list(self.inequalities)
        n = self.n_vars
        for j, (lo, hi) in enumerate(self.bounds):
            unit = tuple(1.0 if k == j else 0.0 for k in range(n))
            if lo == hi:
                rows.append(Row(unit, lo, "==", f"fix:{self.names[j]}"))
                continue
            if math.isfinite(lo):
                rows.append(Row(unit, lo, ">=", f"lb:{self.names[j]}"))
            if math.isfinite(hi):
                rows.append(Row(unit, hi, "<=", f"ub:{self.names[j]}"))
        return rows

    def max_violation(self, x) -> float:
        return max((r.violation(x) for r in self.all_rows()), default=0.0)

    def objective_value(self, x) -> float:
        return float(np.dot(self.objective, x))

    def with_rows(self, *rows: Row) -> "LinearProgram":
        return LinearProgram(
            self.objective, self.sense, self.equalities, self.inequalities + tuple(rows), self.bounds, self.names
        )


@dataclass(frozen=True)
class LpSolution:
    status: str
    point: tuple[float, ...] | None = None
    objective_value: float | None = None
    active_constraints: tuple[str, ...] = ()
    iterations: int = 0

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def _pivot(tab: np.ndarray, rhs: np.ndarray, row: int, col: int) -> None:
    piv = tab[row, col]
    tab[row] /= piv
    rhs[row] /= piv
    for i in range(tab.shape[0]):
        if i != row:
            f = tab[i, col]
            if f != 0.0:
                tab[i] -= f * tab[row]
                rhs[i] -= f * rhs[row]
    tab[row, col] = 1.0


def _simplex(tab, rhs, cost, basis, allowed, max_iter):
    """Primal simplex with Bland's rule on a tableau already in canonical form."""
    it = 0
    while it < max_iter:
        reduced = cost - cost[basis] @ tab
        enter = next((j for j in allowed if reduced[j] < -PIVOT_TOL), None)
        if enter is None:
            return OPTIMAL, it
        col = tab[:, enter]
        best_row, best_ratio = None, math.inf
        for i in range(tab.shape[0]):
            if col[i] > PIVOT_TOL:
                ratio = rhs[i] / col[i]
                if ratio < best_ratio - 1e-15 or (
                    abs(ratio - best_ratio) <= 1e-15 and basis[i] < basis[best_row]
                ):
                    best_row, best_ratio = i, ratio
        if best_row is None:
            return UNBOUNDED, it
        _pivot(tab, rhs, best_row, enter)
        basis[best_row] = enter
        it += 1
    return NUMERICAL_FAILURE, it


def _to_standard_form(problem: LinearProgram):
    """Map ``x = offset + M y`` with ``y >= 0`` and build ``A y (op) b`` rows."""
    n = problem.n_vars
    cols = []  # (original var, sign)
    offset = np.zeros(n)
    rows = []
    for j, (lo, hi) in enumerate(problem.bounds):
        if math.isfinite(lo):
            offset[j] = lo
            cols.append((j, 1.0))
            if math.isfinite(hi):
                rows.append(({len(cols) - 1: 1.0}, hi - lo, "<="))
        elif math.isfinite(hi):
            offset[j] = hi
            cols.append((j, -1.0))
        else:
            cols.append((j, 1.0))
            cols.append((j, -1.0))
    M = np.zeros((n, len(cols)))
    for k, (j, s) in enumerate(cols):
        M[j, k] = s
    A_rows, b, senses = [], [], []
    for coeffs, rhs, sense in rows:
        a = np.zeros(len(cols))
        for k, v in coeffs.items():
            a[k] = v
        A_rows.append(a)
        b.append(rhs)
        senses.append(sense)
    for r in list(problem.equalities) + list(problem.inequalities):
        a = np.asarray(r.coeffs)
        A_rows.append(a @ M)
        b.append(r.rhs - float(a @ offset))
        senses.append(r.sense)
    c = np.asarray(problem.objective) @ M
    return M, offset, np.array(A_rows).reshape(len(A_rows), len(cols)), np.array(b, dtype=float), senses, c


def _solve_raw(problem: LinearProgram, max_iter: int = 5000):
    M, offset, A, b, senses, c = _to_standard_form(problem)
    m, ny = A.shape
    if problem.sense == "max":
        c = -c

    A = A.copy()
    b = b.copy()
    senses = list(senses)
    for i in range(m):
        if b[i] < 0:
            A[i] *= -1.0
            b[i] *= -1.0
            senses[i] = {"<=": ">=", ">=": "<=", "==": "=="}[senses[i]]

    n_slack = sum(s != "==" for s in senses)
    n_art = sum(s != "<=" for s in senses)
    N = ny + n_slack + n_art
    tab = np.zeros((m, N))
    tab[:, :ny] = A
    basis = [0] * m
    art_cols = []
    k_slack, k_art = ny, ny + n_slack
    for i, s in enumerate(senses):
        if s == "<=":
            tab[i, k_slack] = 1.0
            basis[i] = k_slack
            k_slack += 1
        elif s == ">=":
            tab[i, k_slack] = -1.0
            k_slack += 1
        if s != "<=":
            tab[i, k_art] = 1.0
            basis[i] = k_art
            art_cols.append(k_art)
            k_art += 1
    rhs = b.copy()
    iters = 0

    if art_cols:
        cost1 = np.zeros(N)
        cost1[art_cols] = 1.0
        status, it = _simplex(tab, rhs, cost1, basis, range(N), max_iter)
        iters += it
        if status != OPTIMAL:
            return NUMERICAL_FAILURE, None, iters, None
        if float(cost1[basis] @ rhs) > FEAS_TOL:
            return INFEASIBLE, None, iters, None
        # drive zero-level artificials out of the basis; drop redundant rows
        art = set(art_cols)
        keep = []
        for i in range(m):
            if basis[i] in art:
                j = next((j for j in range(ny + n_slack) if abs(tab[i, j]) > 1e-9), None)
                if j is None:
                    continue
                _pivot(tab, rhs, i, j)
                basis[i] = j
            keep.append(i)
        tab = tab[keep][:, : ny + n_slack]
        rhs = rhs[keep]
        basis = [basis[i] for i in keep]
        N = ny + n_slack

    cost2 = np.zeros(N)
    cost2[:ny] = c
    status, it = _simplex(tab, rhs, cost2, basis, range(N), max_iter)
    iters += it
    if status != OPTIMAL:
        return status, None, iters, None
    y = np.zeros(N)
    y[basis] = rhs
    x = offset + M @ y[:ny]
    reduced = cost2 - cost2[basis] @ tab
    nonbasic = [j for j in range(N) if j not in set(basis)]
    degenerate_optimum = any(abs(reduced[j]) <= PIVOT_TOL for j in nonbasic)
    return OPTIMAL, x, iters, degenerate_optimum


def active_constraints(problem: LinearProgram, x) -> tuple[str, ...]:
    """Names of inequality rows and bounds met with equality at ``x``."""
    out = []
    for i, r in enumerate(problem.inequalities):
        if abs(r.value(x) - r.rhs) <= FEAS_TOL:
            out.append(r.name or f"row{i}")
    for j, (lo, hi) in enumerate(problem.bounds):
        if math.isfinite(lo) and abs(x[j] - lo) <= FEAS_TOL:
            out.append(f"lb:{problem.names[j]}")
        if math.isfinite(hi) and abs(x[j] - hi) <= FEAS_TOL:
            out.append(f"ub:{problem.names[j]}")
    return tuple(out)


def _polish(problem: LinearProgram, x: np.ndarray, opt: float, slack: float) -> np.ndarray:
    """Snap a point found under slackened cuts onto the vertex of ``problem`` it sits next to."""
    rows = [r for r in problem.all_rows() if abs(r.value(x) - r.rhs) <= 1e-7]
    if not rows:
        return x
    A = np.array([r.coeffs for r in rows]).reshape(len(rows), problem.n_vars)
    if np.linalg.matrix_rank(A, tol=1e-10) < problem.n_vars:
        return x
    y = np.linalg.lstsq(A, np.array([r.rhs for r in rows]), rcond=None)[0]
    worse = problem.objective_value(y) - opt
    if problem.sense == "max":
        worse = -worse
    if problem.max_violation(y) <= problem.max_violation(x) + 1e-15 and worse <= slack:
        return y
    return x


def solve_lp(problem: LinearProgram, lexicographic: bool = True) -> LpSolution:
    """Solve a linear program.

    When the optimum is not unique and ``lexicographic`` is set, the returned
    point is the lexicographically smallest optimal vertex (within the
    optimality tolerance).
    """
    status, x, iters, degenerate = _solve_raw(problem)
    if status != OPTIMAL:
        return LpSolution(status, iterations=iters)

    if lexicographic and degenerate:
        opt = problem.objective_value(x)
        slack = OPT_TOL * 1e-2 * max(1.0, abs(opt))
        cut = Row(problem.objective, opt + slack if problem.sense == "min" else opt - slack,
                  "<=" if problem.sense == "min" else ">=", "__objective")
        refined = problem.with_rows(cut)
        for j in range(problem.n_vars):
            unit = tuple(1.0 if k == j else 0.0 for k in range(problem.n_vars))
            sub = LinearProgram(unit, "min", refined.equalities, refined.inequalities, refined.bounds, refined.names)
            s2, x2, it2, _ = _solve_raw(sub)
            iters += it2
            if s2 != OPTIMAL:
                break
            x = x2
            refined = refined.with_rows(Row(unit, x2[j] + slack, "<=", f"__lex{j}"))

        x = _polish(problem, x, opt, slack)

    if problem.max_violation(x) > FEAS_TOL:
        return LpSolution(NUMERICAL_FAILURE, tuple(x.tolist()), iterations=iters)
    x = np.where(np.abs(x) < 1e-15, 0.0, x)
    return LpSolution(OPTIMAL, tuple(x.tolist()), problem.objective_value(x), active_constraints(problem, x), iters)


def enumerate_vertices(problem: LinearProgram) -> list[tuple[float, ...]]:
    """All extreme points of the feasible set, sorted lexicographically."""
    n = problem.n_vars
    if n > MAX_VERTEX_VARS:
        raise ValueError(f"vertex enumeration limited to {MAX_VERTEX_VARS} variables, got {n}")
    rows = problem.all_rows()
    eq = [r for r in rows if r.sense == "=="]
    cand = [r for r in rows if r.sense != "=="]

    # keep a linearly independent subset of the equality rows
    basis_rows: list[Row] = []
    for r in eq:
        trial = np.array([b.coeffs for b in basis_rows + [r]])
        if np.linalg.matrix_rank(trial, tol=1e-10) == len(basis_rows) + 1:
            basis_rows.append(r)
    # dependent-but-inconsistent equalities leave every candidate infeasible
    k = n - len(basis_rows)
    if k < 0:
        return []

    found: list[np.ndarray] = []
    for combo in itertools.combinations(cand, k):
        sys_rows = basis_rows + list(combo)
        A = np.array([r.coeffs for r in sys_rows]).reshape(len(sys_rows), n)
        b = np.array([r.rhs for r in sys_rows])
        if np.linalg.matrix_rank(A, tol=1e-10) < n:
            continue
        x = np.linalg.solve(A, b)
        if problem.max_violation(x) > FEAS_TOL:
            continue
        if any(np.max(np.abs(x - v)) <= DEDUP_TOL for v in found):
            continue
        found.append(np.where(np.abs(x) < 1e-15, 0.0, x))
    found.sort(key=lambda v: tuple(v))
    return [tuple(v.tolist()) for v in found]
