import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from loanliq.lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    Row,
    enumerate_vertices,
    solve_lp,
)


def _scipy(problem: LinearProgram):
    sign = 1.0 if problem.sense == "min" else -1.0
    A_ub, b_ub = [], []
    for r in problem.inequalities:
        s = 1.0 if r.sense == "<=" else -1.0
        A_ub.append([s * c for c in r.coeffs])
        b_ub.append(s * r.rhs)
    A_eq = [r.coeffs for r in problem.equalities] or None
    b_eq = [r.rhs for r in problem.equalities] or None
    bounds = [(lo if math.isfinite(lo) else None, hi if math.isfinite(hi) else None) for lo, hi in problem.bounds]
    return linprog(sign * np.array(problem.objective), A_ub=A_ub or None, b_ub=b_ub or None,
                   A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")


def test_small_textbook_lp():
    # max 3x + 2y st x + y <= 4, x + 3y <= 6, x <= 3
    lp = LinearProgram((3, 2), "max", inequalities=(Row((1, 1), 4, "<="), Row((1, 3), 6, "<=")),
                       bounds=((0, 3), (0, math.inf)))
    sol = solve_lp(lp)
    assert sol.status == OPTIMAL
    assert sol.point == pytest.approx((3.0, 1.0))
    assert sol.objective_value == pytest.approx(11.0)


def test_infeasible_and_unbounded():
    lp = LinearProgram((1, 1), inequalities=(Row((1, 1), 1, "<="), Row((1, 1), 2, ">=")))
    assert solve_lp(lp).status == INFEASIBLE
    lp = LinearProgram((1, 1), "max", inequalities=(Row((1, -1), 1, "<="),))
    assert solve_lp(lp).status == UNBOUNDED


def test_free_and_negative_bounds():
    lp = LinearProgram((1, 0), "min", inequalities=(Row((1, 1), -3, ">="), Row((0, 1), 1, "<=")),
                       bounds=((-math.inf, math.inf), (-2, 5)))
    sol = solve_lp(lp)
    assert sol.ok
    assert sol.point == pytest.approx((-4.0, 1.0))


def test_degenerate_ties_resolve_lexicographically():
    # every point on x + y = 1 is optimal for min 0
    lp = LinearProgram((0, 0), equalities=(Row((1, 1), 1, "=="),), bounds=((0, 1), (0, 1)))
    assert solve_lp(lp).point == pytest.approx((0.0, 1.0))


def test_determinism():
    rng = np.random.default_rng(7)
    A = rng.uniform(-1, 1, (5, 4))
    lp = LinearProgram(tuple(rng.uniform(-1, 1, 4)), inequalities=tuple(Row(tuple(a), 1.0) for a in A),
                       bounds=((0, 2),) * 4)
    first = solve_lp(lp)
    for _ in range(5):
        again = solve_lp(lp)
        assert again.point == first.point and again.iterations == first.iterations


def test_vertices_of_unit_square():
    lp = LinearProgram((0, 0), bounds=((0, 1), (0, 1)))
    assert enumerate_vertices(lp) == [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]


def test_vertex_limit():
    with pytest.raises(ValueError):
        enumerate_vertices(LinearProgram((0,) * 13, bounds=((0, 1),) * 13))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        LinearProgram((1, 2), inequalities=(Row((1, 2, 3), 1),))


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 4), m=st.integers(1, 4), neq=st.integers(0, 1))
def test_matches_highs_and_vertex_enumeration(seed, n, m, neq):
    rng = np.random.default_rng(seed)
    ineq = tuple(Row(tuple(rng.integers(-3, 4, n).astype(float)), float(rng.integers(-2, 5)),
                     rng.choice(["<=", ">="])) for _ in range(m))
    eqs = tuple(Row(tuple(rng.integers(0, 3, n).astype(float)), float(rng.integers(1, 4)), "==") for _ in range(neq))
    lp = LinearProgram(tuple(rng.integers(-5, 6, n).astype(float)), rng.choice(["min", "max"]),
                       eqs, ineq, bounds=((0, float(rng.integers(1, 4))),) * n)
    ref = _scipy(lp)
    sol = solve_lp(lp)
    verts = enumerate_vertices(lp)
    if ref.status == 2:
        assert sol.status == INFEASIBLE
        assert verts == []
        return
    assert ref.status == 0
    assert sol.status == OPTIMAL
    assert lp.max_violation(sol.point) <= 1e-9
    ref_val = ref.fun if lp.sense == "min" else -ref.fun
    assert sol.objective_value == pytest.approx(ref_val, abs=1e-8)
    vals = [lp.objective_value(v) for v in verts]
    best = min(vals) if lp.sense == "min" else max(vals)
    assert sol.objective_value == pytest.approx(best, abs=1e-8)
    assert tuple(sol.point) in [tuple(v) for v in verts] or any(
        np.allclose(sol.point, v, atol=1e-8) for v in verts
    )
