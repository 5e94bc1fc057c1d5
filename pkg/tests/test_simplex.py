from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from curv.simplex import (INFEASIBLE, OPTIMAL, UNBOUNDED, LinearProgram, check_solution,
                          dual_program, solve, to_lp_text)

F = Fraction


def _linprog(lp):
    c = np.array([float(v) for v in lp.c])
    if lp.sense == "max":
        c = -c
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for row, r, bi in zip(lp.A, lp.relations, lp.b):
        row = [float(a) for a in row]
        if r == "<=":
            A_ub.append(row)
            b_ub.append(float(bi))
        elif r == ">=":
            A_ub.append([-a for a in row])
            b_ub.append(-float(bi))
        else:
            A_eq.append(row)
            b_eq.append(float(bi))
    bnd = {">=0": (0, None), "<=0": (None, 0), "free": (None, None)}
    kw = dict(A_ub=A_ub or None, b_ub=b_ub or None, A_eq=A_eq or None, b_eq=b_eq or None,
              bounds=[bnd[b] for b in lp.bounds], method="highs")
    res = linprog(c, **kw)
    status = {0: OPTIMAL, 2: INFEASIBLE, 3: UNBOUNDED}[res.status]
    if status != OPTIMAL:
        # HiGHS presolve may report "infeasible" for unbounded problems; settle it by a feasibility solve
        feas = linprog(np.zeros_like(c), **kw)
        status = UNBOUNDED if feas.status == 0 else INFEASIBLE
    val = None
    if status == OPTIMAL:
        val = -res.fun if lp.sense == "max" else res.fun
    return status, val


def test_small_max():
    lp = LinearProgram([1], [[1]], [3], ["<="], "max")
    sol = solve(lp)
    assert sol.optimal and sol.value == 3 and sol.y == [1]


def test_infeasible_and_unbounded():
    assert solve(LinearProgram([1], [[1], [1]], [1, 2], ["<=", ">="])).status == INFEASIBLE
    assert solve(LinearProgram([1], [[-1]], [1], ["<="])).status == UNBOUNDED


def test_free_variables_with_and_without_crossover():
    lp = LinearProgram([F(1), F(1)], [[F(1), F(2)], [F(3), F(-1)], [F(1), F(0)]], [F(8), F(3), F(-20)],
                       ["<=", "<=", ">="], "max", ["free", "free"])
    a, b = solve(lp), solve(lp, crossover=False)
    assert a.value == b.value == 5  # vertex x=2, y=3
    assert not check_solution(lp, a) and not check_solution(lp, b)


lp_entries = st.integers(-4, 4)


@st.composite
def random_lps(draw):
    n = draw(st.integers(1, 4))
    m = draw(st.integers(1, 4))
    c = [F(draw(lp_entries)) for _ in range(n)]
    A = [[F(draw(lp_entries)) for _ in range(n)] for _ in range(m)]
    b = [F(draw(st.integers(-5, 8))) for _ in range(m)]
    rel = [draw(st.sampled_from(["<=", ">=", "="])) for _ in range(m)]
    bounds = [draw(st.sampled_from([">=0", "<=0", "free"])) for _ in range(n)]
    sense = draw(st.sampled_from(["max", "min"]))
    return LinearProgram(c, A, b, rel, sense, bounds)


@settings(max_examples=150)
@given(random_lps(), st.booleans())
def test_against_linprog(lp, crossover):
    sol = solve(lp, crossover=crossover)
    status, val = _linprog(lp)
    assert sol.status == status
    if status == OPTIMAL:
        assert float(sol.value) == pytest.approx(val, abs=1e-7)
        assert isinstance(sol.value, F)
        assert check_solution(lp, sol) == []


@settings(max_examples=80)
@given(random_lps())
def test_float_mode_agrees(lp):
    a = solve(lp, exact=True)
    b = solve(lp, exact=False)
    assert a.status == b.status
    if a.optimal:
        assert float(a.value) == pytest.approx(b.value, abs=1e-7)
        assert check_solution(lp, b) == []


@settings(max_examples=80)
@given(random_lps())
def test_negated_objective(lp):
    flipped = LinearProgram([-v for v in lp.c], lp.A, lp.b, lp.relations,
                            "min" if lp.sense == "max" else "max", lp.bounds)
    a, b = solve(lp), solve(flipped)
    assert a.status == b.status
    if a.optimal:
        assert a.value == -b.value


@settings(max_examples=80)
@given(random_lps())
def test_strong_duality(lp):
    sol = solve(lp)
    if not sol.optimal:
        return
    dsol = solve(dual_program(lp))
    assert dsol.optimal and dsol.value == sol.value


def test_lp_text_dump():
    lp = LinearProgram([1, -2], [[1, 1]], [4], ["<="], "min", [">=0", "free"], var_names=["a", "b"])
    text = to_lp_text(lp)
    assert text.startswith("Minimize") and "b free" in text and "End" in text


def test_shape_validation():
    with pytest.raises(ValueError):
        LinearProgram([1, 2], [[1]], [1], ["<="])
    with pytest.raises(ValueError):
        LinearProgram([1], [[1]], [1], ["<"])
