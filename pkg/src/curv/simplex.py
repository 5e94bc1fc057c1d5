"""Dense two-phase tableau simplex with Bland's rule, exact or floating point.

The solver returns a primal vertex together with dual multipliers
``y = d(value)/d(b)``, so at an optimum ``value = b . y`` and the usual
sign conventions hold: for a maximisation, ``<=`` rows get ``y >= 0`` and
``>=`` rows get ``y <= 0``; for a minimisation the signs flip.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .numerics import FLOAT_TOL, as_matrix, as_vector, convert, is_exact_value, zeros

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_RELATIONS = ("<=", "=", ">=")
_BOUNDS = (">=0", "<=0", "free")


@dataclass
class LinearProgram:
    """``sense c.x`` subject to ``A x (relations) b`` and per-variable sign bounds.

    ``bounds[j]`` is one of ``">=0"`` (default), ``"<=0"`` or ``"free"``.
    ``var_names``/``row_names`` are optional labels carried through to
    :class:`LPSolution` and the LP text dump.
    """

    c: Sequence
    A: Sequence[Sequence]
    b: Sequence
    relations: Sequence[str]
    sense: str = "max"
    bounds: Sequence[str] | None = None
    var_names: Sequence | None = None
    row_names: Sequence | None = None

    def __post_init__(self):
        n = len(self.c)
        m = len(self.b)
        if self.sense not in ("max", "min"):
            raise ValueError(f"sense must be 'max' or 'min', got {self.sense!r}")
        if len(self.A) != m or any(len(row) != n for row in self.A):
            raise ValueError("constraint matrix shape does not match c and b")
        if len(self.relations) != m or any(r not in _RELATIONS for r in self.relations):
            raise ValueError(f"relations must be {m} items from {_RELATIONS}")
        if self.bounds is None:
            self.bounds = [">=0"] * n
        if len(self.bounds) != n or any(bd not in _BOUNDS for bd in self.bounds):
            raise ValueError(f"bounds must be {n} items from {_BOUNDS}")

    @property
    def n_vars(self) -> int:
        return len(self.c)

    @property
    def n_rows(self) -> int:
        return len(self.b)

    def is_exact(self) -> bool:
        vals = list(self.c) + list(self.b) + [a for row in self.A for a in row]
        return all(is_exact_value(v) for v in vals)


@dataclass
class LPSolution:
    status: str
    x: list = field(default_factory=list)
    y: list = field(default_factory=list)
    value: object = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    def __init__(self, T, basis, exact, eps):
        self.T = T
        self.basis = basis
        self.exact = exact
        self.eps = eps
        self.iterations = 0

    def pivot(self, r, j):
        T = self.T
        T[r] = T[r] / T[r, j]
        col = T[:, j].copy()
        col[r] = 0
        rows = [i for i in range(T.shape[0]) if col[i] != 0]
        if rows:
            T[rows] = T[rows] - np.outer(col[rows], T[r])
        self.basis[r] = j
        self.iterations += 1

    def run(self, allowed_cols):
        """Bland's rule on the last row as reduced costs (minimisation)."""
        T, eps = self.T, self.eps
        m = T.shape[0] - 1
        while True:
            cost = T[m]
            j = next((j for j in allowed_cols if cost[j] < -eps), None)
            if j is None:
                return OPTIMAL
            best, r = None, None
            for i in range(m):
                a = T[i, j]
                if a > eps:
                    ratio = T[i, -1] / a
                    if (best is None or ratio < best - (0 if self.exact else eps)
                            or (abs(ratio - best) <= (0 if self.exact else eps)
                                and self.basis[i] < self.basis[r])):
                        best, r = ratio, i
            if r is None:
                return UNBOUNDED
            self.pivot(r, j)


@dataclass
class _Standard:
    """``min cost . s`` over ``T[:m, :-1] s = T[:m, -1]``, ``s >= 0``, with bookkeeping."""

    T: np.ndarray
    basis: list
    id_col: list
    art_cols: list
    col_map: list
    flip: list
    cost: np.ndarray
    obj_sign: int


def _standard_form(lp: LinearProgram, exact: bool) -> _Standard:
    n, m = lp.n_vars, lp.n_rows
    c = as_vector(lp.c, exact)
    b = as_vector(lp.b, exact)
    A = as_matrix(lp.A, exact) if m else zeros((0, n), exact)
    one = Fraction(1) if exact else 1.0
    obj_sign = 1 if lp.sense == "min" else -1

    # structural columns: each original variable maps to one or two columns
    col_map = []  # (original index, sign)
    for j, bd in enumerate(lp.bounds):
        if bd == ">=0":
            col_map.append((j, 1))
        elif bd == "<=0":
            col_map.append((j, -1))
        else:
            col_map.append((j, 1))
            col_map.append((j, -1))
    ns = len(col_map)

    rel = list(lp.relations)
    flip = [1] * m
    for i in range(m):
        if b[i] < 0:
            flip[i] = -1
            rel[i] = {"<=": ">=", ">=": "<=", "=": "="}[rel[i]]

    n_slack = sum(1 for r in rel if r != "=")
    n_art = sum(1 for r in rel if r != "<=")
    width = ns + n_slack + n_art + 1
    T = zeros((m + 1, width), exact)
    basis = [0] * m
    id_col = [0] * m
    art_cols = []
    s_next, a_next = ns, ns + n_slack
    for i in range(m):
        for k, (j, sgn) in enumerate(col_map):
            T[i, k] = flip[i] * sgn * A[i, j]
        T[i, -1] = flip[i] * b[i]
        if rel[i] == "<=":
            T[i, s_next] = one
            basis[i] = id_col[i] = s_next
            s_next += 1
        else:
            if rel[i] == ">=":
                T[i, s_next] = -one
                s_next += 1
            T[i, a_next] = one
            basis[i] = id_col[i] = a_next
            art_cols.append(a_next)
            a_next += 1
    cost = zeros(width - 1, exact)
    for k, (j, sgn) in enumerate(col_map):
        cost[k] = obj_sign * sgn * c[j]
    return _Standard(T, basis, id_col, art_cols, col_map, flip, cost, obj_sign)


def _run_phases(std: _Standard, exact: bool, tol: float):
    eps = 0 if exact else tol
    T, basis = std.T, std.basis
    m = T.shape[0] - 1
    width = T.shape[1]
    one = Fraction(1) if exact else 1.0
    tab = _Tableau(T, basis, exact, eps)
    art_set = set(std.art_cols)
    real_cols = [j for j in range(width - 1) if j not in art_set]

    if std.art_cols:
        T[m] = 0
        for j in std.art_cols:
            T[m, j] = one
        for i in range(m):
            if basis[i] in art_set:
                T[m] = T[m] - T[i]
        scale = 1 + (float(np.max(np.abs(T[:m, -1].astype(float)))) if m else 0)
        tab.run(list(range(width - 1)))
        if -T[m, -1] > (0 if exact else tol * scale):
            return INFEASIBLE, tab.iterations
        # drive zero-level artificials out of the basis where possible
        for i in range(m):
            if basis[i] in art_set:
                j = next((j for j in real_cols if abs(T[i, j]) > eps), None)
                if j is not None:
                    tab.pivot(i, j)

    T[m] = 0
    T[m, :-1] = std.cost
    for i in range(m):
        cb = std.cost[basis[i]]
        if cb != 0:
            T[m] = T[m] - cb * T[i]
    return tab.run(real_cols), tab.iterations


def _assemble(lp: LinearProgram, std: _Standard, xs, ys_std, exact: bool, iterations: int) -> LPSolution:
    zero = Fraction(0) if exact else 0.0
    x = [zero] * lp.n_vars
    for k, (j, sgn) in enumerate(std.col_map):
        x[j] += sgn * xs[k]
    y = [std.obj_sign * f * yi for f, yi in zip(std.flip, ys_std)]
    c = as_vector(lp.c, exact)
    value = sum((ci * xi for ci, xi in zip(c, x)), zero)
    if not exact:
        x = [float(v) for v in x]
        y = [float(v) for v in y]
        value = float(value)
    return LPSolution(OPTIMAL, x, y, value, iterations)


def _sparse_solve(rows: list[dict], rhs: list):
    """Exact solution of a square sparse system given as ``{col: value}`` rows (None if singular)."""
    n = len(rows)
    rows = [dict(r) for r in rows]
    rhs = list(rhs)
    pivots = []  # (row, col)
    free_rows = set(range(n))
    for _ in range(n):
        best = None
        for i in free_rows:
            if rows[i] and (best is None or len(rows[i]) < len(rows[best])):
                best = i
        if best is None:
            return None
        r = best
        col = min(rows[r], key=lambda j: (0 if abs(rows[r][j]) == 1 else 1, j))
        piv = rows[r][col]
        free_rows.discard(r)
        for i in list(free_rows):
            a = rows[i].get(col)
            if a is None:
                continue
            f = a / piv
            row_i = rows[i]
            for j, v in rows[r].items():
                nv = row_i.get(j, 0) - f * v
                if nv == 0:
                    row_i.pop(j, None)
                else:
                    row_i[j] = nv
            rhs[i] -= f * rhs[r]
        pivots.append((r, col))
    sol = {}
    for r, col in reversed(pivots):
        acc = rhs[r]
        for j, v in rows[r].items():
            if j != col:
                acc -= v * sol[j]
        sol[col] = acc / rows[r][col]
    return [sol[j] for j in range(n)]


def _crossover(lp: LinearProgram, basis: list, iterations: int):
    """Recompute the vertex for ``basis`` exactly; None unless exactly optimal."""
    std = _standard_form(lp, True)
    T = std.T
    m = T.shape[0] - 1
    if m == 0:
        return None
    cols = {j: k for k, j in enumerate(basis)}
    if len(cols) != m:
        return None
    prow = [{cols[j]: T[i, j] for j in basis if T[i, j] != 0} for i in range(m)]
    xb = _sparse_solve(prow, [T[i, -1] for i in range(m)])
    if xb is None or any(v < 0 for v in xb):
        return None
    drow = [{i: T[i, j] for i in range(m) if T[i, j] != 0} for j in basis]
    ys = _sparse_solve(drow, [std.cost[j] for j in basis])
    if ys is None:
        return None
    art_set = set(std.art_cols)
    for j in range(T.shape[1] - 1):
        if j in art_set:
            continue
        red = std.cost[j] - sum((T[i, j] * ys[i] for i in range(m) if T[i, j] != 0), Fraction(0))
        if red < 0:
            return None
    xs = [Fraction(0)] * (T.shape[1] - 1)
    for k, j in enumerate(basis):
        xs[j] = xb[k]
    return _assemble(lp, std, xs, ys, True, iterations)


def solve(lp: LinearProgram, exact: bool | None = None, tol: float = FLOAT_TOL,
          crossover: bool = True) -> LPSolution:
    """Solve ``lp``; infeasible and unbounded problems are reported via ``status``.

    In exact mode an optimal basis is first located in floating point and
    then verified in rational arithmetic (primal feasibility and reduced
    costs); any failure falls back to the exact tableau.
    """
    if exact is None:
        exact = lp.is_exact()
    if exact and crossover and lp.n_rows:
        fstd = _standard_form(lp, False)
        status, it = _run_phases(fstd, False, tol)
        if status == OPTIMAL:
            sol = _crossover(lp, list(fstd.basis), it)
            if sol is not None:
                return sol
    std = _standard_form(lp, exact)
    status, it = _run_phases(std, exact, tol)
    if status != OPTIMAL:
        return LPSolution(status, iterations=it)
    T, m = std.T, std.T.shape[0] - 1
    zero = Fraction(0) if exact else 0.0
    xs = zeros(T.shape[1] - 1, exact)
    for i in range(m):
        xs[std.basis[i]] = T[i, -1]
    ys = [sum((std.cost[std.basis[k]] * T[k, std.id_col[i]] for k in range(m)), zero) for i in range(m)]
    return _assemble(lp, std, xs, ys, exact, it)


# ---------------------------------------------------------------------------
# certificates


def check_solution(lp: LinearProgram, sol: LPSolution, tol: float = FLOAT_TOL) -> list[str]:
    """Re-verify primal feasibility, dual feasibility and zero duality gap.

    Returns a list of human-readable failures; an empty list certifies
    optimality of ``sol.x`` (and of ``sol.y`` for the dual).
    """
    if not sol.optimal:
        return [f"status is {sol.status}"]
    exact = all(is_exact_value(v) for v in list(sol.x) + list(sol.y)) and lp.is_exact()
    eps = 0 if exact else tol
    conv = lambda v: convert(v, exact)  # noqa: E731
    c = [conv(v) for v in lp.c]
    b = [conv(v) for v in lp.b]
    A = [[conv(a) for a in row] for row in lp.A]
    x = [conv(v) for v in sol.x]
    y = [conv(v) for v in sol.y]
    zero = Fraction(0) if exact else 0.0
    fails = []
    scale = 1 + max([abs(float(v)) for v in b + c] + [0.0])
    for i, row in enumerate(A):
        lhs = sum((a * xi for a, xi in zip(row, x)), zero)
        r, slack = lp.relations[i], lhs - b[i]
        bad = (r == "<=" and slack > eps * scale) or (r == ">=" and slack < -eps * scale) or \
              (r == "=" and abs(slack) > eps * scale)
        if bad:
            fails.append(f"row {i}: {lhs} {r} {b[i]} violated")
    for j, bd in enumerate(lp.bounds):
        if (bd == ">=0" and x[j] < -eps * scale) or (bd == "<=0" and x[j] > eps * scale):
            fails.append(f"var {j}: bound {bd} violated by {x[j]}")
    # dual sign conditions, expressed for a maximisation
    s = 1 if lp.sense == "max" else -1
    for i, r in enumerate(lp.relations):
        yi = s * y[i]
        if (r == "<=" and yi < -eps * scale) or (r == ">=" and yi > eps * scale):
            fails.append(f"dual {i}: sign wrong for {r} row ({y[i]})")
    for j, bd in enumerate(lp.bounds):
        red = s * (c[j] - sum((A[i][j] * y[i] for i in range(len(A))), zero))
        if (bd == ">=0" and red > eps * scale) or (bd == "<=0" and red < -eps * scale) or \
           (bd == "free" and abs(red) > eps * scale):
            fails.append(f"var {j}: reduced cost {red} not dual feasible")
    primal = sum((ci * xi for ci, xi in zip(c, x)), zero)
    dual = sum((bi * yi for bi, yi in zip(b, y)), zero)
    if abs(primal - dual) > eps * (1 + abs(float(primal))):
        fails.append(f"duality gap: primal {primal} vs dual {dual}")
    return fails


def dual_program(lp: LinearProgram) -> LinearProgram:
    """The LP dual, with variables ``y`` in the sign convention of :func:`solve`."""
    maximise = lp.sense == "max"
    n, m = lp.n_vars, lp.n_rows
    bounds = []
    for r in lp.relations:
        if r == "=":
            bounds.append("free")
        elif (r == "<=") == maximise:
            bounds.append(">=0")
        else:
            bounds.append("<=0")
    rels = []
    for bd in lp.bounds:
        if bd == "free":
            rels.append("=")
        elif (bd == ">=0") == maximise:
            rels.append(">=")
        else:
            rels.append("<=")
    At = [[lp.A[i][j] for i in range(m)] for j in range(n)]
    return LinearProgram(c=list(lp.b), A=At, b=list(lp.c), relations=rels,
                         sense="min" if maximise else "max", bounds=bounds,
                         var_names=lp.row_names, row_names=lp.var_names)


def to_lp_text(lp: LinearProgram) -> str:
    """Dump ``lp`` in CPLEX LP format for cross-checking with external solvers."""
    names = [str(v) for v in lp.var_names] if lp.var_names else [f"x{j}" for j in range(lp.n_vars)]
    names = [_lp_ident(s, j) for j, s in enumerate(names)]
    rows = [str(v) for v in lp.row_names] if lp.row_names else [f"c{i}" for i in range(lp.n_rows)]
    rows = [_lp_ident(s, i, "c") for i, s in enumerate(rows)]

    def expr(coefs):
        parts = []
        for a, nm in zip(coefs, names):
            if a == 0:
                continue
            val = float(a)
            sign = "-" if val < 0 else "+"
            parts.append(f"{sign} {abs(val):.17g} {nm}")
        text = " ".join(parts) or "0 x0"
        return text[2:] if text.startswith("+ ") else text

    out = ["Maximize" if lp.sense == "max" else "Minimize", f" obj: {expr(lp.c)}", "Subject To"]
    for i, row in enumerate(lp.A):
        op = {"<=": "<=", ">=": ">=", "=": "="}[lp.relations[i]]
        out.append(f" {rows[i]}: {expr(row)} {op} {float(lp.b[i]):.17g}")
    out.append("Bounds")
    for nm, bd in zip(names, lp.bounds):
        if bd == "free":
            out.append(f" {nm} free")
        elif bd == "<=0":
            out.append(f" -inf <= {nm} <= 0")
    out.append("End")
    return "\n".join(out) + "\n"


def _lp_ident(s: str, i: int, prefix: str = "x") -> str:
    clean = "".join(ch if ch.isalnum() or ch in "_." else "_" for ch in s)
    if not clean or not (clean[0].isalpha() or clean[0] == "_"):
        clean = f"{prefix}{i}_{clean}"
    return clean


def objective_value(lp: LinearProgram, x: Sequence):
    return sum(ci * xi for ci, xi in zip(lp.c, x))


def is_finite_value(v) -> bool:
    return v is not None and (isinstance(v, Fraction) or math.isfinite(v))
