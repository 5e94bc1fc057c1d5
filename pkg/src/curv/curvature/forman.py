"""Forman curvature, its maximisation over 2-cell weights and the max-min dual."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from ..cellcomplex import CellComplex, as_graph, down_laplacian, edge_key, hodge_matrix
from ..numerics import FLOAT_TOL, convert, leq, trace, zeros
from ..simplex import LinearProgram, solve
from ._common import (as_complex, cycle_sign, default_candidates, edge_label, normalise_cycles,
                      omega_vector)
from .certificate import FINITE, INFINITE, CurvatureCertificate


def diagonal_split(A: np.ndarray, omega: Sequence | None = None):
    """Split ``A = Delta + D`` with ``Delta`` minimally diagonally dominant.

    ``D[x, x] = A[x, x] - sum_{y != x} omega(y)/omega(x) |A[x, y]|`` where the
    entry ``A[x, y]`` is ``Ay(x)``. Returns ``(D, Delta)``.
    """
    n = A.shape[0]
    exact = A.dtype == object
    om = list(omega) if omega is not None else [1] * n
    D = zeros((n, n), exact)
    for i in range(n):
        off = sum((om[j] * abs(A[i, j]) for j in range(n) if j != i), Fraction(0) if exact else 0.0)
        D[i, i] = A[i, i] - off / om[i]
    return D, A - D


def is_minimally_diagonally_dominant(A: np.ndarray, omega: Sequence | None = None,
                                     tol: float = FLOAT_TOL) -> bool:
    D, _ = diagonal_split(A, omega)
    return all(abs(D[i, i]) <= (0 if A.dtype == object else tol) for i in range(A.shape[0]))


def forman(c: CellComplex, x, omega: Mapping | None = None, *, dim: int | None = None,
           exact: bool = True):
    """``F_omega(x) = Hx(x) - sum_{y != x} omega(y)/omega(x) |Hy(x)|``."""
    k = c.dim_of(x) if dim is None else dim
    if not c.has_cell(k, x):
        raise KeyError(f"cell {x!r} not in complex")
    H = hodge_matrix(c, k, exact)
    om = omega_vector(c, k, omega, exact)
    i = c.index(k, x)
    off = sum((om[j] * abs(H[i, j]) for j in range(H.shape[0]) if j != i), Fraction(0) if exact else 0.0)
    return H[i, i] - off / om[i]


def forman_all(c: CellComplex, k: int = 1, omega: Mapping | None = None, exact: bool = True) -> dict:
    H = hodge_matrix(c, k, exact)
    D, _ = diagonal_split(H, omega_vector(c, k, omega, exact))
    return {x: D[i, i] for i, x in enumerate(c.cells_of(k))}


# ---------------------------------------------------------------------------
# maximising over 2-cell weights


def max_forman_edge(g, x, candidates=None, omega: Mapping | None = None,
                    exact: bool = True) -> CurvatureCertificate:
    """``max F'_omega(x)`` over non-negative weights on the candidate cycles.

    The absolute values are linearised with one auxiliary ``g(y)`` per
    neighbouring edge. The witness holds the optimal cycle weights ``n`` and
    the dual one-form ``h`` (``h(x) = omega(x)``, ``|h| <= omega``,
    ``delta x . delta h <= 0``) with ``delta delta* h (x) = omega(x) * value``.
    """
    G = as_complex(g)
    graph = as_graph(G)
    xl = edge_label(G, x)
    v, w = G.edge_endpoints(xl)
    if candidates is None:
        candidates = default_candidates(graph, omega, (v, w))
    through = [z for z in normalise_cycles(candidates) if edge_key(v, w) in z.edges()]
    edges = G.cells_of(1)
    label_of = {edge_key(*G.edge_endpoints(e)): e for e in edges}
    om = dict(zip(edges, omega_vector(G, 1, omega, exact)))
    mx = convert(G.m(1, xl), exact)
    dd = down_laplacian(G, 1, exact)
    ix = G.index(1, xl)
    ex = edge_key(v, w)

    coupling = {}  # y -> {z: delta x(z) delta y(z) / m(x)}
    for j, y in enumerate(edges):
        if y != xl and dd[ix, j] != 0:
            coupling.setdefault(y, {})
    for z in through:
        signs = cycle_sign(z)
        for e, s in signs.items():
            y = label_of[e]
            if y != xl:
                coupling.setdefault(y, {})[z] = convert(signs[ex] * s, exact) / mx
    ys = sorted(coupling, key=lambda y: G.index(1, y))
    nz, ny = len(through), len(ys)
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0

    cvec = [om[xl] / mx for _ in through] + [-om[y] for y in ys]
    A, b, rel, names = [], [], [], []
    for t, y in enumerate(ys):
        a = [coupling[y].get(z, zero) for z in through]
        gy = [zero] * ny
        gy[t] = one
        A.append([-ai for ai in a] + gy)
        b.append(dd[ix, G.index(1, y)])
        rel.append(">=")
        names.append(("c-", y))
        A.append(list(a) + gy)
        b.append(-dd[ix, G.index(1, y)])
        rel.append(">=")
        names.append(("c+", y))
    bounds = [">=0"] * nz + ["free"] * ny
    lp = LinearProgram(cvec, A, b, rel, "max", bounds,
                       var_names=[("n", z) for z in through] + [("g", y) for y in ys], row_names=names)
    sol = solve(lp, exact=exact)
    if not sol.optimal:
        return CurvatureCertificate(xl, None, "max_forman", INFINITE, {"lp_status": sol.status})
    total = sol.value + om[xl] * dd[ix, ix]
    n = {z: sol.x[i] for i, z in enumerate(through)}
    h = {y: zero for y in edges}
    h[xl] = om[xl]
    for t, y in enumerate(ys):
        h[y] = sol.y[2 * t] - sol.y[2 * t + 1]
    return CurvatureCertificate(xl, total / om[xl], "max_forman", FINITE,
                                {"n": n, "h": h, "lp": lp, "lp_solution": sol})


def oneform_value(G: CellComplex, x, h: Mapping, exact: bool = True):
    """``delta delta* h (x)`` on the 1-skeleton of ``G``."""
    dd = down_laplacian(G, 1, exact)
    ix = G.index(1, x)
    return sum((dd[ix, G.index(1, y)] * convert(val, exact) for y, val in h.items()),
               Fraction(0) if exact else 0.0)


def check_oneform(G: CellComplex, x, h: Mapping, cycles, omega: Mapping | None = None,
                  exact: bool = True) -> list[str]:
    """Feasibility failures of ``h`` for the one-form program over ``cycles`` through ``x``."""
    edges = G.cells_of(1)
    om = dict(zip(edges, omega_vector(G, 1, omega, exact)))
    label_of = {edge_key(*G.edge_endpoints(e)): e for e in edges}
    fails = []
    hx = convert(h.get(x, 0), exact)
    if hx != om[x] if exact else abs(hx - om[x]) > FLOAT_TOL:
        fails.append(f"h(x) = {hx} != omega(x) = {om[x]}")
    for y, val in h.items():
        if not leq(abs(convert(val, exact)), om[y]):
            fails.append(f"|h({y})| = {abs(val)} exceeds omega = {om[y]}")
    ex = edge_key(*G.edge_endpoints(x))
    for z in normalise_cycles(cycles):
        signs = cycle_sign(z)
        if ex not in signs:
            continue
        dh = sum((s * convert(h.get(label_of[e], 0), exact) for e, s in signs.items()),
                 Fraction(0) if exact else 0.0)
        if not leq(signs[ex] * dh, 0):
            fails.append(f"delta x . delta h = {signs[ex] * dh} > 0 on {z}")
    return fails


# ---------------------------------------------------------------------------
# max-min Forman curvature and its dual operator J


def maxmin_forman(g, k: int = 1, candidates=None, omega: Mapping | None = None,
                  exact: bool = True) -> CurvatureCertificate:
    """``max_{K'} min_x F'_omega(x)`` over non-negative candidate 2-cell weights.

    The witness carries the optimal weights ``n``, the dual operator ``J``
    (a matrix indexed by ``edges``, entry ``[x, y] = Jy(x)``) assembled from
    the LP multipliers, and ``dual_value = Tr(delta delta* J)``.
    """
    if k != 1:
        raise ValueError("max-min Forman curvature is implemented for edges (k = 1)")
    G = as_complex(g)
    graph = as_graph(G)
    if candidates is None:
        candidates = default_candidates(graph, omega)
    Z = normalise_cycles(candidates)
    edges = G.cells_of(1)
    ne = len(edges)
    label_of = {edge_key(*G.edge_endpoints(e)): e for e in edges}
    om = omega_vector(G, 1, omega, exact)
    mvec = [convert(G.m(1, e), exact) for e in edges]
    dd = down_laplacian(G, 1, exact)
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0

    # signs[z][i] = delta x_i (z)
    signs = []
    for z in Z:
        row = {}
        for e, s in cycle_sign(z).items():
            row[G.index(1, label_of[e])] = s
        signs.append(row)
    share = set()
    for row in signs:
        for i in row:
            for j in row:
                if i != j:
                    share.add((i, j))
    pairs = sorted({(i, j) for i in range(ne) for j in range(ne)
                    if i != j and (dd[i, j] != 0 or (i, j) in share)})
    ip = lambda i, j: mvec[i] * dd[i, j]  # noqa: E731 -- <delta* x_i, delta* x_j>

    nZ, nP = len(Z), len(pairs)
    nvar = 1 + nZ + nP
    pidx = {p: 1 + nZ + t for t, p in enumerate(pairs)}
    A, b, rel, names = [], [], [], []
    for i in range(ne):
        row = [zero] * nvar
        row[0] = -mvec[i] * om[i]
        for t, s in enumerate(signs):
            if i in s:
                row[1 + t] = om[i] * one
        for (a, j), col in pidx.items():
            if a == i:
                row[col] = -om[j]
        A.append(row)
        b.append(-om[i] * ip(i, i))
        rel.append(">=")
        names.append(("R", edges[i]))
    for (i, j) in pairs:
        coup = [((s[i] * s[j]) * one if i in s and j in s else zero) for s in signs]
        for tag, sgn in (("c-", -1), ("c+", 1)):
            row = [zero] * nvar
            for t, cf in enumerate(coup):
                row[1 + t] = sgn * cf
            row[pidx[(i, j)]] = one
            A.append(row)
            b.append(-sgn * ip(i, j))
            rel.append(">=")
            names.append((tag, edges[i], edges[j]))
    cvec = [one] + [zero] * (nZ + nP)
    bounds = ["free"] + [">=0"] * nZ + ["free"] * nP
    lp = LinearProgram(cvec, A, b, rel, "max", bounds,
                       var_names=["R"] + [("n", z) for z in Z] + [("g", edges[i], edges[j]) for i, j in pairs],
                       row_names=names)
    sol = solve(lp, exact=exact)
    if not sol.optimal:
        return CurvatureCertificate(None, None, "maxmin_forman", INFINITE, {"lp_status": sol.status})
    n = {z: sol.x[1 + t] for t, z in enumerate(Z)}
    J = zeros((ne, ne), exact)
    for i in range(ne):
        J[i, i] = -mvec[i] * om[i] * sol.y[i]
    for t, (i, j) in enumerate(pairs):
        c_minus, c_plus = sol.y[ne + 2 * t], sol.y[ne + 2 * t + 1]
        J[i, j] = mvec[j] * (c_minus - c_plus)
    dual_value = trace(dd @ J)
    return CurvatureCertificate(None, sol.value, "maxmin_forman", FINITE,
                                {"n": n, "J": J, "edges": edges, "cycles": Z,
                                 "dual_value": dual_value, "lp": lp, "lp_solution": sol})


def condition_a(J: np.ndarray, m: Sequence, omega: Sequence | None = None) -> bool:
    """``Jx(x)/(m(x) omega(x)) >= |Jy(x)|/(m(y) omega(y))`` for all ``x, y``."""
    n = J.shape[0]
    om = list(omega) if omega is not None else [1] * n
    for i in range(n):
        diag = J[i, i] / (m[i] * om[i])
        for j in range(n):
            if not leq(abs(J[i, j]) / (m[j] * om[j]), diag):
                return False
    return True


def check_condition_a_prime(J: np.ndarray, m: Sequence, omega: Sequence | None = None) -> bool:
    """``Jf(x) >= 0`` whenever ``2 <x, omega f> >= ||f||_{omega,1}``.

    Evaluated on the generating family ``f = x/(m omega)(x) +- y/(m omega)(y)``
    together with ``f = x/(m omega)(x)``.
    """
    n = J.shape[0]
    om = list(omega) if omega is not None else [1] * n
    exact = J.dtype == object
    for i in range(n):
        for j in range(n):
            for sgn in ((1,) if i == j else (1, -1)):
                f = [Fraction(0) if exact else 0.0] * n
                f[i] = f[i] + 1 / (convert(m[i], exact) * om[i]) if exact else 1 / (m[i] * om[i])
                if i != j:
                    f[j] = sgn / (m[j] * om[j])
                lhs = 2 * m[i] * om[i] * f[i]
                norm = sum(m[t] * abs(om[t] * f[t]) for t in range(n))
                if not leq(norm, lhs):
                    continue
                Jf = sum(J[i, t] * f[t] for t in range(n))
                if not leq(0, Jf):
                    return False
    return True


def condition_b(J: np.ndarray, delta: np.ndarray, m: Sequence) -> list:
    """Diagonal of ``delta J delta*`` (unit 2-cell weights); all entries must be ``<= 0``."""
    exact = J.dtype == object
    adj = zeros((delta.shape[1], delta.shape[0]), exact)
    for (zi, xi), s in np.ndenumerate(delta):
        if s != 0:
            adj[xi, zi] = s / m[xi] if exact else s / float(m[xi])
    P = delta @ J @ adj
    return [P[i, i] for i in range(P.shape[0])]


def cycle_coboundary(G: CellComplex, cycles, exact: bool = True) -> np.ndarray:
    """``delta: C(X_1) -> C(cycles)`` for candidate cycles on the 1-skeleton of ``G``."""
    Z = normalise_cycles(cycles)
    edges = G.cells_of(1)
    label_of = {edge_key(*G.edge_endpoints(e)): e for e in edges}
    D = zeros((len(Z), len(edges)), exact)
    for r, z in enumerate(Z):
        for e, s in cycle_sign(z).items():
            D[r, G.index(1, label_of[e])] = s
    return D


def check_maxmin_dual(g, J: np.ndarray, candidates=None, omega: Mapping | None = None,
                      exact: bool = True) -> dict:
    """Evaluate conditions (a), (a'), (b), (c) and ``Tr(delta delta* J)`` for a candidate J."""
    G = as_complex(g)
    if candidates is None:
        candidates = default_candidates(as_graph(G), omega)
    m = [convert(G.m(1, e), exact) for e in G.cells_of(1)]
    om = omega_vector(G, 1, omega, exact)
    J = np.asarray(J, dtype=object if exact else float)
    if exact:
        J = np.vectorize(lambda v: convert(v, True), otypes=[object])(J)
    delta = cycle_coboundary(G, candidates, exact)
    diag_b = condition_b(J, delta, m)
    tr = trace(J)
    return {
        "a": condition_a(J, m, om),
        "a_prime": check_condition_a_prime(J, m, om),
        "b": all(leq(val, 0) for val in diag_b),
        "c": (tr == 1) if exact else abs(tr - 1) <= FLOAT_TOL,
        "objective": trace(down_laplacian(G, 1, exact) @ J),
    }
