"""Ollivier curvature as a potential LP and as a one-form LP."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from ..cellcomplex import CellComplex, coboundary_matrix, down_laplacian, edge_key
from ..metric import DegenerateOmegaError, find_degenerate_edge
from ..numerics import convert
from ..simplex import LinearProgram, solve
from ._common import as_complex, default_candidates, edge_label, omega_vector
from .certificate import FINITE, INFINITE, CurvatureCertificate, MissingCycleError


def _edge_omega(c: CellComplex, omega: Mapping | None):
    if omega is None:
        return None
    return {edge_key(*c.edge_endpoints(e)): omega[e] if e in omega else omega[edge_key(*c.edge_endpoints(e))]
            for e in c.cells_of(1)}


def ollivier_cell(c, x, omega: Mapping | None = None, *, dim: int | None = None,
                  exact: bool = True, check_degenerate: bool = True) -> CurvatureCertificate:
    """``kappa_omega(x) = inf { delta delta* delta f (x) : delta f(x) = omega(x), |delta f| <= omega } / omega(x)``.

    ``f`` ranges over cochains one dimension below ``x``. For edges the LP
    lives on the connected component of ``x`` with ``f`` pinned to zero at
    the tail. An empty constraint set gives status ``"infinite"``.
    """
    c = as_complex(c)
    if dim is None:
        k = 1 if c.dim >= 1 and _is_pair(c, x) else c.dim_of(x)
    else:
        k = dim
    if k < 1:
        raise ValueError("Ollivier curvature is defined on cells of dimension >= 1")
    if k == 1:
        x = edge_label(c, x)
        if omega is not None and check_degenerate:
            bad = find_degenerate_edge(c.one_skeleton(), _edge_omega(c, omega))
            if bad is not None:
                raise DegenerateOmegaError(bad)
    elif not c.has_cell(k, x):
        raise KeyError(f"cell {x!r} not in complex")
    om = omega_vector(c, k, omega, exact)
    delta = coboundary_matrix(c, k - 1, exact)
    dd = down_laplacian(c, k, exact)
    ix = c.index(k, x)
    zero = Fraction(0) if exact else 0.0

    if k == 1:
        comp = c.one_skeleton().component(c.edge_endpoints(x)[0])
        rows = [i for i, e in enumerate(c.cells_of(1)) if c.edge_endpoints(e)[0] in comp]
        tail = c.edge_endpoints(x)[0]
        cols = [c.index(0, v) for v in c.cells_of(0) if v in comp and v != tail]
    else:
        rows = list(range(c.n_cells(k)))
        cols = list(range(c.n_cells(k - 1)))
        cols = [j for j in cols if any(delta[i, j] != 0 for i in rows)]

    obj = [sum((dd[ix, y] * delta[y, j] for y in rows), zero) for j in cols]
    A, b, rel = [], [], []
    for y in rows:
        coef = [delta[y, j] for j in cols]
        if y == ix:
            A.append(coef)
            b.append(om[y])
            rel.append("=")
            continue
        if all(a == 0 for a in coef):
            continue
        A.append(coef)
        b.append(om[y])
        rel.append("<=")
        A.append(coef)
        b.append(-om[y])
        rel.append(">=")
    labels = c.cells_of(k - 1)
    lp = LinearProgram(obj, A, b, rel, "min", ["free"] * len(cols),
                       var_names=[("f", labels[j]) for j in cols])
    sol = solve(lp, exact=exact)
    method = "potential"
    if not sol.optimal:
        return CurvatureCertificate(x, None, method, INFINITE, {"lp_status": sol.status, "lp": lp})
    f = {lab: zero for lab in labels} if k > 1 else {v: zero for v in c.cells_of(0)
                                                      if v in comp}
    for t, j in enumerate(cols):
        f[labels[j]] = sol.x[t]
    return CurvatureCertificate(x, sol.value / om[ix], method, FINITE, {"f": f, "lp": lp, "lp_solution": sol})


def _is_pair(c: CellComplex, x) -> bool:
    try:
        edge_label(c, x)
        return True
    except (KeyError, TypeError, ValueError):
        return False


def ollivier_edge(c, x, omega: Mapping | None = None, *, exact: bool = True,
                  check_degenerate: bool = True) -> CurvatureCertificate:
    return ollivier_cell(c, x, omega, dim=1, exact=exact, check_degenerate=check_degenerate)


def two_cells_through(c: CellComplex, x) -> dict:
    """``{2-cell: {edge key: sign}}`` for the 2-cells of ``c`` containing edge ``x``."""
    if c.dim < 2:
        return {}
    out = {}
    for z in c.cofacets(1, x):
        out[z] = {edge_key(*c.edge_endpoints(e)): s for e, s in c.facets(2, z).items()}
    return out


def ollivier_oneform(c, x, omega: Mapping | None = None, *, exact: bool = True,
                     require_cycles: bool = True) -> CurvatureCertificate:
    """``omega(x) kappa_omega(x) = inf delta delta* h (x)`` over ``h(x) = omega(x)``,
    ``|h| <= omega`` and ``delta x . delta h <= 0`` on the 2-cells through ``x``.

    Raises :class:`MissingCycleError` if some shortcutting cycle through ``x``
    is not a 2-cell (unless ``require_cycles`` is false).
    """
    c = as_complex(c)
    x = edge_label(c, x)
    graph = c.one_skeleton()
    ex = edge_key(*c.edge_endpoints(x))
    cells = two_cells_through(c, x)
    if require_cycles:
        have = {frozenset(s) for s in cells.values()}
        for z in default_candidates(graph, _edge_omega(c, omega), ex):
            if frozenset(z.edges()) not in have:
                raise MissingCycleError(ex, z)
    edges = c.cells_of(1)
    om = dict(zip(edges, omega_vector(c, 1, omega, exact)))
    dd = down_laplacian(c, 1, exact)
    ix = c.index(1, x)
    label_of = {edge_key(*c.edge_endpoints(e)): e for e in edges}
    relevant = {y for j, y in enumerate(edges) if dd[ix, j] != 0}
    for signs in cells.values():
        relevant.update(label_of[e] for e in signs)
    relevant.discard(x)
    ys = sorted(relevant, key=lambda y: c.index(1, y))
    zero = Fraction(0) if exact else 0.0
    const = dd[ix, ix] * om[x]
    obj = [dd[ix, c.index(1, y)] for y in ys]
    A, b, rel, names = [], [], [], []
    pos = {y: t for t, y in enumerate(ys)}
    for z, signs in sorted(cells.items(), key=lambda kv: repr(kv[0])):
        sx = signs[ex]
        row = [zero] * len(ys)
        for e, s in signs.items():
            y = label_of[e]
            if y != x:
                row[pos[y]] += convert(sx * s, exact)
        A.append(row)
        b.append(-om[x])  # sx * sx * h(x) moved to the right-hand side
        rel.append("<=")
        names.append(("cell", z))
    bounds = []
    for y in ys:
        row = [zero] * len(ys)
        row[pos[y]] = convert(1, exact)
        A.append(row)
        b.append(om[y])
        rel.append("<=")
        names.append(("box+", y))
        A.append(list(row))
        b.append(-om[y])
        rel.append(">=")
        names.append(("box-", y))
        bounds.append("free")
    lp = LinearProgram(obj, A, b, rel, "min", bounds,
                       var_names=[("h", y) for y in ys], row_names=names)
    sol = solve(lp, exact=exact)
    if not sol.optimal:
        return CurvatureCertificate(x, None, "oneform", INFINITE, {"lp_status": sol.status, "lp": lp})
    h = {y: zero for y in edges}
    h[x] = om[x]
    for t, y in enumerate(ys):
        h[y] = sol.x[t]
    return CurvatureCertificate(x, (sol.value + const) / om[x], "oneform", FINITE,
                                {"h": h, "lp": lp, "lp_solution": sol})
