"""Transport-plan formulations of Ollivier curvature and their cycle-weight translations."""
from __future__ import annotations

import math

from ..cellcomplex import Cycle, as_graph, canonical_cycle, edge_key
from ..metric import path_distance
from ..numerics import convert
from ..simplex import LinearProgram, solve
from ._common import as_complex, edge_label
from .certificate import (FINITE, INFINITE, CurvatureCertificate, InfiniteDistanceError,
                          KantorovichPlan, PenaltyTransportPlan)


def _distances(g, sources, targets) -> dict:
    out = {}
    for a in sources:
        dist = path_distance(g, None, a)
        for b in targets:
            if math.isinf(dist[b]):
                raise InfiniteDistanceError(a, b)
            out[(a, b)] = dist[b]
    return out


def _orient(g, x):
    """Edge ``x`` as ``(tail, head)`` in the min -> max orientation."""
    c = as_complex(g)
    return c.edge_endpoints(edge_label(c, x))


def kantorovich_curvature(g, x, *, exact: bool = True) -> CurvatureCertificate:
    """``sup_xi sum xi(v', w') (1 - d(v', w'))`` over plans on ``B_1(v) x B_1(w)``.

    Marginals are imposed for ``v' != v`` and ``w' != w`` only.
    """
    graph = as_graph(g)
    v, w = _orient(g, x)
    bv = sorted({v} | graph.neighbors(v))
    bw = sorted({w} | graph.neighbors(w))
    dist = _distances(graph, bv, bw)
    pairs = [(a, b) for a in bv for b in bw]
    one = convert(1, exact)
    zero = convert(0, exact)
    A, rhs, names = [], [], []
    for a in bv:
        if a == v:
            continue
        A.append([one if p[0] == a else zero for p in pairs])
        rhs.append(convert(graph.transition(v, a), exact))
        names.append(("row", a))
    for b in bw:
        if b == w:
            continue
        A.append([one if p[1] == b else zero for p in pairs])
        rhs.append(convert(graph.transition(w, b), exact))
        names.append(("col", b))
    obj = [convert(1 - dist[p], exact) for p in pairs]
    lp = LinearProgram(obj, A, rhs, ["="] * len(rhs), "max", var_names=[("xi",) + p for p in pairs],
                       row_names=names)
    sol = solve(lp, exact=exact)
    if not sol.optimal:
        return CurvatureCertificate((v, w), None, "kantorovich", INFINITE, {"lp_status": sol.status})
    xi = {p: sol.x[t] for t, p in enumerate(pairs) if sol.x[t] != 0}
    plan = KantorovichPlan((v, w), xi,
                           {a: convert(graph.transition(v, a), exact) for a in bv if a != v},
                           {b: convert(graph.transition(w, b), exact) for b in bw if b != w})
    return CurvatureCertificate((v, w), sol.value, "kantorovich", FINITE,
                                {"plan": plan, "lp": lp, "lp_solution": sol})


def penalty_transport_curvature(g, x, *, exact: bool = True) -> CurvatureCertificate:
    """``Q(v,w) + Q(w,v) + sup_rho (sum rho (1 - d) - sum |A_rho| - sum |B_rho|)``.

    ``rho >= 0`` lives on ``N(v,w) x N(w,v)``; the absolute values are
    linearised by ``a(v') >= |A_rho(v')|`` and ``b(w') >= |B_rho(w')|``.
    """
    graph = as_graph(g)
    v, w = _orient(g, x)
    nv = sorted(graph.neighbors(v) - {w})
    nw = sorted(graph.neighbors(w) - {v})
    dist = _distances(graph, nv, nw)
    pairs = [(a, b) for a in nv for b in nw]
    q_v = {a: convert(graph.transition(v, a), exact) for a in nv}
    q_w = {b: convert(graph.transition(w, b), exact) for b in nw}
    q_vw = convert(graph.transition(v, w), exact)
    q_wv = convert(graph.transition(w, v), exact)
    npairs, nvv = len(pairs), len(nv)
    nvar = npairs + nvv + len(nw)
    one, zero = convert(1, exact), convert(0, exact)
    A, rhs, rel, names = [], [], [], []
    # a(v') + sum_w' rho(v', w') >= Q(v, v') and a(v') - sum rho >= -Q(v, v')
    for s, a in enumerate(nv):
        for sgn in (1, -1):
            row = [zero] * nvar
            for t, p in enumerate(pairs):
                if p[0] == a:
                    row[t] = sgn * one
            row[npairs + s] = one
            A.append(row)
            rhs.append(sgn * q_v[a])
            rel.append(">=")
            names.append(("A" + ("+" if sgn > 0 else "-"), a))
    for s, b in enumerate(nw):
        for sgn in (1, -1):
            row = [zero] * nvar
            for t, p in enumerate(pairs):
                if p[1] == b:
                    row[t] = sgn * one
            row[npairs + nvv + s] = one
            A.append(row)
            rhs.append(sgn * q_w[b])
            rel.append(">=")
            names.append(("B" + ("+" if sgn > 0 else "-"), b))
    obj = [convert(1 - dist[p], exact) for p in pairs] + [-one] * (nvar - npairs)
    const = q_vw + q_wv
    if not A:
        plan = PenaltyTransportPlan((v, w), {}, q_v, q_w, q_vw, q_wv, dist)
        return CurvatureCertificate((v, w), const, "penalty", FINITE, {"plan": plan})
    lp = LinearProgram(obj, A, rhs, rel, "max",
                       var_names=[("rho",) + p for p in pairs] + [("a", a) for a in nv] + [("b", b) for b in nw],
                       row_names=names)
    sol = solve(lp, exact=exact)
    if not sol.optimal:
        return CurvatureCertificate((v, w), None, "penalty", INFINITE, {"lp_status": sol.status})
    rho = {p: sol.x[t] for t, p in enumerate(pairs) if sol.x[t] != 0}
    plan = PenaltyTransportPlan((v, w), rho, q_v, q_w, q_vw, q_wv, dist)
    return CurvatureCertificate((v, w), const + sol.value, "penalty", FINITE,
                                {"plan": plan, "lp": lp, "lp_solution": sol})


# ---------------------------------------------------------------------------
# plans <-> cycle weights


def _common_neighbours(graph, a, b, exclude) -> list:
    return sorted((graph.neighbors(a) & graph.neighbors(b)) - set(exclude))


def reroute_plan(plan: PenaltyTransportPlan, g) -> PenaltyTransportPlan:
    """An equally good plan whose support admits short cycles whenever possible.

    Mass on pairs at distance >= 3 is removed; mass on a distance-2 pair
    whose only common neighbours are ``v`` or ``w`` moves to the diagonal
    pair of the triangle through that neighbour. Neither step lowers the
    penalty objective.
    """
    graph = as_graph(g)
    v, w = plan.edge
    rho = {}
    for (a, b), r in plan.rho.items():
        if r == 0:
            continue
        d = plan.dist[(a, b)]
        if d >= 3:
            continue
        if d == 2 and not _common_neighbours(graph, a, b, (v, w)):
            if graph.adjacent(v, b) and b in plan.q_v:
                key = (b, b)
            elif graph.adjacent(w, a) and a in plan.q_w:
                key = (a, a)
            else:
                key = (a, b)
            rho[key] = rho.get(key, 0) + r
            continue
        rho[(a, b)] = rho.get((a, b), 0) + r
    return PenaltyTransportPlan(plan.edge, rho, plan.q_v, plan.q_w, plan.q_vw, plan.q_wv, plan.dist)


def pair_cycle(g, edge, a, b) -> Cycle | None:
    """Shortest cycle through ``(a, v), (v, w), (w, b)``, or None past length five."""
    graph = as_graph(g)
    v, w = edge
    if a == b:
        return canonical_cycle((v, w, a))
    if graph.adjacent(a, b):
        return canonical_cycle((a, v, w, b))
    common = _common_neighbours(graph, a, b, (v, w))
    if common:
        return canonical_cycle((a, v, w, b, common[0]))
    return None


def transport_to_cycle_weights(plan: PenaltyTransportPlan, g, *, reroute: bool = True):
    """Cycle weights ``m'(z(v', w')) = rho(v', w') m(x)``.

    Returns ``(weights, dropped)`` where ``dropped`` lists the supported
    pairs without a cycle of length at most five.
    """
    graph = as_graph(g)
    if reroute:
        plan = reroute_plan(plan, graph)
    v, w = plan.edge
    mx = graph.m(v, w)
    weights, dropped = {}, []
    for (a, b), r in sorted(plan.rho.items()):
        if r == 0:
            continue
        z = pair_cycle(graph, (v, w), a, b)
        if z is None:
            dropped.append((a, b))
            continue
        weights[z] = weights.get(z, 0) + r * mx
    return weights, dropped


def cycle_weights_to_transport(c, x, *, exact: bool = True) -> PenaltyTransportPlan:
    """``rho(v', w') = sum m(z)/m(x)`` over 2-cells containing ``(v', v), (v, w), (w, w')``."""
    c = as_complex(c)
    xl = edge_label(c, x)
    v, w = c.edge_endpoints(xl)
    graph = c.one_skeleton()
    nv = sorted(graph.neighbors(v) - {w})
    nw = sorted(graph.neighbors(w) - {v})
    dist = _distances(graph, nv, nw)
    mx = convert(c.m(1, xl), exact)
    rho = {}
    for z in (c.cofacets(1, xl) if c.dim >= 2 else {}):
        es = {edge_key(*c.edge_endpoints(e)) for e in c.facets(2, z)}
        mz = convert(c.m(2, z), exact)
        for a in nv:
            if edge_key(a, v) not in es:
                continue
            for b in nw:
                if edge_key(w, b) in es:
                    rho[(a, b)] = rho.get((a, b), 0) + mz / mx
    return PenaltyTransportPlan(
        (v, w), rho,
        {a: convert(graph.transition(v, a), exact) for a in nv},
        {b: convert(graph.transition(w, b), exact) for b in nw},
        convert(graph.transition(v, w), exact), convert(graph.transition(w, v), exact), dist)
