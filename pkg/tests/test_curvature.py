import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from curv.cellcomplex import (MaxLength, WeightedGraph, attach_two_cells, canonical_cycle,
                              enumerate_cycles, hodge_matrix)
from curv.corpus import CorpusConfig, random_graph, random_two_cell_weights
from curv.curvature import (INFINITE, MissingCycleError, check_condition_a_prime,
                            check_maxmin_dual, condition_a, cycle_weights_to_transport,
                            default_candidates, diagonal_split, forman, forman_all,
                            is_minimally_diagonally_dominant, kantorovich_curvature,
                            max_forman_edge, maxmin_forman, ollivier_cell, ollivier_edge,
                            ollivier_oneform, penalty_transport_curvature, reroute_plan,
                            transport_to_cycle_weights)
from curv.curvature.certificate import PenaltyTransportPlan
from curv.metric import DegenerateOmegaError, is_nondegenerate

F = Fraction

K2 = WeightedGraph.from_edges([(1, 2)])
PATH = WeightedGraph.from_edges([(1, 2), (2, 3)])
TRIANGLE = WeightedGraph.from_edges([(1, 2), (2, 3), (1, 3)])


def scipy_ollivier(g, edge):
    """inf (Lap f)(v) - (Lap f)(w) over f(w) - f(v) = 1 and |f(a) - f(b)| <= 1 on edges."""
    verts = list(g.vertices)
    pos = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    v, w = edge

    def lap_row(u):
        row = np.zeros(n)
        for nb in g.neighbors(u):
            q = float(g.m(u, nb)) / float(g.m(u))
            row[pos[nb]] += q
            row[pos[u]] -= q
        return row

    c = lap_row(v) - lap_row(w)
    A_ub, b_ub = [], []
    for a, b in g.edges:
        r = np.zeros(n)
        r[pos[a]], r[pos[b]] = 1, -1
        A_ub += [r, -r]
        b_ub += [1, 1]
    eq = np.zeros(n)
    eq[pos[w]], eq[pos[v]] = 1, -1
    pin = np.zeros(n)
    pin[pos[v]] = 1
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=[eq, pin], b_eq=[1, 0], bounds=[(None, None)] * n,
                  method="highs")
    assert res.status == 0
    return res.fun


def unit_oneform_complex(g, e, omega=None):
    return attach_two_cells(g, {z: 1 for z in default_candidates(g, omega, e)})


# ---------------------------------------------------------------------------
# Forman


@pytest.mark.parametrize("s", [F(0), F(1, 3), F(1), F(3, 2), F(4)])
def test_triangle_closed_form(s):
    c = attach_two_cells(TRIANGLE, {(1, 2, 3): s})
    for e in TRIANGLE.edges:
        assert forman(c, e, dim=1) == 2 + s - 2 * abs(1 - s)


def test_single_edge_forman():
    assert forman(K2.to_complex(), (1, 2), dim=1) == 2


def test_forman_rejects_unknown_cell():
    with pytest.raises(KeyError):
        forman(K2.to_complex(), (1, 3), dim=1)


def test_max_forman_triangle():
    cert = max_forman_edge(TRIANGLE, (1, 2), [canonical_cycle((1, 2, 3))])
    assert cert.value == 3
    assert cert.witness["n"][canonical_cycle((1, 2, 3))] == 1


def test_max_forman_tree_edge_is_plain_forman():
    cert = max_forman_edge(PATH, (1, 2), [])
    assert cert.value == forman(PATH.to_complex(), (1, 2), dim=1) == 1


def test_max_forman_grid_oracle():
    """Grid search over the triangle weight never beats the LP and hits it at s = 1."""
    cert = max_forman_edge(TRIANGLE, (1, 2), [canonical_cycle((1, 2, 3))])
    grid = [F(k, 8) for k in range(0, 33)]
    vals = [forman(attach_two_cells(TRIANGLE, {(1, 2, 3): s}), (1, 2), dim=1) for s in grid]
    assert max(vals) == cert.value


def test_max_forman_witness_attains(worked_graph):
    for e in worked_graph.edges:
        cert = max_forman_edge(worked_graph, e)
        c = attach_two_cells(worked_graph, cert.witness["n"])
        assert forman(c, e, dim=1) == cert.value
        for t in (F(1, 2), F(2), F(3)):
            scaled = attach_two_cells(worked_graph, {z: t * v for z, v in cert.witness["n"].items()})
            assert forman(scaled, e, dim=1) <= cert.value


def test_diagonal_split_minimal(worked_complex):
    for k in range(3):
        H = hodge_matrix(worked_complex, k)
        D, Delta = diagonal_split(H)
        assert is_minimally_diagonally_dominant(Delta)
        fv = forman_all(worked_complex, k)
        assert [D[i, i] for i in range(H.shape[0])] == [fv[x] for x in worked_complex.cells_of(k)]


def test_k4_counterexample_pin():
    """Opposite relative orientations on a far edge cancel in H, so F can exceed the penalty objective."""
    g = WeightedGraph.from_edges([(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
    c = attach_two_cells(g, {(1, 2, 4, 3): 1, (1, 2, 3, 4): 1})
    fx = forman(c, (1, 2), dim=1)
    obj = cycle_weights_to_transport(c, (1, 2)).objective()
    kap = ollivier_edge(g, (1, 2)).value
    assert (fx, obj, kap) == (4, 2, 4)
    assert obj <= kap


# ---------------------------------------------------------------------------
# Ollivier


@pytest.mark.parametrize("g, e, want", [(K2, (1, 2), 2), (PATH, (1, 2), 1), (TRIANGLE, (1, 3), 3)])
def test_small_ollivier(g, e, want):
    assert ollivier_edge(g, e).value == want
    assert kantorovich_curvature(g, e).value == want
    assert penalty_transport_curvature(g, e).value == want
    assert ollivier_oneform(unit_oneform_complex(g, e), e).value == want


def test_ollivier_witness_idempotent(worked_graph):
    for e in worked_graph.edges:
        cert = ollivier_edge(worked_graph, e)
        f = cert.witness["f"]
        v, w = e
        assert f[w] - f[v] == 1
        assert all(abs(f[a] - f[b]) <= 1 for a, b in worked_graph.edges)


@pytest.mark.parametrize("seed", range(30))
def test_ollivier_against_scipy(seed):
    g = random_graph(random.Random(100 + seed))
    for e in g.edges:
        assert float(ollivier_edge(g, e).value) == pytest.approx(scipy_ollivier(g, e), abs=1e-8)


def test_ollivier_cell_on_two_cell():
    # H_2 on the only 2-cell: delta delta* g(z) = sum_x m(z)/m(x) g(z) = 3 s
    for s in (F(1), F(2, 5)):
        c = attach_two_cells(TRIANGLE, {(1, 2, 3): s})
        z = c.cells_of(2)[0]
        assert ollivier_cell(c, z, dim=2).value == 3 * s


def test_ollivier_cell_k1_matches_edge(worked_graph):
    for e in worked_graph.edges:
        assert ollivier_cell(worked_graph.to_complex(), e, dim=1).value == ollivier_edge(worked_graph, e).value


def test_oneform_requires_cycles():
    with pytest.raises(MissingCycleError):
        ollivier_oneform(TRIANGLE.to_complex(), (1, 2))
    # without the 2-cell the constraint is vacuous: inf of 2 h(x) +- h(y1) +- h(y2) = 0 = F
    cert = ollivier_oneform(TRIANGLE.to_complex(), (1, 2), require_cycles=False)
    assert cert.value == 0 == forman(TRIANGLE.to_complex(), (1, 2), dim=1)


def test_oneform_worked_example(worked_graph):
    c = attach_two_cells(worked_graph, {z: 1 for z in enumerate_cycles(worked_graph, MaxLength(5))})
    assert ollivier_oneform(c, (1, 2)).value == ollivier_edge(worked_graph, (1, 2)).value


def test_oneform_path_no_cycles():
    assert ollivier_oneform(PATH.to_complex(), (1, 2)).value == 1


def test_degenerate_omega():
    tie = {(1, 2): F(2), (1, 3): F(1), (2, 3): F(1)}
    ok, bad = is_nondegenerate(TRIANGLE, tie)
    assert not ok and bad == (1, 2)
    assert is_nondegenerate(TRIANGLE, {(1, 2): F(19, 10), (1, 3): F(1), (2, 3): F(1)}) == (True, None)
    with pytest.raises(DegenerateOmegaError):
        ollivier_edge(TRIANGLE, (1, 2), tie)
    # a tie keeps the feasible set non-empty; a strict shortcut empties it
    assert ollivier_edge(TRIANGLE, (1, 2), tie, check_degenerate=False).finite
    strict = dict(tie)
    strict[(1, 2)] = F(3)
    cert = ollivier_edge(TRIANGLE, (1, 2), strict, check_degenerate=False)
    assert cert.status == INFINITE and cert.value is None


def _nondegenerate_omega(g, rng):
    # lengths in [1, 3/2) make every edge the strict shortest path
    return {e: 1 + F(rng.randint(0, 9), 20) for e in g.edges}


@pytest.mark.parametrize("seed", range(12))
def test_weighted_coincidence(seed):
    rng = random.Random(500 + seed)
    g = random_graph(rng, CorpusConfig(max_vertices=6, min_vertices=3))
    om = _nondegenerate_omega(g, rng)
    for e in g.edges:
        kap = ollivier_edge(g, e, om).value
        assert ollivier_oneform(unit_oneform_complex(g, e, om), e, om).value == kap
        assert max_forman_edge(g, e, omega=om).value == kap


# ---------------------------------------------------------------------------
# ordering, hypothesis


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_forman_below_ollivier(seed):
    rng = random.Random(seed)
    g = random_graph(rng, CorpusConfig(max_vertices=6))
    c = attach_two_cells(g, random_two_cell_weights(g, rng))
    fv = forman_all(c, 1)
    for e in g.edges:
        assert fv[e] <= ollivier_edge(g, e).value


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_penalty_objective_below_kappa(seed):
    rng = random.Random(seed)
    g = random_graph(rng, CorpusConfig(max_vertices=6))
    c = attach_two_cells(g, random_two_cell_weights(g, rng))
    for e in g.edges:
        assert cycle_weights_to_transport(c, e).objective() <= ollivier_edge(g, e).value


# ---------------------------------------------------------------------------
# max-min


def test_maxmin_triangle():
    cert = maxmin_forman(TRIANGLE)
    assert cert.value == 3 == cert.witness["dual_value"]


def test_maxmin_worked(worked_graph):
    cert = maxmin_forman(worked_graph)
    assert cert.value == F(2, 3) == cert.witness["dual_value"]
    checks = check_maxmin_dual(worked_graph, cert.witness["J"])
    assert checks["a"] and checks["a_prime"] and checks["b"] and checks["c"]
    assert checks["objective"] == F(2, 3)
    opt = attach_two_cells(worked_graph, cert.witness["n"])
    assert min(forman_all(opt, 1).values()) == cert.value


def test_maxmin_float_mode(worked_graph):
    cert = maxmin_forman(worked_graph, exact=False)
    assert cert.value == pytest.approx(2 / 3)


def test_condition_a_prime_examples():
    n = 4
    eye = np.array([[F(int(i == j), n) for j in range(n)] for i in range(n)], dtype=object)
    assert check_condition_a_prime(eye, [1] * n) and condition_a(eye, [1] * n)
    bad = eye.copy()
    bad[0, 1] = F(1, 2)
    assert not check_condition_a_prime(bad, [1] * n) and not condition_a(bad, [1] * n)


def test_condition_a_and_a_prime_agree():
    rng = random.Random(2024)
    seen = set()
    for _ in range(200):
        n = rng.randint(2, 4)
        m = [F(rng.randint(1, 4), rng.randint(1, 3)) for _ in range(n)]
        J = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                J[i, j] = F(rng.randint(-6, 6), rng.randint(1, 4))
            J[i, i] = F(rng.randint(0, 30), rng.randint(1, 3))
        a, ap = condition_a(J, m), check_condition_a_prime(J, m)
        assert a == ap
        seen.add(a)
    assert seen == {True, False}


# ---------------------------------------------------------------------------
# transport plans


def test_zero_plan_gives_zero_weights():
    plan = penalty_transport_curvature(TRIANGLE, (1, 2)).witness["plan"]
    empty = PenaltyTransportPlan(plan.edge, {}, plan.q_v, plan.q_w, plan.q_vw, plan.q_wv, plan.dist)
    assert transport_to_cycle_weights(empty, TRIANGLE) == ({}, [])


def test_triangle_plan_roundtrip():
    plan = penalty_transport_curvature(TRIANGLE, (1, 2)).witness["plan"]
    weights, dropped = transport_to_cycle_weights(plan, TRIANGLE)
    assert not dropped and weights == {canonical_cycle((1, 2, 3)): 1}
    c = attach_two_cells(TRIANGLE, weights)
    assert forman(c, (1, 2), dim=1) == 3
    back = cycle_weights_to_transport(c, (1, 2))
    assert dict(back.rho) == {(3, 3): 1}


def test_no_two_cells_gives_zero_rho():
    assert not cycle_weights_to_transport(PATH.to_complex(), (1, 2)).rho


def test_worked_edge_pipeline(worked_graph, worked_complex):
    plan = penalty_transport_curvature(worked_graph, (3, 4)).witness["plan"]
    weights, dropped = transport_to_cycle_weights(plan, worked_graph)
    assert not dropped
    fx = forman(attach_two_cells(worked_graph, weights), (3, 4), dim=1)
    assert fx == ollivier_edge(worked_graph, (3, 4)).value
    for e in worked_graph.edges:
        obj = cycle_weights_to_transport(worked_complex, e).objective()
        assert forman(worked_complex, e, dim=1) <= obj <= ollivier_edge(worked_graph, e).value


def test_reroute_keeps_objective(graphs):
    for g in graphs[:40]:
        for e in g.edges:
            plan = penalty_transport_curvature(g, e).witness["plan"]
            assert reroute_plan(plan, g).objective() >= plan.objective()


def test_kantorovich_marginals(worked_graph):
    for e in worked_graph.edges:
        plan = kantorovich_curvature(worked_graph, e).witness["plan"]
        assert not plan.marginal_errors()


def test_disconnected_graph_is_per_component():
    g = WeightedGraph.from_edges([(1, 2), (2, 3), (1, 3), (4, 5)])
    assert kantorovich_curvature(g, (1, 2)).value == 3
    assert kantorovich_curvature(g, (4, 5)).value == 2
    assert ollivier_edge(g, (4, 5)).value == 2
