import math
import random
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curv.analysis import (SemigroupSamples, all_pairs_distance, bfs_eccentricities,
                           check_diameter_bound, degree_stats, diameter, extremal_vectors,
                           forman_from_original_weights, from_original_forman,
                           ollivier_semigroup_check, original_forman, path_distance,
                           semigroup_contractivity_check)
from curv.cellcomplex import WeightedGraph, attach_two_cells, hodge_matrix, weight_vector
from curv.corpus import CorpusConfig, random_graph
from curv.curvature import diagonal_split

F = Fraction
TRIANGLE = WeightedGraph.from_edges([(1, 2), (2, 3), (1, 3)])


def _omega(g, rng):
    return {e: F(rng.randint(1, 9), rng.randint(1, 4)) for e in g.edges}


@pytest.mark.parametrize("seed", range(10))
def test_distances_match_networkx(seed):
    rng = random.Random(seed)
    g = random_graph(rng)
    om = _omega(g, rng)
    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_weighted_edges_from((a, b, om[(a, b)]) for a, b in g.edges)
    ref = dict(nx.all_pairs_dijkstra_path_length(G))
    assert all_pairs_distance(g, om) == {s: {t: ref[s][t] for t in g.vertices} for s in g.vertices}


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_triangle_inequality(seed):
    rng = random.Random(seed)
    g = random_graph(rng)
    d = all_pairs_distance(g, _omega(g, rng))
    vs = g.vertices
    assert all(d[a][c] <= d[a][b] + d[b][c] for a in vs for b in vs for c in vs)


@pytest.mark.parametrize("seed", range(10))
def test_bfs_oracle(seed):
    g = random_graph(random.Random(seed))
    ecc = bfs_eccentricities(g)
    for v in g.vertices:
        assert max(path_distance(g, None, v).values()) == ecc[v]
    assert diameter(g) == max(ecc.values())


def test_disconnected_distance():
    g = WeightedGraph.from_edges([(1, 2), (3, 4)])
    assert math.isinf(path_distance(g, None, 1)[3])
    assert math.isinf(diameter(g))


def test_degree_stats_worked(worked_complex):
    st_ = degree_stats(worked_complex)
    assert st_.D[0] == 4 and st_.D[1] == 3 and st_.diam == 3


def test_diameter_bound_examples(worked_complex):
    rep = check_diameter_bound(worked_complex)
    assert rep.applicable and rep.passed
    assert (rep.R, rep.D0, rep.D1, rep.diam, rep.bound) == (F(2, 3), 4, 3, 3, 9)
    tri = attach_two_cells(TRIANGLE, {(1, 2, 3): 1})
    rep = check_diameter_bound(tri)
    assert rep.passed and rep.bound == F(4, 3) and rep.diam == 1


def test_diameter_bound_not_applicable():
    assert not check_diameter_bound(WeightedGraph.from_edges([(1, 2), (3, 4)])).applicable
    # a 4-cycle has F = 0 on every edge
    sq = WeightedGraph.from_edges([(1, 2), (2, 3), (3, 4), (1, 4)])
    rep = check_diameter_bound(sq)
    assert not rep.applicable and rep.passed and rep.R == 0


def test_extremal_vectors_attain_forman(worked_complex):
    H = hodge_matrix(worked_complex, 1, exact=False)
    om = np.ones(H.shape[0])
    D, _ = diagonal_split(H, om)
    for i, f in enumerate(extremal_vectors(H, om)):
        assert (H @ f)[i] == pytest.approx(D[i, i])


def test_semigroup_worked(worked_complex):
    H = hodge_matrix(worked_complex, 1, exact=False)
    m = weight_vector(worked_complex, 1, exact=False)
    assert semigroup_contractivity_check(H, m, 2 / 3).passed
    sharp = semigroup_contractivity_check(H, m, 2 / 3 + 0.01)
    assert not sharp.derivative_ok and not sharp.passed


def test_semigroup_vertex_laplacian():
    # H_0 has F = 0 on vertices of a path: nothing better than non-expansion
    g = WeightedGraph.from_edges([(1, 2), (2, 3)])
    c = g.to_complex()
    H = hodge_matrix(c, 0, exact=False)
    assert semigroup_contractivity_check(H, weight_vector(c, 0, exact=False), 0.0).passed


def test_ollivier_semigroup_triangle():
    assert ollivier_semigroup_check(TRIANGLE, 3.0).passed
    assert not ollivier_semigroup_check(TRIANGLE, 3.05).derivative_ok


def test_semigroup_samples_config():
    s = SemigroupSamples(t_grid=(1.0,), p_set=(2,), n_random=3)
    H = np.array([[1.0]])
    rep = semigroup_contractivity_check(H, [1.0], 1.0, samples=s)
    assert rep.passed and rep.n_checks == 1 * 1 * (1 + 1 + 3) + 1


def test_from_original_forman():
    m, om = from_original_forman([{1: 4}, {(1, 2): F(1, 9)}])
    assert m[0][1] == F(1, 4) and m[1][(1, 2)] == 9
    assert om[1][(1, 2)] == pytest.approx(1 / 3)


def test_original_forman_unit_weights_is_forman(worked_complex):
    from curv.curvature import forman
    w = [{x: 1.0 for x in worked_complex.cells_of(k)} for k in range(3)]
    for e in worked_complex.cells_of(1):
        # unit w gives unit m and omega, except that 2-cell weights become 1
        c1 = worked_complex.with_weights([None, None, {z: 1 for z in worked_complex.cells_of(2)}])
        assert original_forman(worked_complex, w, e) == pytest.approx(float(forman(c1, e, dim=1)))


@pytest.mark.parametrize("seed", range(5))
def test_original_forman_agrees(seed):
    rng = random.Random(seed)
    g = random_graph(rng, CorpusConfig(min_vertices=4))
    from curv.corpus import random_two_cell_weights
    cells = {z: v for z, v in random_two_cell_weights(g, rng).items() if v > 0}
    c = attach_two_cells(g, cells)
    w = [{x: rng.uniform(0.3, 3.0) for x in c.cells_of(k)} for k in range(c.dim + 1)]
    for e in c.cells_of(1):
        assert original_forman(c, w, e) == pytest.approx(forman_from_original_weights(c, w, e), abs=1e-10)
