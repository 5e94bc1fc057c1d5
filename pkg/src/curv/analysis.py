"""Metric and semigroup consequences of curvature bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .cellcomplex import (CellComplex, coboundary_matrix, edge_key, hodge_matrix,
                          up_laplacian)
from .curvature._common import as_complex, omega_vector
from .curvature.forman import diagonal_split
from .metric import (DegenerateOmegaError, all_pairs_distance, bfs_eccentricities, diameter,
                     find_degenerate_edge, is_nondegenerate, path_distance)
from .numerics import matrix_exponential, norm_p_omega

__all__ = [
    "DegreeStats", "DiameterReport", "SemigroupReport", "SemigroupSamples", "degree_stats",
    "check_diameter_bound", "semigroup_contractivity_check", "ollivier_semigroup_check",
    "extremal_vectors", "from_original_forman", "original_forman", "forman_from_original_weights",
    "path_distance", "all_pairs_distance", "diameter", "is_nondegenerate", "find_degenerate_edge",
    "bfs_eccentricities", "DegenerateOmegaError",
]

SEMIGROUP_SEED = 0x5EED


@dataclass(frozen=True)
class DegreeStats:
    """``Deg(x) = sum_{z > x} m(z)/m(x) + max_{v < x} m(x)/m(v)``; ``D[k] = max_{X_k} Deg``."""

    deg: Mapping  # (k, label) -> Deg
    D: Mapping  # k -> D_k
    diam: object


def degree_stats(c, omega: Mapping | None = None) -> DegreeStats:
    c = as_complex(c)
    deg, D = {}, {}
    for k in range(c.dim + 1):
        best = Fraction(0)
        for x in c.cells_of(k):
            mx = c.m(k, x)
            up = sum((c.m(k + 1, z) / mx for z in c.cofacets(k, x)), Fraction(0))
            down = max((mx / c.m(k - 1, v) for v in c.facets(k, x)), default=Fraction(0))
            deg[(k, x)] = up + down
            best = max(best, up + down)
        D[k] = best
    g = c.one_skeleton()
    return DegreeStats(deg, D, diameter(g, _edge_lengths(c, omega)))


def _edge_lengths(c: CellComplex, omega):
    if omega is None:
        return None
    out = {}
    for e in c.cells_of(1):
        key = edge_key(*c.edge_endpoints(e))
        out[key] = omega[e] if e in omega else omega[key]
    return out


@dataclass(frozen=True)
class DiameterReport:
    applicable: bool
    passed: bool
    R: object = None
    D0: object = None
    D1: object = None
    diam: object = None
    bound: object = None
    reason: str = ""


def check_diameter_bound(c, omega: Mapping | None = None, exact: bool = True) -> DiameterReport:
    """``diam_omega <= 2 min(D_1, D_0) / R`` with ``R = min_{X_1} F_omega``.

    Not applicable (and passing) when the complex is disconnected, has no
    edges, or ``R <= 0``.
    """
    c = as_complex(c)
    if c.n_cells(1) == 0:
        return DiameterReport(False, True, reason="no edges")
    if not c.one_skeleton().is_connected():
        return DiameterReport(False, True, reason="disconnected")
    H = hodge_matrix(c, 1, exact)
    Dm, _ = diagonal_split(H, omega_vector(c, 1, omega, exact))
    R = min(Dm[i, i] for i in range(H.shape[0]))
    st = degree_stats(c, omega)
    D0, D1 = st.D[0], st.D[1]
    if not R > 0:
        return DiameterReport(False, True, R, D0, D1, st.diam, reason="min Forman curvature <= 0")
    bound = 2 * min(D0, D1) / R
    return DiameterReport(True, bool(st.diam <= bound), R, D0, D1, st.diam, bound)


# ---------------------------------------------------------------------------
# semigroups


@dataclass(frozen=True)
class SemigroupSamples:
    t_grid: tuple = (0.1, 1.0, 5.0)
    p_set: tuple = (1, 2, math.inf)
    n_random: int = 20
    seed: int = SEMIGROUP_SEED
    tol: float = 1e-8
    derivative_tol: float = 1e-9


@dataclass
class SemigroupReport:
    R: float
    min_curvature: float
    hypothesis: bool  # min curvature >= R
    contraction_ok: bool = True
    derivative_ok: bool = True
    n_checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.contraction_ok and self.derivative_ok


def extremal_vectors(A: np.ndarray, omega: Sequence) -> list:
    """``f(x) = omega(x)``, ``f(y) = -sgn(Ay(x)) omega(y)``: then ``Af(x) = omega(x) F_omega(x)``."""
    n = A.shape[0]
    out = []
    for i in range(n):
        f = -np.sign(A[i]) * omega
        f[i] = omega[i]
        out.append(f)
    return out


def _sample_vectors(n: int, A, omega, samples: SemigroupSamples, extra=()):
    rng = np.random.default_rng(samples.seed)
    vecs = [np.eye(n)[i] for i in range(n)]
    vecs += list(extra)
    vecs += [rng.standard_normal(n) for _ in range(samples.n_random)]
    return vecs


def semigroup_contractivity_check(A, m: Sequence, R: float, omega: Sequence | None = None,
                                  samples: SemigroupSamples = SemigroupSamples(),
                                  vectors: Sequence | None = None) -> SemigroupReport:
    """Sample ``||e^{-tA} f||_{omega,p} <= e^{-Rt} ||f||_{omega,p}`` and the maximum principle.

    The derivative-at-zero test uses the extremal vectors: since
    ``||f||_{omega,inf} = 1`` for them, contraction at rate R for small t
    forces ``Af(x) >= R omega(x)``, i.e. ``F_omega(x) >= R``.
    """
    A = np.asarray(A, dtype=object).astype(float)
    n = A.shape[0]
    m = np.asarray([float(v) for v in m])
    om = np.ones(n) if omega is None else np.asarray([float(v) for v in omega])
    if n == 0:
        return SemigroupReport(float(R), math.inf, True)
    Dm, _ = diagonal_split(A, om)
    fvals = np.array([Dm[i, i] for i in range(n)])
    minF = float(fvals.min())
    report = SemigroupReport(float(R), minF, minF >= R - samples.derivative_tol)
    ext = extremal_vectors(A, om)
    vecs = list(vectors) if vectors is not None else _sample_vectors(n, A, om, samples, ext)
    for t in samples.t_grid:
        E = matrix_exponential(A, t)
        decay = math.exp(-R * t)
        for p in samples.p_set:
            for idx, f in enumerate(vecs):
                f = np.asarray(f, dtype=float)
                lhs = norm_p_omega(E @ f, p, om, m)
                rhs = decay * norm_p_omega(f, p, om, m)
                report.n_checks += 1
                if lhs > rhs + samples.tol * max(1.0, rhs):
                    report.contraction_ok = False
                    report.failures.append(("contraction", t, p, idx, lhs, rhs))
    for i, f in enumerate(ext):
        Af = A @ f
        report.n_checks += 1
        if Af[i] < R * om[i] - samples.derivative_tol:
            report.derivative_ok = False
            report.failures.append(("derivative", i, Af[i] / om[i], float(R)))
    return report


def ollivier_semigroup_check(g, R: float, omega: Mapping | None = None,
                             samples: SemigroupSamples = SemigroupSamples(),
                             kappa: Mapping | None = None) -> SemigroupReport:
    """``||delta e^{-t delta* delta} f||_{omega,inf} <= e^{-Rt} ||delta f||_{omega,inf}``.

    Derivative-at-zero uses the optimal potentials of the Ollivier LP: for
    each edge x, ``delta delta* delta f(x) = omega(x) kappa_omega(x)``.
    """
    from .curvature.ollivier import ollivier_edge

    c = as_complex(g)
    if omega is not None:
        bad = find_degenerate_edge(c.one_skeleton(), _edge_lengths(c, omega))
        if bad is not None:
            raise DegenerateOmegaError(bad)
    delta = coboundary_matrix(c, 0, False).astype(float)
    L = up_laplacian(c, 0, False).astype(float)
    edges = c.cells_of(1)
    ne, nv = len(edges), c.n_cells(0)
    om = np.asarray([float(v) for v in omega_vector(c, 1, omega, False)])
    potentials, kap = [], {}
    for e in edges:
        cert = ollivier_edge(c, e, omega, exact=False, check_degenerate=False)
        kap[e] = cert.value if kappa is None else kappa[e]
        f = np.array([float(cert.witness["f"].get(v, 0.0)) for v in c.cells_of(0)])
        potentials.append(f)
    minK = min(kap.values()) if kap else math.inf
    report = SemigroupReport(float(R), float(minK), minK >= R - samples.derivative_tol)
    rng = np.random.default_rng(samples.seed)
    vecs = [np.ones(nv)] + [np.eye(nv)[i] for i in range(nv)] + potentials
    vecs += [rng.standard_normal(nv) for _ in range(samples.n_random)]
    for t in samples.t_grid:
        E = matrix_exponential(L, t)
        decay = math.exp(-R * t)
        for idx, f in enumerate(vecs):
            lhs = norm_p_omega(delta @ (E @ f), math.inf, om, [1] * ne)
            rhs = decay * norm_p_omega(delta @ f, math.inf, om, [1] * ne)
            report.n_checks += 1
            if lhs > rhs + samples.tol * max(1.0, rhs):
                report.contraction_ok = False
                report.failures.append(("contraction", t, idx, lhs, rhs))
    for i, f in enumerate(potentials):
        rate = (delta @ (L @ f))[i] / om[i]
        report.n_checks += 1
        if rate < R - samples.derivative_tol:
            report.derivative_ok = False
            report.failures.append(("derivative", edges[i], rate, float(R)))
    return report


# ---------------------------------------------------------------------------
# Forman's original weighting


def from_original_forman(w: Sequence[Mapping]):
    """Cell weights ``w`` (one map per dimension) to ``(m, omega) = (1/w, sqrt(w))``."""
    m = [{x: 1 / Fraction(val) if isinstance(val, (int, Fraction)) else 1.0 / val
          for x, val in wk.items()} for wk in w]
    omega = [{x: math.sqrt(float(val)) for x, val in wk.items()} for wk in w]
    return m, omega


def original_forman(c: CellComplex, w: Sequence[Mapping], x) -> float:
    """``F_original(x) / w(x)`` for an edge by direct evaluation of Forman's weighted formula.

    The inner sums carry the incidence signs ``delta v(x) delta v(y)`` and
    ``delta x(z) delta y(z)``. Where ``x`` and ``y`` share a vertex these are
    opposite, which gives the familiar difference of unsigned sums, but two
    2-cells meeting ``x`` and a far edge ``y`` may cancel.
    """
    wv, we = w[0], w[1]
    w2 = w[2] if len(w) > 2 else {}
    fx = c.facets(1, x)
    zx = c.cofacets(1, x) if c.dim >= 2 else {}
    wx = float(we[x])
    total = sum(float(wv[v]) / wx for v in fx) + sum(wx / float(w2[z]) for z in zx)
    for y in c.cells_of(1):
        if y == x:
            continue
        wy = float(we[y])
        fy = c.facets(1, y)
        zy = c.cofacets(1, y) if c.dim >= 2 else {}
        a = sum(fx[v] * fy[v] * float(wv[v]) / math.sqrt(wy * wx) for v in fx if v in fy)
        b = sum(zx[z] * zy[z] * math.sqrt(wx * wy) / float(w2[z]) for z in zx if z in zy)
        total -= abs(a + b)
    return total


def forman_from_original_weights(c: CellComplex, w: Sequence[Mapping], x) -> float:
    """``F_omega(x)`` on ``c`` reweighted with ``m = 1/w``, ``omega = sqrt(w)``."""
    from .curvature.forman import forman

    m, omega = from_original_forman(w)
    cm = c.with_weights(m)
    return float(forman(cm, x, omega[1], dim=1, exact=False))
