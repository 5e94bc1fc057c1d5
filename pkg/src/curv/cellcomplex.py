"""Weighted graphs, cycles and 2-dimensional cell complexes.

A :class:`CellComplex` stores cells graded by dimension, a signed incidence
``delta v(z)`` between consecutive dimensions and a positive weight per cell.
Cells are addressed by hashable labels: vertex ids for 0-cells, sorted
vertex pairs ``(u, v)`` with ``u < v`` for 1-cells and :class:`Cycle` objects
for 2-cells attached along graph cycles. The integer id of a cell is its
position in ``cells[k]``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .numerics import FLOAT_TOL, convert, zeros


class ComplexError(ValueError):
    """Raised for structurally invalid graphs or complexes."""


class CycleError(ValueError):
    """Raised when a vertex sequence is not a cycle of the graph."""


def edge_key(u, v) -> tuple:
    if u == v:
        raise ComplexError(f"loop at vertex {u!r}")
    return (u, v) if u < v else (v, u)


# ---------------------------------------------------------------------------
# weighted graphs


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph with vertex weights ``m(v)`` and edge weights ``m(v, w)``."""

    vertex_weights: Mapping
    edge_weights: Mapping
    _adj: Mapping = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vw = dict(self.vertex_weights)
        ew = {}
        for (u, v), w in dict(self.edge_weights).items():
            key = edge_key(u, v)
            if key in ew:
                raise ComplexError(f"multiple edges between {u!r} and {v!r}")
            for end in key:
                if end not in vw:
                    raise ComplexError(f"edge {key} uses unknown vertex {end!r}")
            ew[key] = w
        for label, w in list(vw.items()) + list(ew.items()):
            if not (w > 0):
                raise ComplexError(f"weight of {label!r} must be positive, got {w}")
        adj = defaultdict(set)
        for u, v in ew:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "vertex_weights", MappingProxyType(dict(sorted(vw.items()))))
        object.__setattr__(self, "edge_weights", MappingProxyType(dict(sorted(ew.items()))))
        object.__setattr__(self, "_adj", MappingProxyType({v: frozenset(adj[v]) for v in vw}))

    @classmethod
    def from_edges(cls, edges: Iterable, vertices: Iterable = (), weight=1) -> "WeightedGraph":
        """Graph with constant weight ``weight`` on every vertex and edge."""
        edges = [edge_key(u, v) for u, v in edges]
        verts = set(vertices)
        for e in edges:
            verts.update(e)
        w = Fraction(weight) if isinstance(weight, int) else weight
        return cls({v: w for v in verts}, {e: w for e in edges})

    @property
    def vertices(self) -> tuple:
        return tuple(self.vertex_weights)

    @property
    def edges(self) -> tuple:
        return tuple(self.edge_weights)

    def neighbors(self, v) -> frozenset:
        return self._adj[v]

    def adjacent(self, u, v) -> bool:
        return v in self._adj.get(u, ())

    def m(self, u, v=None):
        if v is None:
            return self.vertex_weights[u]
        return self.edge_weights.get(edge_key(u, v), 0) if u != v else 0

    def transition(self, v, w):
        """``Q(v, w) = m(v, w) / m(v)``."""
        return self.m(v, w) / self.vertex_weights[v]

    def component(self, v) -> set:
        seen, stack = {v}, [v]
        while stack:
            u = stack.pop()
            for w in self._adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    def is_connected(self) -> bool:
        return not self.vertex_weights or len(self.component(self.vertices[0])) == len(self.vertex_weights)

    def to_complex(self) -> "CellComplex":
        return attach_two_cells(self, {})


# ---------------------------------------------------------------------------
# cycles


@dataclass(frozen=True, order=True)
class Cycle:
    """A cycle of a graph in canonical form (see :func:`canonical_cycle`)."""

    vertices: tuple

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __repr__(self):
        return f"Cycle{self.vertices}"

    def oriented_edges(self):
        """Yield ``(edge, sign)`` with sign ``+1`` when traversal runs tail to head."""
        vs = self.vertices
        n = len(vs)
        for k in range(n):
            a, b = vs[k], vs[(k + 1) % n]
            yield edge_key(a, b), (1 if a < b else -1)

    def edges(self) -> tuple:
        return tuple(e for e, _ in self.oriented_edges())

    def contains_edge(self, e) -> bool:
        return edge_key(*e) in self.edges()


def canonical_cycle(seq: Sequence, graph: WeightedGraph | None = None) -> Cycle:
    """Lexicographically minimal rotation/reflection of a closed injective walk.

    >>> canonical_cycle((2, 3, 1)).vertices
    (1, 2, 3)
    >>> canonical_cycle((3, 5, 6, 4)).vertices
    (3, 4, 6, 5)
    """
    seq = tuple(seq)
    n = len(seq)
    if n < 3:
        raise CycleError(f"a cycle needs at least 3 vertices, got {seq}")
    if len(set(seq)) != n:
        raise CycleError(f"repeated vertex in {seq}")
    if graph is not None:
        for k in range(n):
            a, b = seq[k], seq[(k + 1) % n]
            if not graph.adjacent(a, b):
                raise CycleError(f"{a!r} and {b!r} are not adjacent in {seq}")
    candidates = []
    for s in (seq, seq[::-1]):
        for k in range(n):
            candidates.append(s[k:] + s[:k])
    return Cycle(min(candidates))


@dataclass(frozen=True)
class MaxLength:
    length: int = 5


@dataclass(frozen=True)
class Shortcutting:
    """Cycles ``z`` through ``edge`` whose omega-length is below twice the
    omega-length of their edges touching ``edge``."""

    edge: tuple
    omega: Mapping | None = None


def _omega_of(omega, e):
    return 1 if omega is None else omega[edge_key(*e)]


def enumerate_cycles(g: WeightedGraph, criterion=MaxLength(5)) -> list[Cycle]:
    """All distinct cycles of ``g`` satisfying ``criterion``, sorted canonically."""
    g = as_graph(g)
    found: set[Cycle] = set()
    if isinstance(criterion, MaxLength):
        L = criterion.length
        for s in g.vertices:
            # anchor at the smallest vertex of the cycle
            path = [s]
            on_path = {s}

            def dfs(u):
                for w in g.neighbors(u):
                    if w == s and len(path) >= 3:
                        found.add(canonical_cycle(path))
                    elif w > s and w not in on_path and len(path) < L:
                        path.append(w)
                        on_path.add(w)
                        dfs(w)
                        path.pop()
                        on_path.discard(w)

            dfs(s)
    elif isinstance(criterion, Shortcutting):
        found.update(_shortcutting_cycles(g, criterion.edge, criterion.omega))
    else:
        raise TypeError(f"unknown cycle criterion {criterion!r}")
    return sorted(found)


def _shortcutting_cycles(g: WeightedGraph, x, omega) -> set[Cycle]:
    v, w = edge_key(*x)
    if not g.adjacent(v, w):
        raise CycleError(f"{x} is not an edge")
    om = lambda a, b: _omega_of(omega, (a, b))  # noqa: E731
    wx = om(v, w)
    out = set()
    max_at_v = max(om(v, u) for u in g.neighbors(v))
    # walk w -> ... -> v avoiding x; first edge at w, last edge at v
    for first in g.neighbors(w):
        if first == v:
            continue
        w_first = om(w, first)
        path = [w, first]
        on_path = {w, first}

        def dfs(u, middle):
            for nxt in g.neighbors(u):
                if nxt == v:
                    if len(path) < 2:
                        continue
                    total = wx + w_first + middle + om(u, v)
                    near = wx + w_first + om(u, v)
                    if total < 2 * near:
                        out.add(canonical_cycle([v] + path))
                elif nxt not in on_path:
                    step = om(u, nxt)
                    if middle + step >= wx + w_first + max_at_v:
                        continue
                    path.append(nxt)
                    on_path.add(nxt)
                    dfs(nxt, middle + step)
                    path.pop()
                    on_path.discard(nxt)

        dfs(first, 0)
    return out


def is_shortcutting(z: Cycle, x, omega=None) -> bool:
    x = edge_key(*x)
    v, w = x
    total = near = 0
    for e, _ in z.oriented_edges():
        om = _omega_of(omega, e)
        total += om
        if v in e or w in e:
            near += om
    return x in z.edges() and total < 2 * near


# ---------------------------------------------------------------------------
# cell complexes


@dataclass(frozen=True)
class CellComplex:
    """Finite graded cell complex with signed incidence and positive weights.

    ``cells[k]`` is the ordered tuple of k-cell labels, ``weights[k]`` maps
    labels to ``m``, and ``incidence[k]`` maps ``(lower, upper)`` label pairs
    (a k-cell and a (k+1)-cell) to ``delta lower (upper)`` in ``{-1, +1}``.
    Instances are immutable; derived matrices are memoised per instance.
    """

    cells: tuple
    weights: tuple
    incidence: tuple
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        cells = tuple(tuple(c) for c in self.cells)
        weights = tuple(MappingProxyType(dict(w)) for w in self.weights)
        incidence = tuple(MappingProxyType(dict(i)) for i in self.incidence)
        if len(weights) != len(cells):
            raise ComplexError("one weight map per dimension is required")
        while len(incidence) < max(len(cells) - 1, 0):
            incidence += (MappingProxyType({}),)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "incidence", incidence)
        index = tuple({c: i for i, c in enumerate(cs)} for cs in cells)
        down = [defaultdict(dict) for _ in cells]
        up = [defaultdict(dict) for _ in cells]
        for k, inc in enumerate(incidence):
            for (lo, hi), s in inc.items():
                if s:
                    up[k][lo][hi] = s
                    down[k + 1][hi][lo] = s
        self._cache["index"] = index
        self._cache["down"] = tuple(dict(d) for d in down)
        self._cache["up"] = tuple(dict(u) for u in up)

    # -- structure -------------------------------------------------------
    @property
    def dim(self) -> int:
        return max((k for k, cs in enumerate(self.cells) if cs), default=-1)

    def n_cells(self, k: int) -> int:
        return len(self.cells[k]) if 0 <= k < len(self.cells) else 0

    def cells_of(self, k: int) -> tuple:
        return self.cells[k] if 0 <= k < len(self.cells) else ()

    def index(self, k: int, label) -> int:
        return self._cache["index"][k][label]

    def has_cell(self, k: int, label) -> bool:
        return 0 <= k < len(self.cells) and label in self._cache["index"][k]

    def dim_of(self, label) -> int:
        dims = [k for k in range(len(self.cells)) if self.has_cell(k, label)]
        if not dims:
            raise KeyError(f"cell {label!r} not in complex")
        if len(dims) > 1:
            raise KeyError(f"label {label!r} is ambiguous across dimensions {dims}")
        return dims[0]

    def m(self, k: int, label):
        return self.weights[k][label]

    def facets(self, k: int, label) -> dict:
        """``{lower: delta lower (label)}`` for a k-cell."""
        if k <= 0:
            return {}
        return self._cache["down"][k].get(label, {})

    def cofacets(self, k: int, label) -> dict:
        """``{upper: delta label (upper)}`` for a k-cell."""
        if k + 1 >= len(self.cells):
            return {}
        return self._cache["up"][k].get(label, {})

    def delta(self, k: int, lower, upper) -> int:
        return self.cofacets(k, lower).get(upper, 0)

    def edge_endpoints(self, x) -> tuple:
        """``(v, w)`` with ``delta v(x) = -1`` and ``delta w(x) = +1``."""
        f = self.facets(1, x)
        tail = [v for v, s in f.items() if s == -1]
        head = [v for v, s in f.items() if s == 1]
        if len(tail) != 1 or len(head) != 1:
            raise ComplexError(f"1-cell {x!r} does not have exactly two endpoints")
        return tail[0], head[0]

    @property
    def two_cells(self) -> tuple:
        return self.cells_of(2)

    def one_skeleton(self) -> WeightedGraph:
        vw = dict(self.weights[0])
        ew = {}
        for x in self.cells_of(1):
            v, w = self.edge_endpoints(x)
            ew[edge_key(v, w)] = self.weights[1][x]
        return WeightedGraph(vw, ew)

    def with_weights(self, weights: Sequence[Mapping]) -> "CellComplex":
        """Same cells and incidence, new weight maps (missing dimensions keep theirs)."""
        new = []
        for k in range(len(self.cells)):
            w = dict(self.weights[k])
            if k < len(weights) and weights[k] is not None:
                w.update(weights[k])
            new.append(w)
        return CellComplex(self.cells, tuple(new), self.incidence)


def as_graph(g) -> WeightedGraph:
    if isinstance(g, WeightedGraph):
        return g
    if isinstance(g, CellComplex):
        return g.one_skeleton()
    raise TypeError(f"expected a WeightedGraph or CellComplex, got {type(g).__name__}")


def attach_two_cells(g: WeightedGraph, weights: Mapping) -> CellComplex:
    """Cell complex on ``g`` with a 2-cell for every cycle of positive weight."""
    g = as_graph(g)
    vertices = g.vertices
    edges = g.edges
    inc0 = {}
    for u, v in edges:
        inc0[(u, (u, v))] = -1
        inc0[(v, (u, v))] = 1
    two, w2, inc1 = [], {}, {}
    for z, mz in weights.items():
        if not isinstance(z, Cycle):
            z = canonical_cycle(z)
        for k in range(len(z)):
            a, b = z.vertices[k], z.vertices[(k + 1) % len(z)]
            if not g.adjacent(a, b):
                raise CycleError(f"{z} is not a cycle of the graph: {a!r} !~ {b!r}")
        if mz < 0:
            raise ComplexError(f"negative weight {mz} for {z}")
        if mz == 0:
            continue
        if z in w2:
            raise ComplexError(f"{z} given twice")
        two.append(z)
        w2[z] = mz
    two.sort()
    for z in two:
        for e, s in z.oriented_edges():
            inc1[(e, z)] = s
    cells = (vertices, edges, tuple(two)) if two else (vertices, edges)
    ws = (dict(g.vertex_weights), dict(g.edge_weights), w2) if two else (
        dict(g.vertex_weights), dict(g.edge_weights))
    incs = (inc0, inc1) if two else (inc0,)
    return CellComplex(cells, ws, incs)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    rule: str
    cells: tuple
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid

    def rules(self) -> set:
        return {v.rule for v in self.violations}


def validate_complex(c: CellComplex) -> ValidationReport:
    """Check weights, incidence values, conditions (i)-(iv) and ``delta delta = 0``.

    Rule codes: ``weight``, ``incidence``, ``facet`` (a positive-dimensional
    cell without facets), ``i``, ``ii.a``, ``ii.b``, ``iii``, ``iv`` and
    ``delta2``.
    """
    out: list[Violation] = []
    ncell = len(c.cells)
    for k in range(ncell):
        for label in c.cells[k]:
            w = c.weights[k].get(label)
            if w is None or not (w > 0):
                out.append(Violation("weight", ((k, label),), f"weight of {label!r} must be positive, got {w}"))
    for k, inc in enumerate(c.incidence):
        for (lo, hi), s in inc.items():
            if s not in (-1, 0, 1):
                out.append(Violation("incidence", ((k, lo), (k + 1, hi)), f"coefficient {s} not in {{-1,0,1}}"))
            if not c.has_cell(k, lo) or not c.has_cell(k + 1, hi):
                out.append(Violation("incidence", ((k, lo), (k + 1, hi)),
                                     "incidence between cells of non-consecutive or unknown dimension"))
    for k in range(1, ncell):
        for z in c.cells[k]:
            if not c.facets(k, z):
                out.append(Violation("facet", ((k, z),), f"{k}-cell {z!r} has no facets"))

    # (i)
    for x in c.cells_of(1):
        f = c.facets(1, x)
        plus = sum(1 for s in f.values() if s == 1)
        minus = sum(1 for s in f.values() if s == -1)
        if plus != 1 or minus != 1:
            out.append(Violation("i", ((1, x),), f"1-cell {x!r} has {plus} head(s) and {minus} tail(s)"))

    # (ii)
    for k in range(ncell - 2):
        for z in c.cells[k + 2]:
            through = defaultdict(list)
            for x, sxz in c.facets(k + 2, z).items():
                for v, svx in c.facets(k + 1, x).items():
                    through[v].append(svx * sxz)
            for v, prods in through.items():
                if len(prods) != 2:
                    out.append(Violation("ii.a", ((k, v), (k + 2, z)),
                                         f"{len(prods)} intermediate cells between {v!r} and {z!r}"))
                elif set(prods) != {-1, 1}:
                    out.append(Violation("ii.b", ((k, v), (k + 2, z)),
                                         f"incidence products {prods} between {v!r} and {z!r} do not cancel"))

    # delta delta = 0
    for k in range(ncell - 2):
        if not c.cells[k] or not c.cells[k + 2]:
            continue
        P = (coboundary_matrix(c, k + 1) @ coboundary_matrix(c, k))
        for (i, j), val in np.ndenumerate(P):
            if val != 0:
                out.append(Violation("delta2", ((k, c.cells[k][j]), (k + 2, c.cells[k + 2][i])),
                                     f"(delta delta) = {val}"))

    # (iii) facets of a cell form a connected family (adjacent = sharing a sub-facet)
    for k in range(2, ncell):
        for z in c.cells[k]:
            facets = list(c.facets(k, z))
            subs = {x: set(c.facets(k - 1, x)) for x in facets}
            if facets:
                seen, stack = {facets[0]}, [facets[0]]
                while stack:
                    a = stack.pop()
                    for b in facets:
                        if b not in seen and subs[a] & subs[b]:
                            seen.add(b)
                            stack.append(b)
                if len(seen) != len(facets):
                    out.append(Violation("iii", ((k, z),), f"facets of {z!r} are not connected"))

    # (iv)
    for k in range(1, ncell):
        by_facets = defaultdict(list)
        for z in c.cells[k]:
            by_facets[frozenset(c.facets(k, z))].append(z)
        for key, group in by_facets.items():
            if len(group) > 1 and key:
                out.append(Violation("iv", tuple((k, z) for z in group), f"cells {group} share their facets"))
    return ValidationReport(tuple(out))


# ---------------------------------------------------------------------------
# operators


def _weights_vector(c: CellComplex, k: int, exact: bool) -> list:
    return [convert(c.weights[k][x], exact) for x in c.cells_of(k)]


def coboundary_matrix(c: CellComplex, k: int, exact: bool = True) -> np.ndarray:
    """``delta: C(X_k) -> C(X_{k+1})`` with entry ``(z, x) = delta x(z)``."""
    key = ("delta", k, exact)
    if key in c._cache:
        return c._cache[key]
    rows, cols = c.n_cells(k + 1), c.n_cells(k)
    D = zeros((rows, cols), exact)
    one = Fraction(1) if exact else 1.0
    for j, x in enumerate(c.cells_of(k)):
        for z, s in c.cofacets(k, x).items():
            D[c.index(k + 1, z), j] = s * one
    c._cache[key] = D
    return D


def adjoint_matrix(c: CellComplex, k: int, exact: bool = True) -> np.ndarray:
    """``delta*: C(X_{k+1}) -> C(X_k)`` with entry ``(x, z) = m(z)/m(x) delta x(z)``."""
    key = ("adjoint", k, exact)
    if key in c._cache:
        return c._cache[key]
    D = coboundary_matrix(c, k, exact)
    mk = _weights_vector(c, k, exact)
    mk1 = _weights_vector(c, k + 1, exact)
    A = zeros((len(mk), len(mk1)), exact)
    for (zi, xi), s in np.ndenumerate(D):
        if s != 0:
            A[xi, zi] = mk1[zi] / mk[xi] * s
    c._cache[key] = A
    return A


def down_laplacian(c: CellComplex, k: int, exact: bool = True) -> np.ndarray:
    """``delta delta*`` on ``C(X_k)`` (zero for k = 0)."""
    key = ("down", k, exact)
    if key not in c._cache:
        n = c.n_cells(k)
        if k == 0 or n == 0:
            c._cache[key] = zeros((n, n), exact)
        else:
            c._cache[key] = coboundary_matrix(c, k - 1, exact) @ adjoint_matrix(c, k - 1, exact)
    return c._cache[key]


def up_laplacian(c: CellComplex, k: int, exact: bool = True) -> np.ndarray:
    """``delta* delta`` on ``C(X_k)``."""
    key = ("up", k, exact)
    if key not in c._cache:
        n = c.n_cells(k)
        if c.n_cells(k + 1) == 0:
            c._cache[key] = zeros((n, n), exact)
        else:
            c._cache[key] = adjoint_matrix(c, k, exact) @ coboundary_matrix(c, k, exact)
    return c._cache[key]


def hodge_matrix(c: CellComplex, k: int, exact: bool = True) -> np.ndarray:
    """``H_k = delta delta* + delta* delta``; entry ``(x, y)`` is ``Hy(x)``."""
    key = ("hodge", k, exact)
    if key not in c._cache:
        c._cache[key] = down_laplacian(c, k, exact) + up_laplacian(c, k, exact)
    return c._cache[key]


def weight_vector(c: CellComplex, k: int, exact: bool = True) -> list:
    return _weights_vector(c, k, exact)


def boundary_edges(c: CellComplex, z) -> frozenset:
    return frozenset(c.facets(2, z))


def is_self_adjoint(A: np.ndarray, m: Sequence, tol: float = FLOAT_TOL) -> bool:
    """``M A`` symmetric, i.e. ``A`` self-adjoint on ``l2(X, m)``."""
    n = len(m)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = m[i] * A[i, j], m[j] * A[j, i]
            if isinstance(a, Fraction) and isinstance(b, Fraction):
                if a != b:
                    return False
            elif abs(a - b) > tol:
                return False
    return True
