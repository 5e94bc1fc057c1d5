from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from ..cellcomplex import (CellComplex, MaxLength, Shortcutting, WeightedGraph, canonical_cycle,
                           Cycle, edge_key, enumerate_cycles)
from ..numerics import convert


def as_complex(g) -> CellComplex:
    if isinstance(g, CellComplex):
        return g
    if isinstance(g, WeightedGraph):
        return g.to_complex()
    raise TypeError(f"expected a WeightedGraph or CellComplex, got {type(g).__name__}")


def omega_vector(c: CellComplex, k: int, omega: Mapping | None, exact: bool) -> list:
    one = Fraction(1) if exact else 1.0
    if omega is None:
        return [one] * c.n_cells(k)
    out = []
    for label in c.cells_of(k):
        val = omega[label] if label in omega else (omega[edge_key(*label)] if k == 1 else None)
        if val is None:
            raise KeyError(f"omega missing for cell {label!r}")
        val = convert(val, exact)
        if not (val > 0):
            raise ValueError(f"omega must be positive, got {val} on {label!r}")
        out.append(val)
    return out


def edge_label(c: CellComplex, x):
    """Resolve ``x`` given as a label or as an unordered vertex pair."""
    if c.has_cell(1, x):
        return x
    key = edge_key(*x)
    if c.has_cell(1, key):
        return key
    raise KeyError(f"edge {x!r} not in complex")


def default_candidates(g, omega: Mapping | None, edge=None) -> list[Cycle]:
    """Cycles of length <= 5 (omega = 1) or shortcutting cycles."""
    if omega is None:
        cycles = enumerate_cycles(g, MaxLength(5))
        if edge is not None:
            e = edge_key(*edge)
            cycles = [z for z in cycles if e in z.edges()]
        return cycles
    edges = [edge] if edge is not None else list(g.edges)
    found = set()
    for e in edges:
        found.update(enumerate_cycles(g, Shortcutting(edge_key(*e), omega)))
    return sorted(found)


def normalise_cycles(cycles) -> list[Cycle]:
    return sorted({z if isinstance(z, Cycle) else canonical_cycle(z) for z in cycles})


def cycle_sign(z: Cycle) -> dict:
    """``{edge: delta edge (z)}`` for a cycle attached along its traversal."""
    return dict(z.oriented_edges())
