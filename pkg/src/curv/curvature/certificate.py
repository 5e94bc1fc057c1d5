from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from ..numerics import close, convert

FINITE = "optimal"
INFINITE = "infinite"
UNBOUNDED_BELOW = "unbounded"


class MissingCycleError(ValueError):
    """A shortcutting cycle through the edge is not a 2-cell of the complex."""

    def __init__(self, edge, cycle):
        super().__init__(f"shortcutting cycle {cycle} through edge {edge} is not a 2-cell")
        self.edge = edge
        self.cycle = cycle


class InfiniteDistanceError(ValueError):
    def __init__(self, a, b):
        super().__init__(f"infinite distance between {a!r} and {b!r}")
        self.pair = (a, b)


@dataclass(frozen=True)
class CurvatureCertificate:
    """A curvature value with the witness that attains it.

    ``witness`` keys depend on the method: ``f`` (vertex or (k-1)-cell
    potential), ``h`` (one-form), ``n`` (2-cell weights), ``J`` (dual
    operator as a matrix over ``edges``), ``plan`` (a transport plan).
    ``value`` is ``None`` unless ``status == "optimal"``.
    """

    cell: Any
    value: Any
    method: str
    status: str = FINITE
    witness: Mapping = field(default_factory=dict)

    @property
    def finite(self) -> bool:
        return self.status == FINITE


@dataclass(frozen=True)
class PenaltyTransportPlan:
    """Unconstrained plan ``rho >= 0`` on ``N(v,w) x N(w,v)`` with deficiency penalties.

    ``q_v[v'] = Q(v, v')`` and ``q_w[w'] = Q(w, w')`` for the neighbours
    outside the edge; ``q_vw = Q(v, w)``, ``q_wv = Q(w, v)``;
    ``dist[(v', w')]`` is the combinatorial distance.
    """

    edge: tuple
    rho: Mapping
    q_v: Mapping
    q_w: Mapping
    q_vw: Any
    q_wv: Any
    dist: Mapping

    @property
    def sources(self) -> tuple:
        return tuple(self.q_v)

    @property
    def targets(self) -> tuple:
        return tuple(self.q_w)

    def A(self, vp):
        return self.q_v[vp] - sum((r for (a, _), r in self.rho.items() if a == vp), Fraction(0))

    def B(self, wp):
        return self.q_w[wp] - sum((r for (_, b), r in self.rho.items() if b == wp), Fraction(0))

    def objective(self):
        """``Q(v,w) + Q(w,v) + sum rho (1 - d) - sum |A| - sum |B|``."""
        total = self.q_vw + self.q_wv
        total += sum((r * (1 - self.dist[p]) for p, r in self.rho.items()), Fraction(0))
        total -= sum((abs(self.A(a)) for a in self.q_v), Fraction(0))
        total -= sum((abs(self.B(b)) for b in self.q_w), Fraction(0))
        return total

    def is_nonnegative(self) -> bool:
        return all(r >= 0 for r in self.rho.values())

    def support(self) -> list:
        return sorted(p for p, r in self.rho.items() if r != 0)

    def astype(self, exact: bool) -> "PenaltyTransportPlan":
        cv = lambda d: {k: convert(v, exact) for k, v in d.items()}  # noqa: E731
        return PenaltyTransportPlan(self.edge, cv(self.rho), cv(self.q_v), cv(self.q_w),
                                    convert(self.q_vw, exact), convert(self.q_wv, exact), dict(self.dist))


@dataclass(frozen=True)
class KantorovichPlan:
    """Transport plan ``xi`` on ``B_1(v) x B_1(w)`` with the two marginal families."""

    edge: tuple
    xi: Mapping
    row_marginals: Mapping
    col_marginals: Mapping

    def marginal_errors(self) -> list:
        out = []
        for a, target in self.row_marginals.items():
            got = sum((r for (p, _), r in self.xi.items() if p == a), Fraction(0))
            if not close(got, target):
                out.append(("row", a, got, target))
        for b, target in self.col_marginals.items():
            got = sum((r for (_, q), r in self.xi.items() if q == b), Fraction(0))
            if not close(got, target):
                out.append(("col", b, got, target))
        return out
