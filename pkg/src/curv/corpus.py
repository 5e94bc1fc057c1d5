"""Seeded corpus of small random connected weighted graphs."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .cellcomplex import WeightedGraph, attach_two_cells, enumerate_cycles, MaxLength

CORPUS_SEED = 0


@dataclass(frozen=True)
class CorpusConfig:
    size: int = 100
    seed: int = CORPUS_SEED
    max_vertices: int = 7
    min_vertices: int = 2
    unit_fraction: float = 0.3  # share of graphs with all weights 1
    numerators: tuple = (1, 2, 3, 4, 5)
    denominators: tuple = (1, 2, 3)


def random_rational(rng: random.Random, cfg: CorpusConfig) -> Fraction:
    return Fraction(rng.choice(cfg.numerators), rng.choice(cfg.denominators))


def random_graph(rng: random.Random, cfg: CorpusConfig = CorpusConfig()) -> WeightedGraph:
    n = rng.randint(cfg.min_vertices, cfg.max_vertices)
    edges = set()
    for i in range(2, n + 1):
        edges.add((rng.randint(1, i - 1), i))
    density = rng.uniform(0.15, 0.75)
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if rng.random() < density:
                edges.add((u, v))
    unit = rng.random() < cfg.unit_fraction
    one = Fraction(1)
    vw = {v: one if unit else random_rational(rng, cfg) for v in range(1, n + 1)}
    ew = {e: one if unit else random_rational(rng, cfg) for e in sorted(edges)}
    return WeightedGraph(vw, ew)


def corpus(cfg: CorpusConfig = CorpusConfig()) -> list[WeightedGraph]:
    rng = random.Random(cfg.seed)
    return [random_graph(rng, cfg) for _ in range(cfg.size)]


def random_two_cell_weights(g: WeightedGraph, rng: random.Random, cfg: CorpusConfig = CorpusConfig(),
                            max_length: int = 5, p_zero: float = 0.3) -> dict:
    """Random non-negative weights on the cycles of length ``<= max_length`` (some zero)."""
    out = {}
    for z in enumerate_cycles(g, MaxLength(max_length)):
        out[z] = Fraction(0) if rng.random() < p_zero else random_rational(rng, cfg)
    return out


def random_complex(g: WeightedGraph, rng: random.Random, cfg: CorpusConfig = CorpusConfig()):
    return attach_two_cells(g, random_two_cell_weights(g, rng, cfg))


def worked_example_graph() -> WeightedGraph:
    """Vertices 1..6 with ``v ~ w`` iff ``|v - w|`` is 1 or 2, unit weights."""
    edges = [(u, v) for u in range(1, 7) for v in range(u + 1, 7) if v - u in (1, 2)]
    return WeightedGraph.from_edges(edges)


def worked_example_weights() -> dict:
    """The optimal 2-cell weights of the six-vertex example (zero on the 5-cycles)."""
    from .cellcomplex import canonical_cycle
    two, one = Fraction(2, 3), Fraction(1, 3)
    raw = {(1, 2, 3): two, (4, 5, 6): two, (2, 3, 4): one, (3, 4, 5): one,
           (1, 2, 4, 3): two, (3, 4, 6, 5): two, (2, 3, 5, 4): two,
           (1, 2, 4, 5, 3): Fraction(0), (2, 3, 5, 6, 4): Fraction(0)}
    return {canonical_cycle(k): v for k, v in raw.items()}


def worked_example_complex():
    return attach_two_cells(worked_example_graph(), worked_example_weights())


# edge order x_n = (ceil(n/2), ceil((n+3)/2)), n = 1..9
WORKED_EDGE_ORDER = tuple(((n + 1) // 2, (n + 4) // 2) for n in range(1, 10))
