"""Compare the five curvature characterisations edge by edge over the seeded corpus."""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from curv.cellcomplex import attach_two_cells
from curv.corpus import CorpusConfig, corpus
from curv.curvature import (default_candidates, kantorovich_curvature, max_forman_edge,
                            ollivier_edge, ollivier_oneform, penalty_transport_curvature)


@dataclass(frozen=True)
class RunConfig:
    size: int = 100
    seed: int = 0
    exact: bool = True
    verbose: bool = False


def edge_values(g, e, exact: bool) -> dict:
    oneform_c = attach_two_cells(g, {z: 1 for z in default_candidates(g, None, e)})
    return {
        "potential": ollivier_edge(g, e, exact=exact).value,
        "oneform": ollivier_oneform(oneform_c, e, exact=exact).value,
        "max_forman": max_forman_edge(g, e, exact=exact).value,
        "kantorovich": kantorovich_curvature(g, e, exact=exact).value,
        "penalty": penalty_transport_curvature(g, e, exact=exact).value,
    }


def run(cfg: RunConfig) -> int:
    graphs = corpus(CorpusConfig(size=cfg.size, seed=cfg.seed))
    t0 = time.perf_counter()
    n_edges, bad = 0, 0
    for gi, g in enumerate(graphs):
        for e in g.edges:
            vals = edge_values(g, e, cfg.exact)
            n_edges += 1
            agree = len({round(float(v), 9) for v in vals.values()}) == 1 if not cfg.exact \
                else len(set(vals.values())) == 1
            bad += not agree
            if cfg.verbose or not agree:
                print(f"graph {gi:3d} edge {e}: " + ", ".join(f"{k}={v}" for k, v in vals.items()))
    dt = time.perf_counter() - t0
    print(f"{len(graphs)} graphs, {n_edges} edges, {bad} disagreements, {dt:.1f}s")
    return 1 if bad else 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=RunConfig.size)
    ap.add_argument("--seed", type=int, default=RunConfig.seed)
    ap.add_argument("--float", action="store_true")
    ap.add_argument("-v", "--verbose", action="store_true")
    a = ap.parse_args(argv)
    return run(RunConfig(a.size, a.seed, not a.float, a.verbose))


if __name__ == "__main__":
    raise SystemExit(main())
