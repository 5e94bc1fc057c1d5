"""JSON graph/complex files and lossless scalar encoding."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .cellcomplex import (CellComplex, ComplexError, CycleError, WeightedGraph, attach_two_cells,
                          canonical_cycle, edge_key)
from .numerics import parse_scalar

SCHEMA = 1


class GraphFormatError(ValueError):
    """The input is not a well-formed graph file."""


@dataclass(frozen=True)
class GraphFile:
    graph: WeightedGraph
    complex: CellComplex
    omega: Mapping | None  # edge key -> length, or None when no edge carries one


def encode_scalar(x):
    """Fractions become ``"p/q"`` (or ``"p"``); ints and floats stay numbers; infinities become strings."""
    if isinstance(x, (bool, int)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if hasattr(x, "item"):
        return encode_scalar(x.item())
    return x


def decode_scalar(x, exact: bool = True):
    if isinstance(x, str) and x in ("inf", "-inf"):
        return math.inf if x == "inf" else -math.inf
    return parse_scalar(x, exact)


def _scalar(value, where: str):
    try:
        return parse_scalar(value, True)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise GraphFormatError(f"{where}: cannot read weight {value!r}") from exc


def parse_graph(data: Mapping) -> GraphFile:
    """Build graph, complex and optional omega from the decoded JSON object."""
    if not isinstance(data, Mapping):
        raise GraphFormatError("top level must be an object")
    try:
        verts = data.get("vertices", [])
        edges = data["edges"]
    except KeyError as exc:
        raise GraphFormatError(f"missing key {exc}") from exc
    if not isinstance(verts, list) or not isinstance(edges, list):
        raise GraphFormatError("'vertices' and 'edges' must be lists")
    vw = {}
    for i, item in enumerate(verts):
        if not isinstance(item, Mapping) or "id" not in item:
            raise GraphFormatError(f"vertices[{i}] must be an object with an 'id'")
        vid = item["id"]
        if not isinstance(vid, int) or isinstance(vid, bool):
            raise GraphFormatError(f"vertices[{i}]: id must be an integer")
        if vid in vw:
            raise GraphFormatError(f"duplicate vertex id {vid}")
        vw[vid] = _scalar(item.get("m", 1), f"vertices[{i}]")
    ew, omega = {}, {}
    for i, item in enumerate(edges):
        if not isinstance(item, Mapping) or "u" not in item or "v" not in item:
            raise GraphFormatError(f"edges[{i}] must be an object with 'u' and 'v'")
        u, v = item["u"], item["v"]
        if not all(isinstance(a, int) and not isinstance(a, bool) for a in (u, v)):
            raise GraphFormatError(f"edges[{i}]: endpoints must be integers")
        for a in (u, v):
            vw.setdefault(a, Fraction(1))
        try:
            key = edge_key(u, v)
        except ValueError as exc:
            raise ComplexError(f"edges[{i}]: {exc}") from exc
        if key in ew:
            raise ComplexError(f"edges[{i}]: duplicate edge {key}")
        ew[key] = _scalar(item.get("m", 1), f"edges[{i}]")
        if "omega" in item:
            omega[key] = _scalar(item["omega"], f"edges[{i}].omega")
    if omega and len(omega) != len(ew):
        raise GraphFormatError("omega must be given on every edge or on none")
    for key, val in omega.items():
        if not val > 0:
            raise ComplexError(f"omega of edge {key} must be positive, got {val}")
    g = WeightedGraph(vw, ew)
    cells = {}
    for i, item in enumerate(data.get("two_cells", []) or []):
        if not isinstance(item, Mapping) or "cycle" not in item:
            raise GraphFormatError(f"two_cells[{i}] must be an object with a 'cycle'")
        seq = item["cycle"]
        if not isinstance(seq, list):
            raise GraphFormatError(f"two_cells[{i}]: cycle must be a list")
        try:
            z = canonical_cycle(tuple(seq), g)
        except CycleError as exc:
            raise ComplexError(f"two_cells[{i}]: {exc}") from exc
        if z in cells:
            raise ComplexError(f"two_cells[{i}]: duplicate cycle {z}")
        mz = _scalar(item.get("m", 1), f"two_cells[{i}]")
        if mz < 0:
            raise ComplexError(f"two_cells[{i}]: weight must be non-negative, got {mz}")
        cells[z] = mz
    return GraphFile(g, attach_two_cells(g, cells), omega or None)


def loads(text: str) -> GraphFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc}") from exc
    return parse_graph(data)


def load(path) -> GraphFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def graph_to_dict(c, omega: Mapping | None = None) -> dict:
    """Inverse of :func:`parse_graph` (2-cells in canonical order)."""
    if isinstance(c, WeightedGraph):
        c = c.to_complex()
    out = {
        "vertices": [{"id": v, "m": encode_scalar(c.m(0, v))} for v in c.cells_of(0)],
        "edges": [],
        "two_cells": [],
    }
    for e in c.cells_of(1):
        u, v = c.edge_endpoints(e)
        item = {"u": u, "v": v, "m": encode_scalar(c.m(1, e))}
        if omega is not None:
            item["omega"] = encode_scalar(omega[edge_key(u, v)])
        out["edges"].append(item)
    if c.dim >= 2:
        for z in c.cells_of(2):
            out["two_cells"].append({"cycle": list(z.vertices), "m": encode_scalar(c.m(2, z))})
    return out


def dumps(c, omega: Mapping | None = None) -> str:
    return json.dumps(graph_to_dict(c, omega), indent=2)


def dump(c, path, omega: Mapping | None = None) -> None:
    Path(path).write_text(dumps(c, omega) + "\n")
