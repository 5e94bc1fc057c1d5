import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from curv import graphio
from curv.cellcomplex import ComplexError, WeightedGraph
from curv.corpus import random_complex, random_graph
from curv.graphio import GraphFormatError, decode_scalar, encode_scalar

F = Fraction


@given(st.fractions(max_denominator=50))
def test_scalar_roundtrip(q):
    assert decode_scalar(encode_scalar(q)) == q


def test_scalar_encodings():
    assert encode_scalar(F(2, 3)) == "2/3"
    assert encode_scalar(3) == 3
    assert encode_scalar(math.inf) == "inf"
    assert decode_scalar("-inf") == -math.inf
    assert decode_scalar(0.5, exact=False) == 0.5


@pytest.mark.parametrize("seed", range(6))
def test_complex_roundtrip(seed):
    rng = random.Random(seed)
    c = random_complex(random_graph(rng), rng)
    gf = graphio.loads(graphio.dumps(c))
    assert gf.complex.cells == c.cells
    assert [dict(w) for w in gf.complex.weights] == [dict(w) for w in c.weights]
    assert gf.omega is None


def test_omega_roundtrip():
    g = WeightedGraph.from_edges([(1, 2), (2, 3)])
    om = {(1, 2): F(3, 2), (2, 3): F(1)}
    gf = graphio.loads(graphio.dumps(g, om))
    assert gf.omega == om


def test_worked_file_matches(worked_complex):
    from pathlib import Path
    gf = graphio.load(Path(__file__).resolve().parent.parent / "data" / "worked_example_complex.json")
    assert gf.complex.cells == worked_complex.cells


@pytest.mark.parametrize("text, exc", [
    ("not json", GraphFormatError),
    ("[]", GraphFormatError),
    ('{"vertices": []}', GraphFormatError),
    ('{"edges": [{"u": 1}]}', GraphFormatError),
    ('{"edges": [{"u": 1, "v": "b"}]}', GraphFormatError),
    ('{"edges": [{"u": 1, "v": 2, "m": "x"}]}', GraphFormatError),
    ('{"edges": [{"u": 1, "v": 2, "omega": 1}, {"u": 2, "v": 3}]}', GraphFormatError),
    ('{"edges": [{"u": 1, "v": 1}]}', ComplexError),
    ('{"edges": [{"u": 1, "v": 2}, {"u": 2, "v": 1}]}', ComplexError),
    ('{"edges": [{"u": 1, "v": 2, "omega": 0}]}', ComplexError),
    ('{"edges": [{"u": 1, "v": 2}, {"u": 2, "v": 3}], "two_cells": [{"cycle": [1, 2, 3]}]}', ComplexError),
    ('{"edges": [{"u": 1, "v": 2}, {"u": 2, "v": 3}, {"u": 1, "v": 3}],'
     ' "two_cells": [{"cycle": [1, 2, 3]}, {"cycle": [3, 2, 1]}]}', ComplexError),
    ('{"edges": [{"u": 1, "v": 2}, {"u": 2, "v": 3}, {"u": 1, "v": 3}],'
     ' "two_cells": [{"cycle": [1, 2, 3], "m": -1}]}', ComplexError),
])
def test_malformed_inputs(text, exc):
    with pytest.raises(exc):
        graphio.loads(text)


def test_negative_weight_rejected():
    with pytest.raises(ComplexError, match="positive"):
        graphio.loads(json.dumps({"edges": [{"u": 1, "v": 2, "m": "-1"}]}))
