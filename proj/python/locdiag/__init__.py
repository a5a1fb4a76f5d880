"""Exact rank computations for matrix pencils, classical chains and their lemma checks."""

import json

from . import _core

__all__ = [
    "rank", "char_poly", "tuple_rank", "pencil_rank", "descriptor_intersect",
    "reduce_graph", "replay_graph", "verify", "run_suite", "lemma_ids",
]


def _dump(x):
    return x if isinstance(x, str) else json.dumps(x)


def rank(matrix, field=""):
    return _core.rank(_dump(matrix), field)


def char_poly(matrix, field=""):
    """Coefficients of det(xI - M), low to high, as strings."""
    return json.loads(_core.char_poly(_dump(matrix), field))


def tuple_rank(matrix, field=""):
    return json.loads(_core.tuple_rank(_dump(matrix), field))


def pencil_rank(matrices, field=""):
    return json.loads(_core.pencil_rank(_dump(matrices), field))


def descriptor_intersect(a, b, field="qq"):
    return json.loads(_core.descriptor_intersect(_dump(a), _dump(b), field))


def reduce_graph(graph):
    return json.loads(_core.reduce_graph(_dump(graph)))


def replay_graph(graph, certificate):
    return _core.replay_graph(_dump(graph), _dump(certificate))


def verify(lemma, params=None, seed=0):
    return json.loads(_core.verify(lemma, _dump(params or {}), seed))


def run_suite(config=None, seed=0):
    """Run the given suite config, or the default check list when config is None."""
    return json.loads(_core.run_suite("" if config is None else _dump(config), seed))


def lemma_ids():
    return list(_core.lemma_ids())
