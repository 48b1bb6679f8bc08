"""Hierarchical top-down correction: cap each node by its parents' corrected scores."""

from __future__ import annotations

import numpy as np

from .dag import Dag, LevelMap
from .errors import AlignmentError


def _check_aligned(dag: Dag, levels: LevelMap, values: np.ndarray):
    if levels.dag is not dag:
        raise AlignmentError("LevelMap was computed from a different Dag")
    if values.shape[-1] != len(dag):
        raise AlignmentError(
            f"{values.shape[-1]} scores for a {len(dag)}-node taxonomy")


def htd_correct_matrix(dag: Dag, levels: LevelMap, flat: np.ndarray) -> np.ndarray:
    """Top-down pass over a whole examples x classes matrix.

    Visiting nodes by increasing max-distance level, each node's score
    becomes min(own flat score, min over parents of the corrected parent
    scores); the root keeps its flat score.  Max-distance levels guarantee
    every parent is final before its children are visited, so the output
    obeys ancestor >= descendant on every edge.
    """
    flat = np.atleast_2d(np.asarray(flat, dtype=np.float64))
    _check_aligned(dag, levels, flat)
    out = flat.copy()
    for d in range(1, levels.max_level + 1):
        for n in levels.levels[d]:
            i = dag.index(n)
            pidx = [dag.index(p) for p in dag.parents(n)]
            np.minimum(flat[:, i], out[:, pidx].min(axis=1), out=out[:, i])
    return out


def htd_correct(dag: Dag, levels: LevelMap, flat) -> np.ndarray:
    """Correct a single score row (1-D array aligned with dag.nodes)."""
    flat = np.asarray(flat, dtype=np.float64)
    if flat.ndim != 1:
        raise AlignmentError("htd_correct expects a 1-D score row")
    return htd_correct_matrix(dag, levels, flat[None, :])[0]
