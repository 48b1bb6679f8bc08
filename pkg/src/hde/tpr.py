"""True-path-rule correction: bottom-up positive propagation, then a top-down pass.

Phase B walks the levels from the deepest up to 1 and blends each node's
flat score with the already-final scores of its "positive" children (or
descendants, in the descendant variants).  Phase C re-establishes
hierarchy consistency with the same top-down sweep HTD uses, applied to
the phase-B values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dag import Dag, LevelMap
from .errors import AlignmentError, RangeError, WeightRangeError
from .htd import _check_aligned

POSITIVE_SELECTIONS = ("threshold", "adaptive")
DESCENDANT_MODES = ("children", "descendants-constant", "descendants-linear")


@dataclass
class TprConfig:
    """Knobs of the bottom-up phase.

    positive_selection "threshold" admits a child j into the positive set
    when its corrected score strictly exceeds t_j; "adaptive" compares it
    against the parent's flat score instead and needs no thresholds.
    `w`, when set, blends flat score and positive-children mean with weight
    w on the flat side.  descendant modes pool all positive descendants,
    with equal weight ("descendants-constant") or weights decaying linearly
    in the node-to-descendant distance ("descendants-linear").
    """

    positive_selection: str = "threshold"
    thresholds: np.ndarray | None = None
    w: float | None = None
    descendant_mode: str = "children"
    literal_topdown: bool = False

    def __post_init__(self):
        if self.positive_selection not in POSITIVE_SELECTIONS:
            raise ValueError(f"positive_selection must be one of "
                             f"{POSITIVE_SELECTIONS}")
        if self.descendant_mode not in DESCENDANT_MODES:
            raise ValueError(f"descendant_mode must be one of {DESCENDANT_MODES}")
        if self.thresholds is not None:
            t = np.asarray(getattr(self.thresholds, "values", self.thresholds),
                           dtype=np.float64)
            if t.size and (t.min() < 0.0 or t.max() > 1.0):
                raise RangeError("thresholds must lie in [0, 1]")
            self.thresholds = t
        if self.w is not None and not (0.0 <= self.w <= 1.0):
            raise WeightRangeError(f"w must lie in [0, 1], got {self.w}")
        if self.positive_selection == "threshold" and self.thresholds is None:
            raise ValueError("threshold selection requires a threshold vector")


def positive_children(dag: Dag, node: str, current, flat, config: TprConfig):
    """Ordered tuple of the node's children admitted into the positive set.

    `current` holds the finalized bottom-up scores (children of `node` are
    already final by level order); `flat` the uncorrected row.  Strict
    inequality in both selection modes.
    """
    current = np.asarray(current, dtype=np.float64)
    flat = np.asarray(flat, dtype=np.float64)
    out = []
    for c in dag.children(node):
        j = dag.index(c)
        cutoff = (config.thresholds[j] if config.positive_selection == "threshold"
                  else flat[dag.index(node)])
        if current[j] > cutoff:
            out.append(c)
    return tuple(out)


def _sub_dag_distances(dag: Dag, node: str):
    """Longest-path distance from `node` to each of its descendants."""
    desc = set(dag.descendants(node))
    dist = {node: 0}
    for n in dag.topological_order():
        if n not in desc:
            continue
        dist[n] = 1 + max(dist[p] for p in dag.parents(n) if p in dist)
    del dist[node]
    return dist


def _bottom_up_matrix(dag: Dag, levels: LevelMap, flat: np.ndarray,
                      config: TprConfig) -> np.ndarray:
    """Phase B over a whole matrix; root row values are left untouched."""
    cfg = config
    if cfg.thresholds is not None and cfg.thresholds.shape != (len(dag),):
        raise AlignmentError("threshold vector not aligned with the taxonomy")
    out = flat.copy()
    t = cfg.thresholds
    for d in range(levels.max_level, 0, -1):
        for n in levels.levels[d]:
            i = dag.index(n)
            if cfg.descendant_mode == "children":
                members = dag.children(n)
                weights = None
            else:
                members = dag.descendants(n)
                if cfg.descendant_mode == "descendants-linear" and members:
                    dists = _sub_dag_distances(dag, n)
                    d_max = max(dists.values())
                    weights = np.array(
                        [(d_max - dists[m] + 1) / d_max for m in members])
                else:
                    weights = None
            if not members:
                continue
            midx = [dag.index(m) for m in members]
            vals = out[:, midx]
            if cfg.positive_selection == "threshold":
                mask = vals > t[midx]
            else:
                mask = vals > flat[:, [i]]
            if weights is None:
                wsum = mask.sum(axis=1)
                vsum = np.where(mask, vals, 0.0).sum(axis=1)
            else:
                wsum = (mask * weights).sum(axis=1)
                vsum = (np.where(mask, vals, 0.0) * weights).sum(axis=1)
            if cfg.w is None:
                out[:, i] = (flat[:, i] + vsum) / (1.0 + wsum)
            else:
                # empty positive set: the children term vanishes entirely
                safe = np.where(wsum > 0, wsum, 1.0)
                out[:, i] = np.where(
                    wsum > 0,
                    cfg.w * flat[:, i] + (1.0 - cfg.w) * vsum / safe,
                    flat[:, i])
    return out


def _topdown_matrix(dag: Dag, levels: LevelMap, base: np.ndarray,
                    flat: np.ndarray, literal: bool) -> np.ndarray:
    """Phase C: top-down consistency sweep over the phase-B values `base`.

    The literal variant compares and reassigns against the flat scores,
    which discards the bottom-up work; kept for regression comparison.
    """
    out = base.copy()
    ri = dag.index(dag.root)
    out[:, ri] = flat[:, ri]
    for d in range(1, levels.max_level + 1):
        for n in levels.levels[d]:
            i = dag.index(n)
            pidx = [dag.index(p) for p in dag.parents(n)]
            pmin = out[:, pidx].min(axis=1)
            ref = flat[:, i] if literal else base[:, i]
            np.minimum(ref, pmin, out=out[:, i])
    return out


def tpr_correct_matrix(dag: Dag, levels: LevelMap, flat: np.ndarray,
                       config: TprConfig) -> np.ndarray:
    """Full TPR correction (any variant, per `config`) of a score matrix."""
    flat = np.atleast_2d(np.asarray(flat, dtype=np.float64))
    _check_aligned(dag, levels, flat)
    b = _bottom_up_matrix(dag, levels, flat, config)
    return _topdown_matrix(dag, levels, b, flat, config.literal_topdown)


def _as_row(dag, levels, flat, config):
    flat = np.asarray(flat, dtype=np.float64)
    if flat.ndim != 1:
        raise AlignmentError("expected a 1-D score row")
    return tpr_correct_matrix(dag, levels, flat[None, :], config)[0]


def tpr_correct(dag: Dag, levels: LevelMap, flat, config: TprConfig) -> np.ndarray:
    """Plain TPR on one row: equal-weight pooling of positive children."""
    if config.descendant_mode != "children":
        raise ValueError("tpr_correct requires descendant_mode='children'")
    return _as_row(dag, levels, flat, config)


def tpr_w_correct(dag: Dag, levels: LevelMap, flat, config: TprConfig) -> np.ndarray:
    """Weighted TPR on one row; config.w balances flat vs children contribution."""
    if config.w is None:
        raise WeightRangeError("tpr_w_correct requires config.w")
    return _as_row(dag, levels, flat, config)


def tpr_desc_correct(dag: Dag, levels: LevelMap, flat,
                     config: TprConfig) -> np.ndarray:
    """Descendant-pooling TPR on one row (constant or linear-decay weights)."""
    if config.descendant_mode == "children":
        raise ValueError("tpr_desc_correct requires a descendant mode")
    return _as_row(dag, levels, flat, config)
