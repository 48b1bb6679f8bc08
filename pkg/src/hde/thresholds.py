"""Per-class threshold fitting and evaluation metrics.

Three fitting strategies: a single global value, per-class F-score
maximization over a grid, and a percentile of the positive-example score
distribution.  A class is predicted positive when its score strictly
exceeds its threshold, everywhere in this package.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .dag import Dag
from .errors import (
    AlignmentError,
    EmptyGridError,
    NoPositivesWarning,
    ParseError,
    RangeError,
)
from .scores import ScoreMatrix, count_violations

DEFAULT_GRID = np.round(np.arange(0.01, 1.00, 0.01), 2)


@dataclass
class ThresholdVector:
    """Per-class thresholds aligned with the taxonomy node order."""

    class_ids: list
    values: np.ndarray
    strategy_tag: str = "global"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (len(self.class_ids),):
            raise AlignmentError("one threshold per class required")
        if self.values.size and (self.values.min() < 0.0 or self.values.max() > 1.0):
            raise RangeError("thresholds must lie in [0, 1]")


@dataclass
class ClassMetrics:
    """Per-class confusion counts and P/R/F at fixed thresholds."""

    class_ids: list
    tp: np.ndarray
    fp: np.ndarray
    tn: np.ndarray
    fn: np.ndarray
    precision: np.ndarray = field(init=False)
    recall: np.ndarray = field(init=False)
    f_score: np.ndarray = field(init=False)

    def __post_init__(self):
        self.precision = _safe_div(self.tp, self.tp + self.fp)
        self.recall = _safe_div(self.tp, self.tp + self.fn)
        self.f_score = _safe_div(2 * self.precision * self.recall,
                                 self.precision + self.recall)


@dataclass
class EvalReport:
    metrics: ClassMetrics
    n_examples: int
    violation_count: int
    max_violation_gap: float


def _safe_div(num, den):
    num = np.asarray(num, dtype=np.float64)
    den = np.asarray(den, dtype=np.float64)
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den > 0)
    return out


def fit_global(t_bar: float, class_ids) -> ThresholdVector:
    """Same threshold for every class."""
    if not (0.0 <= t_bar <= 1.0):
        raise RangeError(f"threshold must lie in [0, 1], got {t_bar}")
    class_ids = list(class_ids)
    return ThresholdVector(class_ids, np.full(len(class_ids), t_bar), "global")


def _f_score(tp, fp, fn):
    p = tp / (tp + fp) if tp + fp > 0 else 0.0
    r = tp / (tp + fn) if tp + fn > 0 else 0.0
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def fit_fscore(train_scores: ScoreMatrix, train_labels: ScoreMatrix,
               grid=None) -> ThresholdVector:
    """Per class, the smallest grid value maximizing training F-score.

    F is evaluated for the rule "predict iff score > t".  Classes without
    positive examples get max(grid), which keeps them out of the positive
    sets downstream.
    """
    grid = DEFAULT_GRID if grid is None else np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise EmptyGridError("candidate threshold grid is empty")
    if grid.min() < 0.0 or grid.max() > 1.0:
        raise RangeError("grid values must lie in [0, 1]")
    _check_pair(train_scores, train_labels)
    grid = np.sort(grid)

    s = train_scores.values
    pos = train_labels.values > 0.5
    out = np.empty(s.shape[1])
    for j in range(s.shape[1]):
        if not pos[:, j].any():
            out[j] = grid[-1]
            continue
        best_f, best_t = -1.0, grid[0]
        for t in grid:
            pred = s[:, j] > t
            tp = int((pred & pos[:, j]).sum())
            fp = int((pred & ~pos[:, j]).sum())
            fn = int((~pred & pos[:, j]).sum())
            f = _f_score(tp, fp, fn)
            if f > best_f:  # ties keep the smallest (earliest) grid value
                best_f, best_t = f, t
        out[j] = best_t
    return ThresholdVector(list(train_scores.class_ids), out, "fscore")


def fit_percentile(train_scores: ScoreMatrix, train_labels: ScoreMatrix,
                   k: float) -> ThresholdVector:
    """Per class, the k-th percentile of the positive examples' scores.

    Nearest-rank convention: the value at 1-based index ceil(k/100 * m) of
    the sorted m positive scores, with k = 0 mapped to the minimum.
    Classes with no positives fall back to 0.5 with a warning.
    """
    if not (0.0 <= k <= 100.0):
        raise RangeError(f"percentile must lie in [0, 100], got {k}")
    _check_pair(train_scores, train_labels)
    s = train_scores.values
    pos = train_labels.values > 0.5
    out = np.empty(s.shape[1])
    for j in range(s.shape[1]):
        vals = np.sort(s[pos[:, j], j])
        if vals.size == 0:
            warnings.warn(
                f"class {train_scores.class_ids[j]!r} has no positive "
                "training examples; threshold falls back to 0.5",
                NoPositivesWarning, stacklevel=2)
            out[j] = 0.5
            continue
        rank = max(1, int(np.ceil(k / 100.0 * vals.size)))
        out[j] = vals[rank - 1]
    return ThresholdVector(list(train_scores.class_ids), out, "percentile")


def evaluate(dag: Dag, scores: ScoreMatrix, labels: ScoreMatrix,
             thresholds: ThresholdVector) -> EvalReport:
    """Per-class precision/recall/F at the given thresholds, plus the
    dataset's true-path-rule violation statistics."""
    _check_pair(scores, labels)
    if thresholds.class_ids != scores.class_ids:
        raise AlignmentError("thresholds not aligned with the score columns")
    if scores.class_ids != list(dag.nodes):
        raise AlignmentError("score columns not aligned with the taxonomy")

    pred = scores.values > thresholds.values
    pos = labels.values > 0.5
    tp = (pred & pos).sum(axis=0)
    fp = (pred & ~pos).sum(axis=0)
    fn = (~pred & pos).sum(axis=0)
    tn = (~pred & ~pos).sum(axis=0)
    metrics = ClassMetrics(list(scores.class_ids), tp, fp, tn, fn)

    from .scores import check_valid_continuous
    count = count_violations(dag, scores.values)
    max_gap = 0.0
    if count:
        for r in range(scores.values.shape[0]):
            rep = check_valid_continuous(dag, scores.values[r])
            max_gap = max(max_gap, rep.max_gap)
    return EvalReport(metrics, scores.values.shape[0], count, max_gap)


def _check_pair(scores: ScoreMatrix, labels: ScoreMatrix):
    if scores.class_ids != labels.class_ids:
        raise AlignmentError("scores and labels have different class columns")
    if scores.example_ids != labels.example_ids:
        raise AlignmentError("scores and labels have different example ids")
    v = labels.values
    if v.size and not np.isin(v, (0.0, 1.0)).all():
        raise RangeError("labels must be 0/1")


def read_thresholds(path) -> ThresholdVector:
    """Read a `class<TAB>threshold` TSV."""
    ids, vals = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError("expected 'class<TAB>threshold'", line=lineno)
            ids.append(parts[0])
            try:
                vals.append(float(parts[1]))
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from None
    if not ids:
        raise ParseError(f"no thresholds found in {path}")
    return ThresholdVector(ids, np.array(vals), "file")


def write_thresholds(tv: ThresholdVector, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# strategy: {tv.strategy_tag}\n")
        for c, v in zip(tv.class_ids, tv.values):
            fh.write(f"{c}\t{repr(float(v))}\n")


def align_thresholds(tv: ThresholdVector, dag: Dag) -> ThresholdVector:
    """Reorder a threshold vector to the Dag node order (root defaults to 1.0)."""
    have = dict(zip(tv.class_ids, tv.values))
    extra = [c for c in tv.class_ids if c not in dag]
    if extra:
        raise AlignmentError(f"threshold classes not in the taxonomy: {extra}")
    missing = [n for n in dag.nodes if n not in have and n != dag.root]
    if missing:
        raise AlignmentError(f"thresholds lack classes: {missing}")
    vals = np.array([have.get(n, 1.0) for n in dag.nodes])
    return ThresholdVector(list(dag.nodes), vals, tv.strategy_tag)
