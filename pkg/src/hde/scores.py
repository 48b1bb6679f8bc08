"""Score matrices, discrete labelings, validity checks and TSV round-tripping."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dag import Dag
from .errors import (
    AlignmentError,
    MissingClassError,
    ParseError,
    RangeError,
    UnknownNodeError,
)


@dataclass
class ScoreMatrix:
    """Dense examples x classes matrix of scores in [0, 1].

    Rows are examples, columns are classes.  For hierarchy operations the
    columns must follow the Dag node order; use :func:`align_to_dag`.
    """

    example_ids: list
    class_ids: list
    values: np.ndarray
    comments: list = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise AlignmentError("values must be a 2-D matrix")
        if self.values.shape != (len(self.example_ids), len(self.class_ids)):
            raise AlignmentError(
                f"shape {self.values.shape} does not match "
                f"{len(self.example_ids)} examples x {len(self.class_ids)} classes")
        if len(set(self.example_ids)) != len(self.example_ids):
            raise ParseError("duplicate example ids")
        if len(set(self.class_ids)) != len(self.class_ids):
            raise ParseError("duplicate class ids")
        if self.values.size and (self.values.min() < 0.0 or self.values.max() > 1.0):
            raise RangeError("scores must lie in [0, 1]")

    @property
    def shape(self):
        return self.values.shape

    def row(self, example_id):
        try:
            i = self.example_ids.index(example_id)
        except ValueError:
            raise UnknownNodeError(f"unknown example {example_id!r}") from None
        return self.values[i]

    def __eq__(self, other):
        if not isinstance(other, ScoreMatrix):
            return NotImplemented
        return (self.example_ids == other.example_ids
                and self.class_ids == other.class_ids
                and np.array_equal(self.values, other.values))


@dataclass(frozen=True)
class ViolationReport:
    """Edges of one score row that break the ancestor >= descendant rule.

    Each entry is (parent, child, parent_score, child_score) with
    parent_score < child_score - eps.  Empty report <=> the row is valid.
    """

    violations: tuple
    total_count: int
    max_gap: float

    def __bool__(self):
        return self.total_count > 0


def labeling_to_sets(dag: Dag, labels: ScoreMatrix):
    """0/1 label matrix -> list of per-example predicted-class sets."""
    out = []
    for r in range(labels.values.shape[0]):
        out.append({labels.class_ids[j]
                    for j in np.flatnonzero(labels.values[r] > 0.5)})
    return out


def check_valid_discrete(dag: Dag, labeling) -> bool:
    """True iff every labeled class has all its parents labeled too.

    `labeling` is a set (or iterable) of class ids.  Parent closure implies
    full ancestor closure by induction over the hierarchy.
    """
    chosen = set(labeling)
    for n in chosen:
        dag.index(n)  # raises UnknownNodeError
    for n in chosen:
        for p in dag.parents(n):
            if p not in chosen:
                return False
    return True


def check_valid_continuous(dag: Dag, row, eps: float = 0.0) -> ViolationReport:
    """Scan every edge of `dag` for child scores exceeding their parent's.

    `row` is a score vector aligned with `dag.nodes`.  An edge (p, c) is a
    violation when row[c] > row[p] + eps (eps = 0: strict comparison).
    """
    row = np.asarray(row, dtype=np.float64)
    if row.shape != (len(dag),):
        raise AlignmentError(
            f"row has {row.shape} values for a {len(dag)}-node taxonomy")
    bad = []
    max_gap = 0.0
    for p, c in dag.edges:
        ps, cs = row[dag.index(p)], row[dag.index(c)]
        if cs > ps + eps:
            bad.append((p, c, float(ps), float(cs)))
            max_gap = max(max_gap, float(cs - ps))
    return ViolationReport(tuple(bad), len(bad), max_gap)


def edge_index_arrays(dag: Dag):
    """(parent_indices, child_indices) int arrays, one entry per edge."""
    pi = np.fromiter((dag.index(p) for p, _ in dag.edges), dtype=np.intp,
                     count=len(dag.edges))
    ci = np.fromiter((dag.index(c) for _, c in dag.edges), dtype=np.intp,
                     count=len(dag.edges))
    return pi, ci


def count_violations(dag: Dag, values: np.ndarray, eps: float = 0.0) -> int:
    """Total number of violating (edge, example) pairs in a whole matrix."""
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    pi, ci = edge_index_arrays(dag)
    return int((values[:, ci] > values[:, pi] + eps).sum())


def read_scores(path) -> ScoreMatrix:
    """Read a scores TSV: header `example<TAB>class...`, one row per example.

    `#` comment lines before the header are kept on the returned matrix.
    """
    comments = []
    header = None
    example_ids = []
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            if line.lstrip().startswith("#"):
                comments.append(line.lstrip("# ").rstrip())
                continue
            parts = line.split("\t")
            if header is None:
                if parts[0] != "example" or len(parts) < 2:
                    raise ParseError(
                        "header must start with 'example' followed by class ids",
                        line=lineno)
                header = parts[1:]
                continue
            if len(parts) != len(header) + 1:
                raise ParseError(
                    f"expected {len(header) + 1} columns, got {len(parts)}",
                    line=lineno)
            example_ids.append(parts[0])
            try:
                vals = [float(v) for v in parts[1:]]
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from None
            for v in vals:
                if not (0.0 <= v <= 1.0):
                    raise RangeError(f"line {lineno}: value {v!r} outside [0, 1]")
            rows.append(vals)
    if header is None:
        raise ParseError(f"no header found in {path}")
    values = np.array(rows, dtype=np.float64).reshape(len(example_ids), len(header))
    return ScoreMatrix(example_ids, list(header), values, comments=comments)


def write_scores_stream(matrix: ScoreMatrix, fh, digits: int | None = None) -> None:
    for c in matrix.comments:
        fh.write(f"# {c}\n")
    fh.write("example\t" + "\t".join(matrix.class_ids) + "\n")
    for i, ex in enumerate(matrix.example_ids):
        row = matrix.values[i]
        if digits is None:
            cells = [repr(float(v)) for v in row]
        else:
            cells = [f"{v:.{digits}f}" for v in row]
        fh.write(ex + "\t" + "\t".join(cells) + "\n")


def write_scores(matrix: ScoreMatrix, path, digits: int | None = None) -> None:
    """Write a scores TSV; `digits=None` keeps full round-trip precision."""
    with open(path, "w", encoding="utf-8") as fh:
        write_scores_stream(matrix, fh, digits)


def align_to_dag(matrix: ScoreMatrix, dag: Dag) -> ScoreMatrix:
    """Reorder columns to the Dag node order, imputing a missing root as 1.0.

    Missing non-root classes raise MissingClassError; columns that are not
    taxonomy nodes raise AlignmentError.
    """
    have = {c: j for j, c in enumerate(matrix.class_ids)}
    extra = [c for c in matrix.class_ids if c not in dag]
    if extra:
        raise AlignmentError(f"columns not in the taxonomy: {extra}")
    missing = [n for n in dag.nodes if n not in have]
    imputed_root = False
    if missing == [dag.root]:
        imputed_root = True
    elif missing:
        raise MissingClassError(f"scores lack class columns: "
                                f"{[m for m in missing if m != dag.root]}")

    n_ex = len(matrix.example_ids)
    values = np.empty((n_ex, len(dag)), dtype=np.float64)
    for j, n in enumerate(dag.nodes):
        if n in have:
            values[:, j] = matrix.values[:, have[n]]
        else:
            values[:, j] = 1.0
    comments = list(matrix.comments)
    if imputed_root:
        comments.append(f"root column '{dag.root}' imputed as 1.0")
    return ScoreMatrix(list(matrix.example_ids), list(dag.nodes), values,
                       comments=comments)
