"""Batch command line interface over TSV files.

Subcommands: correct, levels, validate, fit-thresholds, eval.
Exit codes: 0 success/valid, 1 validation failure, 2 I/O or parse error,
3 parameter error, 4 convergence error.  Errors go to stderr as one
machine-parsable line (`E_IO: ...`, `E_PARAM: ...`, `E_CONVERGENCE: ...`).
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .dag import build_dag, compute_levels, read_edge_list
from .errors import (
    ConvergenceError,
    EmptyGridError,
    HdeError,
    WeightRangeError,
)
from .htd import htd_correct_matrix
from .iso import iso_tpr_correct_matrix
from .scores import (
    ScoreMatrix,
    align_to_dag,
    check_valid_continuous,
    read_scores,
    write_scores_stream,
)
from .thresholds import (
    align_thresholds,
    evaluate,
    fit_fscore,
    fit_global,
    fit_percentile,
    read_thresholds,
    write_thresholds,
)
from .tpr import TprConfig, tpr_correct_matrix

METHODS = ("htd", "tpr", "tpr-w", "tpr-desc-const", "tpr-desc-lin", "iso-tpr")


class _ParamError(HdeError):
    pass


def _out_stream(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _emit(path, write):
    fh, close = _out_stream(path)
    try:
        write(fh)
    finally:
        if close:
            fh.close()


def _load_dag(args):
    edges = read_edge_list(args.dag)
    return build_dag(edges, dedup=getattr(args, "dedup", False))


def _jobs(args):
    if args.jobs is not None:
        return max(1, args.jobs)
    env = os.environ.get("HDE_JOBS")
    return max(1, int(env)) if env else 1


def _build_config(args, dag):
    sources = [args.threshold is not None, args.thresholds_file is not None,
               args.adaptive]
    if sum(sources) > 1:
        raise _ParamError("--threshold, --thresholds-file and --adaptive "
                          "are mutually exclusive")
    if args.adaptive:
        selection, t = "adaptive", None
    elif args.thresholds_file is not None:
        tv = align_thresholds(read_thresholds(args.thresholds_file), dag)
        selection, t = "threshold", tv.values
    elif args.threshold is not None:
        if not (0.0 <= args.threshold <= 1.0):
            raise _ParamError("--threshold must lie in [0, 1]")
        selection, t = "threshold", np.full(len(dag), args.threshold)
    else:
        raise _ParamError("method requires --threshold, --thresholds-file "
                          "or --adaptive")
    mode = {"tpr-desc-const": "descendants-constant",
            "tpr-desc-lin": "descendants-linear"}.get(args.method, "children")
    w = None
    if args.method == "tpr-w":
        if args.w is None:
            raise _ParamError("--method tpr-w requires --w")
        w = args.w
    return TprConfig(positive_selection=selection, thresholds=t, w=w,
                     descendant_mode=mode, literal_topdown=args.literal_topdown)


def _correct_rows(dag, levels, values, args, config):
    method = args.method
    if method == "htd":
        fn = lambda block: htd_correct_matrix(dag, levels, block)
    elif method == "iso-tpr":
        fn = lambda block: iso_tpr_correct_matrix(
            dag, levels, block, config, on_flat=args.iso_on_flat)
    else:
        fn = lambda block: tpr_correct_matrix(dag, levels, block, config)

    jobs = _jobs(args)
    if jobs == 1 or values.shape[0] < 2 * jobs:
        return fn(values)
    chunks = np.array_split(values, jobs, axis=0)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(fn, chunks))
    return np.vstack(parts)


def cmd_correct(args) -> int:
    dag = _load_dag(args)
    levels = compute_levels(dag)
    matrix = align_to_dag(read_scores(args.scores), dag)
    config = None
    if args.method != "htd":
        config = _build_config(args, dag)
    corrected = _correct_rows(dag, levels, matrix.values, args, config)
    comments = list(matrix.comments)
    if dag.synthetic_root_flag:
        comments.append(f"synthetic root '{dag.root}' column included")
    comments.append(f"corrected with method={args.method}")
    out = ScoreMatrix(matrix.example_ids, matrix.class_ids,
                      np.clip(corrected, 0.0, 1.0), comments=comments)
    _emit(args.output, lambda fh: write_scores_stream(out, fh, args.digits))
    return 0


def cmd_levels(args) -> int:
    dag = _load_dag(args)
    levels = compute_levels(dag)
    def write(fh):
        for n in dag.nodes:
            fh.write(f"{n}\t{levels.dist[n]}\n")
    _emit(args.output, write)
    return 0


def cmd_validate(args) -> int:
    dag = _load_dag(args)
    matrix = align_to_dag(read_scores(args.scores), dag)
    any_bad = False
    lines = ["example\tparent\tchild\tparent_score\tchild_score"]
    for i, ex in enumerate(matrix.example_ids):
        report = check_valid_continuous(dag, matrix.values[i], eps=args.eps)
        for p, c, ps, cs in report.violations:
            any_bad = True
            lines.append(f"{ex}\t{p}\t{c}\t{repr(ps)}\t{repr(cs)}")
    _emit(args.output, lambda fh: fh.write("\n".join(lines) + "\n"))
    return 1 if any_bad else 0


def cmd_fit_thresholds(args) -> int:
    dag = _load_dag(args)
    if args.strategy == "global":
        if args.t is None:
            raise _ParamError("--strategy global requires --t")
        tv = fit_global(args.t, dag.nodes)
    else:
        if args.scores is None or args.labels is None:
            raise _ParamError(f"--strategy {args.strategy} requires "
                              "--scores and --labels")
        scores = align_to_dag(read_scores(args.scores), dag)
        labels = align_to_dag(read_scores(args.labels), dag)
        if args.strategy == "fscore":
            grid = _parse_grid(args.grid) if args.grid else None
            tv = fit_fscore(scores, labels, grid)
        else:
            if args.k is None:
                raise _ParamError("--strategy percentile requires --k")
            tv = fit_percentile(scores, labels, args.k)
    if args.output in (None, "-"):
        fh = sys.stdout
        fh.write(f"# strategy: {tv.strategy_tag}\n")
        for c, v in zip(tv.class_ids, tv.values):
            fh.write(f"{c}\t{repr(float(v))}\n")
    else:
        write_thresholds(tv, args.output)
    return 0


def cmd_eval(args) -> int:
    dag = _load_dag(args)
    scores = align_to_dag(read_scores(args.scores), dag)
    labels = align_to_dag(read_scores(args.labels), dag)
    if args.thresholds_file is not None:
        tv = align_thresholds(read_thresholds(args.thresholds_file), dag)
    elif args.threshold is not None:
        tv = fit_global(args.threshold, dag.nodes)
    else:
        raise _ParamError("eval requires --threshold or --thresholds-file")
    report = evaluate(dag, scores, labels, tv)
    def write(fh):
        fh.write(f"# examples: {report.n_examples}\n")
        fh.write(f"# violations: {report.violation_count}\n")
        fh.write(f"# max_violation_gap: {repr(report.max_violation_gap)}\n")
        fh.write("class\tP\tR\tF\n")
        m = report.metrics
        for j, c in enumerate(m.class_ids):
            fh.write(f"{c}\t{repr(float(m.precision[j]))}"
                     f"\t{repr(float(m.recall[j]))}"
                     f"\t{repr(float(m.f_score[j]))}\n")
    _emit(args.output, write)
    return 0


def _parse_grid(spec: str) -> np.ndarray:
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise _ParamError("--grid must be 'start:stop:step'") from None
    if step <= 0 or stop < start:
        raise _ParamError("--grid must satisfy start <= stop, step > 0")
    n = int(round((stop - start) / step)) + 1
    grid = start + step * np.arange(n)
    grid = grid[(grid >= 0.0) & (grid <= 1.0 + 1e-12)]
    if grid.size == 0:
        raise EmptyGridError("--grid produced no candidates")
    return np.clip(grid, 0.0, 1.0)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hde",
        description="Hierarchy-consistent correction of per-class prediction "
                    "scores over a DAG taxonomy.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, scores=True):
        sp.add_argument("--dag", required=True, help="edge-list TSV (parent<TAB>child)")
        sp.add_argument("--dedup", action="store_true",
                        help="silently drop duplicate edges")
        if scores:
            sp.add_argument("--scores", required=True, help="scores TSV")
        sp.add_argument("-o", "--output", default=None,
                        help="output path (default: stdout)")

    sp = sub.add_parser("correct", help="correct a score matrix")
    common(sp)
    sp.add_argument("--method", required=True, choices=METHODS)
    sp.add_argument("--threshold", type=float, default=None,
                    help="single global threshold for the positive sets")
    sp.add_argument("--thresholds-file", default=None,
                    help="per-class thresholds TSV")
    sp.add_argument("--adaptive", action="store_true",
                    help="threshold-free positive-child selection")
    sp.add_argument("--w", type=float, default=None,
                    help="flat-score weight for --method tpr-w")
    sp.add_argument("--literal-topdown", action="store_true",
                    help="top-down pass compares against flat scores "
                         "(pseudocode-literal variant)")
    sp.add_argument("--iso-on-flat", action="store_true",
                    help="project the flat scores instead of the bottom-up output")
    sp.add_argument("--digits", type=int, default=None,
                    help="decimal places in the output (default: full precision)")
    sp.add_argument("--jobs", type=int, default=None,
                    help="row-parallel workers (env HDE_JOBS)")
    sp.set_defaults(func=cmd_correct)

    sp = sub.add_parser("levels", help="max root distance of every node")
    common(sp, scores=False)
    sp.set_defaults(func=cmd_levels)

    sp = sub.add_parser("validate", help="report true-path-rule violations")
    common(sp)
    sp.add_argument("--eps", type=float, default=0.0,
                    help="tolerance for the parent >= child comparison")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("fit-thresholds", help="fit per-class thresholds")
    sp.add_argument("--dag", required=True)
    sp.add_argument("--dedup", action="store_true")
    sp.add_argument("--scores", default=None, help="training scores TSV")
    sp.add_argument("--labels", default=None, help="training 0/1 labels TSV")
    sp.add_argument("--strategy", required=True,
                    choices=("global", "fscore", "percentile"))
    sp.add_argument("--t", type=float, default=None, help="global threshold value")
    sp.add_argument("--k", type=float, default=None, help="percentile in [0, 100]")
    sp.add_argument("--grid", default=None,
                    help="candidate grid 'start:stop:step' for --strategy fscore")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_fit_thresholds)

    sp = sub.add_parser("eval", help="per-class precision/recall/F at thresholds")
    common(sp)
    sp.add_argument("--labels", required=True, help="0/1 labels TSV")
    sp.add_argument("--threshold", type=float, default=None)
    sp.add_argument("--thresholds-file", default=None)
    sp.set_defaults(func=cmd_eval)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_ParamError, WeightRangeError, EmptyGridError) as exc:
        print(f"E_PARAM: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"E_CONVERGENCE: {exc}", file=sys.stderr)
        return 4
    except (HdeError, OSError) as exc:
        print(f"E_IO: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
