"""Walk through the three correction families on a tiny taxonomy.

A flat classifier scores each class independently, so a specific class can
easily outscore its own parents.  This script builds the diamond taxonomy

        r
       / \
      a   b
       \ /
        c

scores it inconsistently, and shows what each correction does about it.
"""

import numpy as np

from hde import (
    TprConfig,
    build_dag,
    check_valid_continuous,
    compute_levels,
    htd_correct,
    iso_tpr_correct,
    tpr_correct,
)

dag = build_dag([("r", "a"), ("r", "b"), ("a", "c"), ("b", "c")])
levels = compute_levels(dag)
print("nodes:", dag.nodes)
print("levels (max distance from root):", levels.dist)

flat = np.array([0.9, 0.5, 0.7, 0.6])  # c outscores its parent a
print("\nflat scores:", dict(zip(dag.nodes, flat)))
report = check_valid_continuous(dag, flat)
print("violations:", report.violations)

# HTD: cap every node by its parents, walking the levels top-down.
# Negative evidence wins: c is pulled down to min(parent) = 0.5.
htd = htd_correct(dag, levels, flat)
print("\nHTD   :", dict(zip(dag.nodes, htd.round(4))))

# TPR: first let confident children push their parents up (bottom-up),
# then re-establish consistency top-down.  With threshold 0.5 the child c
# (0.6) is "positive" and lifts a to (0.5+0.6)/2 = 0.55.
cfg = TprConfig(thresholds=np.full(len(dag), 0.5))
tpr = tpr_correct(dag, levels, flat, cfg)
print("TPR   :", dict(zip(dag.nodes, tpr.round(4))))

# ISO-TPR: same bottom-up pass, but the final step is the least-squares
# projection onto the consistent set, so the result stays as close as
# possible to the propagated scores: a and c pool at 0.575.
iso = iso_tpr_correct(dag, levels, flat, cfg)
print("ISOTPR:", dict(zip(dag.nodes, iso.round(4))))

for name, out in (("HTD", htd), ("TPR", tpr), ("ISO-TPR", iso)):
    rep = check_valid_continuous(dag, out, eps=1e-9)
    print(f"{name}: {rep.total_count} violations after correction")
