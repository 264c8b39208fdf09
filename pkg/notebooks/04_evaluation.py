"""
Clustering evaluation
=====================

Keep the top-m features, run seeded k-means, and score the clusters
against the labels with ACC (best label matching) and NMI.
"""

from nidf import KMeansConfig, evaluate_selection, informative_clusters, nidf_select, zscore_normalize
from nidf.pipeline import raw_select

X, _ = informative_clusters(n_samples=240, n_features=40, n_informative=5, seed=3)
X = zscore_normalize(X)
kcfg = KMeansConfig(restarts=10, seed=0)
grid = [5, 10, 20]

raw = evaluate_selection(X, raw_select(X), grid, kcfg, method_id="LapScore")
fused = evaluate_selection(X, nidf_select(X).z, grid, kcfg, method_id="LapScore_NIDF")
for rep in (raw, fused):
    cells = ", ".join(f"m={c['m']}: {c['acc_mean']:.3f}" for c in rep.per_m)
    print(f"{rep.method_id:>14s}  ACC {rep.acc_avg:.3f}  NMI {rep.nmi_avg:.3f}  ({cells})")
