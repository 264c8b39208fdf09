"""
Per-view feature scores
=======================

Three unsupervised scorers, each mapped to an importance in [0, 1]
where larger means more useful.
"""
import numpy as np

from nidf import IntervalConfig, build_views, informative_clusters, score_views, zscore_normalize
from nidf.scorers import score_matrix

X, informative = informative_clusters(n_samples=150, n_features=20, n_informative=4, seed=1)
X = zscore_normalize(X)
print("informative features:", informative.tolist())

for selector in ("lapscore", "mcfs", "variance"):
    s = score_matrix(X, selector)
    top = np.argsort(-s.values, kind="stable")[:4]
    print(f"{selector:>9s} top-4 on raw data: {sorted(top.tolist())}")

# the same scorer applied to each interval view
views = build_views(X, IntervalConfig(k=10))
for score in score_views(views, "lapscore"):
    top = np.argsort(-score.values, kind="stable")[:4]
    print(f"{score.view_tag:>11s}: {sorted(top.tolist())}")
