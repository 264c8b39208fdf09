"""
Fusing view scores
==================

The fused score z lives on the simplex. It trades the weighted view
scores against pairwise redundancy, with view weights w learned
alongside it.
"""
import numpy as np

from nidf import RunConfig, informative_clusters, nidf_select, zscore_normalize

X, informative = informative_clusters(n_samples=200, n_features=30, n_informative=5, seed=2)
X = zscore_normalize(X)

run = nidf_select(X, RunConfig())
state = run.state
print(f"converged={state.converged} after {state.iteration} outer iterations, lambda={state.lam:.4f}")
print("view weights:", dict(zip(run.views.tags, np.round(state.w, 3).tolist())))

hist = np.asarray(state.objective_history)
print(f"objective {hist[0]:.5f} -> {hist[-1]:.5f}, largest rise {np.max(np.diff(hist)):.1e}")

top = np.argsort(-run.z.values, kind="stable")[:5]
print("top-5 fused:", sorted(top.tolist()), " informative:", informative.tolist())
