"""Unsupervised feature selection by fusing scores over neighborhood-interval views."""
from .data import DataMatrix, load_csv, minmax_normalize, normalize, write_csv, zscore_normalize
from .errors import InputError, NIDFError, NumericError
from .evaluation import EvalReport, KMeansConfig, acc, evaluate_selection, kmeans, nmi
from .fusion import (
    FusionConfig, FusionState, aggregate, build_weight_system, objective, rank_features,
    run_nidf, update_lambda, update_w, update_z,
)
from .interval import IntervalConfig, IntervalViews, build_views, feature_interval, sample_interval
from .neighborhood import NeighborGraph, build_graph, heat_affinity, knn, laplacian
from .pipeline import RunConfig, nidf_select, raw_select, run_bench, run_pipeline
from .redundancy import RedundancyMatrix, abs_correlation, psd_repair, redundancy_matrix
from .scorers import (
    FeatureScore, SelectorConfig, laplacian_score, mcfs_score, score_views, to_importance,
    variance_score,
)
from .simplex import QPConfig, project_simplex, solve_simplex_qp
from .synthetic import informative_clusters

__version__ = "0.1.0"
