"""Trajectory statistics pipeline: resampling, DTW distances, PERMANOVA
with Holm post-hocs, density grids, mean trajectories, and questionnaire
scores."""

from .density import INNER_ZONE, DensityGrid, density_grid
from .distance import (
    DistanceMatrix,
    dtw,
    labels_from_tsv,
    labels_to_tsv,
    matrix_from_tsv,
    matrix_to_tsv,
    pairwise_dtw_matrix,
)
from .paths import (
    RESAMPLE_STEPS,
    AnalysisError,
    ResampledPath,
    drop_idle_prefix,
    mean_path,
    resample,
    resample_points,
)
from .permanova import (
    PairwiseResult,
    PermanovaResult,
    holm_adjust,
    pairwise_permanova_holm,
    permanova,
)
from .stats import descriptives, sus_score

__all__ = [
    "AnalysisError",
    "DensityGrid",
    "DistanceMatrix",
    "INNER_ZONE",
    "PairwiseResult",
    "PermanovaResult",
    "RESAMPLE_STEPS",
    "ResampledPath",
    "density_grid",
    "descriptives",
    "drop_idle_prefix",
    "dtw",
    "holm_adjust",
    "labels_from_tsv",
    "labels_to_tsv",
    "matrix_from_tsv",
    "matrix_to_tsv",
    "mean_path",
    "pairwise_dtw_matrix",
    "pairwise_permanova_holm",
    "permanova",
    "resample",
    "resample_points",
    "sus_score",
]
