"""Density-ratio feature augmentation for high-dimensional classification.

Per-feature class-conditional kernel density estimates turn each raw
coordinate into its log density ratio, an L1-penalized logistic
regression is fitted on the transformed features, and predictions are
averaged over many balanced random splits of the training data.
"""

from .baselines import NbModel, fit_nb, fit_plr_raw, nb_score, predict_nb
from .bench import BenchReport, BenchSettings, compute_metrics, run_benchmark
from .classifier import (
    FansConfig,
    FansModel,
    SplitPlan,
    SubModel,
    majority_vote_predict,
    make_splits,
    predict,
    predict_proba,
    train,
)
from .data import Dataset, load_csv, save_csv
from .kde import (
    BandwidthRule,
    GridDensityCache,
    MarginalDensityEstimate,
    compute_bandwidth,
    eval_density,
    eval_log_density,
    fit_kde,
)
from .persist import load_model, save_model
from .plr import (
    CvResult,
    PlrModel,
    PlrPath,
    cross_validate,
    fit_cv,
    fit_path,
    kkt_violation,
    lambda_max,
    predict_prob,
)
from .simgen import (
    SimSpec,
    gen_ex1,
    gen_ex2,
    gen_ex3,
    gen_ex4,
    gen_ex5,
    gen_intro_toy,
    generate,
)
from .transform import (
    DensityPair,
    Variant,
    augment_matrix,
    augment_row,
    fit_density_pair,
    log_ratio_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "BandwidthRule",
    "BenchReport",
    "BenchSettings",
    "CvResult",
    "Dataset",
    "DensityPair",
    "FansConfig",
    "FansModel",
    "GridDensityCache",
    "MarginalDensityEstimate",
    "NbModel",
    "PlrModel",
    "PlrPath",
    "SimSpec",
    "SplitPlan",
    "SubModel",
    "Variant",
    "augment_matrix",
    "augment_row",
    "compute_bandwidth",
    "compute_metrics",
    "cross_validate",
    "eval_density",
    "eval_log_density",
    "fit_cv",
    "fit_density_pair",
    "fit_kde",
    "fit_nb",
    "fit_path",
    "fit_plr_raw",
    "gen_ex1",
    "gen_ex2",
    "gen_ex3",
    "gen_ex4",
    "gen_ex5",
    "gen_intro_toy",
    "generate",
    "kkt_violation",
    "lambda_max",
    "load_csv",
    "load_model",
    "log_ratio_matrix",
    "majority_vote_predict",
    "make_splits",
    "nb_score",
    "predict",
    "predict_nb",
    "predict_prob",
    "predict_proba",
    "run_benchmark",
    "save_csv",
    "save_model",
    "train",
]
