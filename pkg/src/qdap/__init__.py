"""QDA by projection: discriminant analysis along the optimal 1D direction.

The direction minimizes the closed-form error of a one-dimensional QDA rule
fitted to the projected classes; LDA, full QDA and an oracle built from the
true model are included as baselines.
"""

from .classifiers import (
    FullQdaRule,
    LdaRule,
    OneDimQdaRule,
    fit_one_dim_qda,
    lda_direction,
    lda_predict,
    one_dim_predict,
    qda_predict,
)
from .core import (
    Direction,
    GaussianPairModel,
    LabeledDataset,
    OneDimParams,
    estimate_model,
    pooled_covariance,
    project_params,
)
from .error_function import classification_error, delta, normal_cdf, script_error
from .optimizer import (
    DescentConfig,
    OptimResult,
    coordinate_descent,
    minimize_error,
    one_dim_step,
    warm_start_eigen,
    warm_start_lda,
)
from .pipeline import (
    QdapModel,
    evaluate,
    fit_lda,
    fit_oracle,
    fit_qda,
    fit_qdap,
    predict_qdap,
)
from .simulation import (
    ExperimentConfig,
    ExperimentReport,
    ModelSpec,
    build_model,
    run_experiment,
    run_split_bench,
    sample,
)

__version__ = "0.1.0"
