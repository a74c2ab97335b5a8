"""QDA by projection end to end, plus the LDA/QDA/oracle baselines.

Every fitted object exposes ``predict(x)`` taking one observation or a
matrix of rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classifiers import FullQdaRule, LdaRule, OneDimQdaRule, fit_one_dim_qda
from .core import (
    DEFAULT_RIDGE,
    Direction,
    GaussianPairModel,
    LabeledDataset,
    estimate_model,
    project_params,
)
from .exceptions import DimensionError
from .optimizer import DescentConfig, OptimResult, minimize_error


@dataclass(frozen=True, eq=False)
class QdapModel:
    """Fitted projection direction together with its 1D QDA rule."""

    direction: Direction
    rule: OneDimQdaRule
    source_model: GaussianPairModel | None = None
    optim: OptimResult | None = None

    @property
    def p(self) -> int:
        return self.direction.p

    def project(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.p:
            raise DimensionError(f"observation has {x.shape[-1]} features, model expects {self.p}")
        return x @ self.direction.v

    def predict(self, x):
        return self.rule.predict(self.project(x))


def qdap_from_model(model: GaussianPairModel, cfg: DescentConfig = DescentConfig()) -> QdapModel:
    """Optimal direction and 1D rule for a (true or estimated) Gaussian pair."""
    res = minimize_error(model, cfg)
    rule = fit_one_dim_qda(project_params(model, res.direction))
    return QdapModel(res.direction, rule, model, res)


def fit_qdap(
    data: LabeledDataset,
    cfg: DescentConfig = DescentConfig(),
    ridge: float = DEFAULT_RIDGE,
) -> QdapModel:
    """Estimate moments, minimize the plug-in error, and fit the 1D rule.

    The 1D moments of the projected training data equal the projected
    p-dimensional moments, so the rule is built from the latter directly.
    """
    return qdap_from_model(estimate_model(data, ridge), cfg)


def predict_qdap(model: QdapModel, x):
    return model.predict(x)


def fit_lda(data: LabeledDataset, ridge: float = DEFAULT_RIDGE) -> LdaRule:
    return LdaRule(estimate_model(data, ridge))


def fit_qda(data: LabeledDataset, ridge: float = 0.0) -> FullQdaRule:
    """Plain QDA; without a ridge a singular class covariance raises
    :class:`~qdap.exceptions.SingularCovarianceError`."""
    return FullQdaRule(estimate_model(data, ridge))


def fit_oracle(true_model: GaussianPairModel) -> FullQdaRule:
    """Full QDA rule from the true parameters; ignores any training data."""
    return FullQdaRule(true_model)


def evaluate(predictor, test: LabeledDataset) -> float:
    """Fraction of ``test`` misclassified by ``predictor``.

    ``predictor`` is either an object with ``predict`` or a callable taking
    the feature matrix.
    """
    if test.n == 0:
        raise ValueError("test set is empty")
    predict = getattr(predictor, "predict", predictor)
    labels = np.asarray(predict(test.x)).reshape(-1)
    return float(np.mean(labels != test.y))


METHODS = ("LDA", "QDA", "QDAP", "Oracle")


def fit_method(method: str, data: LabeledDataset, cfg: DescentConfig = DescentConfig(),
               true_model: GaussianPairModel | None = None):
    """Fit one of :data:`METHODS` (case-insensitive) on ``data``."""
    key = method.upper()
    if key == "LDA":
        return fit_lda(data)
    if key == "QDA":
        return fit_qda(data)
    if key == "QDAP":
        return fit_qdap(data, cfg)
    if key == "ORACLE":
        if true_model is None:
            raise ValueError("the oracle needs the true model")
        return fit_oracle(true_model)
    raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
