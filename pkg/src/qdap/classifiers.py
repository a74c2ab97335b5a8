"""LDA, full-dimensional QDA, and the one-dimensional QDA rule.

Points exactly on a decision boundary are labeled 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .core import Direction, GaussianPairModel, OneDimParams, pooled_covariance
from .error_function import BRANCH_TOL, boundary_roots
from .exceptions import DegenerateDirectionError, DimensionError, SingularCovarianceError

MEAN_TOL = 1e-12
# reciprocal condition number below which a covariance is treated as singular
RCOND_MIN = 1e-13


def _cholesky(s, name="covariance"):
    try:
        c = linalg.cho_factor(s, lower=True, check_finite=True)
    except (linalg.LinAlgError, ValueError) as exc:
        raise SingularCovarianceError(f"{name} is not positive definite") from exc
    d = np.diag(c[0])
    if d.min() <= 0 or (d.min() / d.max()) ** 2 < RCOND_MIN:
        raise SingularCovarianceError(f"{name} is numerically singular")
    return c


def _check_dim(x, p):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != p:
        raise DimensionError(f"observation has {x.shape[-1]} features, model expects {p}")
    return x


# -- LDA -------------------------------------------------------------------


def lda_direction(model: GaussianPairModel) -> Direction:
    """Normal vector ``Sigma^-1 (mu0 - mu1)`` of the LDA hyperplane."""
    diff = model.mu0 - model.mu1
    scale = max(np.abs(model.mu0).max(), np.abs(model.mu1).max(), 1.0)
    if np.abs(diff).max() <= MEAN_TOL * scale:
        raise DegenerateDirectionError("class means coincide; LDA direction is undefined")
    beta = linalg.cho_solve(_cholesky(pooled_covariance(model), "pooled covariance"), diff)
    return Direction(beta)


@dataclass(frozen=True, eq=False)
class LdaRule:
    """Linear rule built from the pooled covariance of ``model``."""

    model: GaussianPairModel

    def __post_init__(self):
        cho = _cholesky(pooled_covariance(self.model), "pooled covariance")
        diff = self.model.mu0 - self.model.mu1
        w = linalg.cho_solve(cho, diff)
        object.__setattr__(self, "_w", w)
        object.__setattr__(self, "_b", 0.5 * (self.model.mu0 + self.model.mu1) @ w)

    def score(self, x):
        x = _check_dim(x, self.model.p)
        return self._b - x @ self._w

    def predict(self, x):
        return (self.score(x) > 0).astype(np.int64)


def lda_predict(model: GaussianPairModel, x) -> int:
    """LDA label for a single observation."""
    return int(LdaRule(model).predict(x))


# -- full QDA --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FullQdaRule:
    """Quadratic rule of a Gaussian pair model with cached factorizations."""

    model: GaussianPairModel

    def __post_init__(self):
        chos, logdets = [], []
        for k, s in enumerate(self.model.covariances()):
            c = _cholesky(s, f"sigma{k}")
            chos.append(c)
            logdets.append(2.0 * np.log(np.diag(c[0])).sum())
        object.__setattr__(self, "_cho", tuple(chos))
        object.__setattr__(self, "logdets", tuple(logdets))

    def inverse(self, k: int) -> np.ndarray:
        return linalg.cho_solve(self._cho[k], np.eye(self.model.p))

    def _mahalanobis(self, x, k):
        lower = self._cho[k][0]
        d = np.atleast_2d(x) - self.model.means()[k]
        z = linalg.solve_triangular(lower, d.T, lower=True)
        return np.sum(z * z, axis=0)

    def score(self, x):
        """Left-hand side of the QDA inequality; positive means class 1.

        Equals ``2 * (log N(x; mu1, S1) - log N(x; mu0, S0))``.
        """
        x = _check_dim(x, self.model.p)
        s = (
            self._mahalanobis(x, 0)
            - self._mahalanobis(x, 1)
            + self.logdets[0]
            - self.logdets[1]
        )
        return s[0] if x.ndim == 1 else s

    def predict(self, x):
        return (np.asarray(self.score(x)) > 0).astype(np.int64)


def qda_predict(rule: FullQdaRule, x) -> int:
    """QDA label for a single observation."""
    return int(rule.predict(x))


# -- one-dimensional QDA ---------------------------------------------------


@dataclass(frozen=True)
class OneDimQdaRule:
    """Fitted 1D QDA rule.

    ``kind`` is ``"interval"`` (``lower < x < upper`` gets ``inside_label``,
    the endpoints get the other label), ``"threshold"`` (``x < cut`` gets
    ``left_label``, ``x == cut`` gets 0) or ``"constant"``.
    """

    kind: str
    lower: float = math.nan
    upper: float = math.nan
    inside_label: int = 0
    cut: float = math.nan
    left_label: int = 0
    label: int = 0

    def __post_init__(self):
        if self.kind not in ("interval", "threshold", "constant"):
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if self.kind == "interval" and not self.lower <= self.upper:
            raise ValueError("interval rule needs lower <= upper")

    def predict(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "interval":
            inside = (x > self.lower) & (x < self.upper)
            out = np.where(inside, self.inside_label, 1 - self.inside_label)
        elif self.kind == "threshold":
            side = np.where(x < self.cut, self.left_label, 1 - self.left_label)
            out = np.where(x == self.cut, 0, side)
        else:
            out = np.full(x.shape, self.label)
        out = out.astype(np.int64)
        return int(out) if out.ndim == 0 else out


def log_discriminants(params: OneDimParams, x):
    """Per-class log densities plus log prior at ``x``, shape (2, ...)."""
    x = np.asarray(x, dtype=float)
    out = []
    for m, s in ((params.m0, params.s0), (params.m1, params.s1)):
        out.append(-math.log(s) - (x - m) ** 2 / (2.0 * s * s) + math.log(0.5))
    return np.stack(out)


def fit_one_dim_qda(params: OneDimParams, branch_tol: float = BRANCH_TOL) -> OneDimQdaRule:
    """Bayes rule for two 1D Gaussians with equal priors."""
    m0, m1, s0, s1 = params.m0, params.m1, params.s0, params.s1
    if abs(s0 - s1) <= branch_tol * max(s0, s1):
        if m0 == m1:
            return OneDimQdaRule("constant", label=0)
        return OneDimQdaRule("threshold", cut=0.5 * (m0 + m1), left_label=int(m1 < m0))
    r, g = params.scaled_form()
    lo, hi = boundary_roots(r, g)
    return OneDimQdaRule(
        "interval",
        lower=m1 + s1 * lo,
        upper=m1 + s1 * hi,
        inside_label=int(s0 > s1),
    )


def one_dim_predict(rule: OneDimQdaRule, x):
    return rule.predict(x)
