"""Domain types for two-class Gaussian models and their sample estimates.

Priors are fixed at one half throughout; class imbalance in a dataset only
affects how well the moments are estimated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionError, EstimationError

DEFAULT_RIDGE = 1e-7
SYMMETRY_RTOL = 1e-10
PROJECTIVE_TOL = 1e-6


def _frozen(a, dtype=float):
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GaussianPairModel:
    """Two class-conditional Gaussians ``N(mu_k, sigma_k)`` with equal priors.

    Parameters
    ----------
    mu0, mu1 : array-like of shape (p,)
        Class means.
    sigma0, sigma1 : array-like of shape (p, p)
        Symmetric positive definite class covariances.
    """

    mu0: np.ndarray
    mu1: np.ndarray
    sigma0: np.ndarray
    sigma1: np.ndarray

    def __post_init__(self):
        mu0 = _frozen(np.atleast_1d(self.mu0))
        mu1 = _frozen(np.atleast_1d(self.mu1))
        s0 = _frozen(np.atleast_2d(self.sigma0))
        s1 = _frozen(np.atleast_2d(self.sigma1))
        p = mu0.shape[0]
        if mu0.ndim != 1 or mu1.shape != (p,):
            raise DimensionError(f"means must both have shape ({p},)")
        for name, s in (("sigma0", s0), ("sigma1", s1)):
            if s.shape != (p, p):
                raise DimensionError(f"{name} has shape {s.shape}, expected ({p}, {p})")
            scale = max(np.max(np.abs(s)), np.finfo(float).tiny)
            if np.max(np.abs(s - s.T)) > SYMMETRY_RTOL * scale:
                raise ValueError(f"{name} is not symmetric")
        object.__setattr__(self, "mu0", mu0)
        object.__setattr__(self, "mu1", mu1)
        object.__setattr__(self, "sigma0", s0)
        object.__setattr__(self, "sigma1", s1)

    @property
    def p(self) -> int:
        return self.mu0.shape[0]

    def means(self):
        return self.mu0, self.mu1

    def covariances(self):
        return self.sigma0, self.sigma1

    def is_positive_definite(self) -> bool:
        return all(np.linalg.eigvalsh(s)[0] > 0 for s in self.covariances())

    def affine_transform(self, A, b) -> GaussianPairModel:
        """Model of ``A x + b`` when ``x`` follows this model."""
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float)
        return GaussianPairModel(
            A @ self.mu0 + b,
            A @ self.mu1 + b,
            _symmetrize(A @ self.sigma0 @ A.T),
            _symmetrize(A @ self.sigma1 @ A.T),
        )


def _symmetrize(s):
    return 0.5 * (s + s.T)


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Observations ``x`` (one row each) with binary labels ``y``."""

    x: np.ndarray
    y: np.ndarray
    n0: int = field(init=False)
    n1: int = field(init=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        y_raw = np.asarray(self.y)
        if x.ndim != 2 or y_raw.shape != (x.shape[0],):
            raise DimensionError(
                f"x has shape {x.shape} but y has shape {y_raw.shape}"
            )
        if y_raw.size and not np.all((y_raw == 0) | (y_raw == 1)):
            raise ValueError("labels must be 0 or 1")
        object.__setattr__(self, "x", _frozen(x))
        object.__setattr__(self, "y", _frozen(y_raw, dtype=np.int64))
        object.__setattr__(self, "n1", int(self.y.sum()))
        object.__setattr__(self, "n0", int(self.y.size - self.n1))

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    def class_rows(self, k: int) -> np.ndarray:
        return self.x[self.y == k]

    def subset(self, idx) -> LabeledDataset:
        return LabeledDataset(self.x[idx], self.y[idx])

    def transform(self, A, b) -> LabeledDataset:
        """Dataset with every observation mapped to ``A x + b``."""
        A = np.asarray(A, dtype=float)
        return LabeledDataset(self.x @ A.T + np.asarray(b, dtype=float), self.y)

    @classmethod
    def from_classes(cls, x0, x1) -> LabeledDataset:
        x0 = np.atleast_2d(np.asarray(x0, dtype=float))
        x1 = np.atleast_2d(np.asarray(x1, dtype=float))
        y = np.concatenate([np.zeros(len(x0), dtype=np.int64), np.ones(len(x1), dtype=np.int64)])
        return cls(np.vstack([x0, x1]), y)


@dataclass(frozen=True, eq=False)
class Direction:
    """A point of projective space stored as a unit vector.

    Two directions compare equal when they agree up to sign, within
    ``PROJECTIVE_TOL``.
    """

    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float).ravel()
        norm = np.linalg.norm(v)
        if not np.isfinite(norm) or norm == 0.0:
            raise ValueError("direction must be a finite nonzero vector")
        object.__setattr__(self, "v", _frozen(v / norm))

    @property
    def p(self) -> int:
        return self.v.shape[0]

    def __neg__(self) -> Direction:
        return Direction(-self.v)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.v, dtype=dtype)

    def distance(self, other) -> float:
        """Euclidean distance to the nearer of ``other`` and ``-other``."""
        w = other.v if isinstance(other, Direction) else Direction(other).v
        if w.shape != self.v.shape:
            raise DimensionError("directions live in different dimensions")
        return float(min(np.linalg.norm(self.v - w), np.linalg.norm(self.v + w)))

    def angle(self, other) -> float:
        """Angle in radians between the two lines, in ``[0, pi/2]``."""
        return float(2.0 * np.arcsin(min(1.0, self.distance(other) / 2.0)))

    def isclose(self, other, tol: float = PROJECTIVE_TOL) -> bool:
        return self.distance(other) <= tol

    def __eq__(self, other):
        if not isinstance(other, Direction):
            return NotImplemented
        return self.p == other.p and self.isclose(other)

    __hash__ = None

    def canonical(self) -> Direction:
        """Representative whose largest-magnitude entry is positive."""
        i = int(np.argmax(np.abs(self.v)))
        return self if self.v[i] >= 0 else -self


@dataclass(frozen=True)
class OneDimParams:
    """Projected class means ``m0, m1`` and standard deviations ``s0, s1``."""

    m0: float
    m1: float
    s0: float
    s1: float

    def __post_init__(self):
        for name in ("m0", "m1", "s0", "s1"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.s0 > 0 and self.s1 > 0):
            raise ValueError(f"standard deviations must be positive, got {self.s0}, {self.s1}")

    def scaled_form(self):
        """``(r, g)`` with ``r = (m0 - m1)/s1`` and ``g = s0/s1``."""
        return (self.m0 - self.m1) / self.s1, self.s0 / self.s1


def estimate_model(data: LabeledDataset, ridge: float = DEFAULT_RIDGE) -> GaussianPairModel:
    """Sample means and unbiased sample covariances of each class.

    If the smallest eigenvalue of either covariance is below ``ridge``,
    ``ridge * I`` is added to both.  ``ridge=0`` disables stabilization.
    """
    if ridge < 0:
        raise ValueError("ridge must be nonnegative")
    mus, sigmas = [], []
    for k in (0, 1):
        xk = data.class_rows(k)
        if xk.shape[0] < 2:
            raise EstimationError(
                f"class {k} has {xk.shape[0]} observation(s); at least 2 are required"
            )
        mus.append(xk.mean(axis=0))
        sigmas.append(_symmetrize(np.atleast_2d(np.cov(xk, rowvar=False, ddof=1))))
    if ridge > 0 and any(np.linalg.eigvalsh(s)[0] < ridge for s in sigmas):
        eye = np.eye(data.p)
        sigmas = [s + ridge * eye for s in sigmas]
    return GaussianPairModel(mus[0], mus[1], sigmas[0], sigmas[1])


def _direction_vector(direction) -> np.ndarray:
    if isinstance(direction, Direction):
        return direction.v
    return np.asarray(direction, dtype=float)


def project_params(model: GaussianPairModel, direction) -> OneDimParams:
    """Means and standard deviations of the two classes along ``direction``.

    A raw vector is accepted as well; it is used without normalization, so
    the result then describes the projection onto that exact vector.
    """
    a = _direction_vector(direction)
    if a.shape != (model.p,):
        raise DimensionError(f"direction has shape {a.shape}, model has p={model.p}")
    return OneDimParams(
        a @ model.mu0,
        a @ model.mu1,
        np.sqrt(a @ model.sigma0 @ a),
        np.sqrt(a @ model.sigma1 @ a),
    )


def pooled_covariance(model: GaussianPairModel) -> np.ndarray:
    """Equal-prior average of the two class covariances."""
    return 0.5 * (model.sigma0 + model.sigma1)
