"""Minimization of the 1D QDA error over directions.

Coordinate descent on the unit sphere, started from the LDA direction and
from the extreme generalized eigenvector of the two class covariances.
Each coordinate is moved to the minimizer of a three-point quadratic fit;
where the fit is concave down the coordinate moves by a fixed step in the
downhill direction instead.  Moves that increase the objective are
rejected, so the objective never goes up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .classifiers import lda_direction
from .core import Direction, GaussianPairModel
from .error_function import classification_error, script_error
from .exceptions import DegenerateDirectionError, OptimizationError, SingularCovarianceError


@dataclass(frozen=True)
class DescentConfig:
    """Settings for :func:`coordinate_descent` and :func:`minimize_error`.

    Attributes
    ----------
    max_iters : int
        Maximum number of full coordinate sweeps.
    tol : float
        Stop once two successive sweeps change the objective by at most this.
    fallback_step : float
        Fixed move used when the local quadratic fit is not convex.
    fd_step : float
        Spacing of the three points used for the quadratic fit.
    max_step : float
        Largest accepted change of a single coordinate in one update.
    random_restarts : int
        Extra starts drawn uniformly on the sphere.
    seed : int
        Seed for the random restarts.
    """

    max_iters: int = 100
    tol: float = 1e-8
    fallback_step: float = 0.1
    fd_step: float = 1e-4
    max_step: float = 1.0
    random_restarts: int = 0
    seed: int = 0

    def __post_init__(self):
        for name in ("max_iters", "tol", "fallback_step", "fd_step", "max_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.random_restarts < 0:
            raise ValueError("random_restarts must be nonnegative")


@dataclass(frozen=True, eq=False)
class OptimResult:
    direction: Direction
    error: float
    iterations: int
    converged: bool
    start_tag: str
    history: tuple = ()
    start_errors: dict = field(default_factory=dict)


# -- warm starts -----------------------------------------------------------


def warm_start_lda(model: GaussianPairModel) -> Direction | None:
    """LDA direction, or ``None`` when the class means coincide."""
    try:
        return lda_direction(model)
    except DegenerateDirectionError:
        return None


def extreme_eigenpair(model: GaussianPairModel):
    """Largest eigenvalue over ``S0^-1 S1`` and ``S1^-1 S0`` with its eigenvector.

    Both matrices share eigenvectors (the eigenvalues are reciprocal), so a
    single generalized symmetric eigenproblem ``S1 v = lam S0 v`` suffices.
    Ties go to the ``S0^-1 S1`` side.
    """
    try:
        lam, vecs = linalg.eigh(model.sigma1, model.sigma0)
    except (linalg.LinAlgError, ValueError) as exc:
        raise SingularCovarianceError("cannot factorize class covariances") from exc
    top, bottom = lam[-1], 1.0 / lam[0]
    if top >= bottom:
        return float(top), Direction(vecs[:, -1])
    return float(bottom), Direction(vecs[:, 0])


def warm_start_eigen(model: GaussianPairModel) -> Direction:
    return extreme_eigenpair(model)[1]


# -- one-dimensional step --------------------------------------------------


def _finite_or_inf(v: float) -> float:
    return v if math.isfinite(v) else math.inf


def one_dim_step(f, t: float, cfg: DescentConfig = DescentConfig()) -> float:
    """Next value of a single coordinate.

    Fits a parabola through ``f(t-h), f(t), f(t+h)``; if it opens upward its
    vertex is returned, otherwise ``t`` moves downhill by
    ``cfg.fallback_step``.  Non-finite values count as ``+inf``.
    """
    h = cfg.fd_step
    fm = _finite_or_inf(f(t - h))
    f0 = _finite_or_inf(f(t))
    fp = _finite_or_inf(f(t + h))
    if not (math.isfinite(fm) and math.isfinite(f0) and math.isfinite(fp)):
        if fp < fm:
            return t + cfg.fallback_step
        if fm < fp:
            return t - cfg.fallback_step
        return t
    curvature = fp - 2.0 * f0 + fm
    slope = fp - fm
    if curvature > 0:
        return t - h * slope / (2.0 * curvature)
    if slope > 0:
        return t - cfg.fallback_step
    return t + cfg.fallback_step


# -- coordinate descent ----------------------------------------------------


class _CoordinateObjective:
    """Error as a function of one coordinate, with O(p) updates.

    Keeps ``m_k = y . mu_k`` and ``S_k y`` so that replacing ``y[j]`` changes
    each variance by a quadratic in the increment.
    """

    def __init__(self, model: GaussianPairModel, y: np.ndarray):
        self.mu = (model.mu0, model.mu1)
        self.sigma = (model.sigma0, model.sigma1)
        self.reset(y)

    def reset(self, y):
        self.y = np.array(y, dtype=float)
        self.m = [float(self.y @ mu) for mu in self.mu]
        self.w = [s @ self.y for s in self.sigma]
        self.v = [float(self.y @ w) for w in self.w]

    def _value(self, m0, m1, v0, v1):
        if not (v0 > 0.0 and v1 > 0.0):
            return math.inf
        s1 = math.sqrt(v1)
        return script_error((m0 - m1) / s1, math.sqrt(v0) / s1)

    def current(self) -> float:
        return self._value(self.m[0], self.m[1], self.v[0], self.v[1])

    def _moved(self, j, t):
        d = t - self.y[j]
        m = [self.m[k] + d * self.mu[k][j] for k in (0, 1)]
        v = [self.v[k] + d * (2.0 * self.w[k][j] + d * self.sigma[k][j, j]) for k in (0, 1)]
        return d, m, v

    def at(self, j: int, t: float) -> float:
        _, m, v = self._moved(j, t)
        return self._value(m[0], m[1], v[0], v[1])

    def commit(self, j: int, t: float):
        d, m, v = self._moved(j, t)
        self.m, self.v = m, v
        for k in (0, 1):
            self.w[k] = self.w[k] + d * self.sigma[k][:, j]
        self.y[j] = t


def coordinate_descent(
    model: GaussianPairModel,
    x0,
    cfg: DescentConfig = DescentConfig(),
    start_tag: str = "given",
) -> OptimResult:
    """Minimize the 1D QDA error of ``model`` starting from ``x0``.

    Every sweep updates coordinates in order and then rescales to unit
    norm.  Iteration stops after ``cfg.max_iters`` sweeps or when the
    objective changes by at most ``cfg.tol`` over a sweep.
    """
    x0 = x0 if isinstance(x0, Direction) else Direction(x0)
    obj = _CoordinateObjective(model, x0.v)
    f_prev = obj.current()
    if not math.isfinite(f_prev):
        raise OptimizationError("objective is not finite at the starting direction")
    history = [f_prev]
    converged = False
    iters = 0
    for iters in range(1, cfg.max_iters + 1):
        f_cur = f_prev
        for j in range(model.p):
            t = obj.y[j]
            t_new = one_dim_step(lambda s: obj.at(j, s), t, cfg)
            t_new = t + max(-cfg.max_step, min(cfg.max_step, t_new - t))
            if t_new == t:
                continue
            f_new = obj.at(j, t_new)
            if f_new <= f_cur:
                obj.commit(j, t_new)
                f_cur = f_new
        obj.reset(obj.y / np.linalg.norm(obj.y))
        f_next = obj.current()
        history.append(f_next)
        done = abs(f_next - f_prev) <= cfg.tol
        f_prev = f_next
        if done:
            converged = True
            break
    direction = Direction(obj.y)
    return OptimResult(
        direction=direction,
        error=classification_error(model, direction),
        iterations=iters,
        converged=converged,
        start_tag=start_tag,
        history=tuple(history),
    )


def candidate_starts(model: GaussianPairModel, cfg: DescentConfig = DescentConfig()):
    """``(tag, Direction)`` pairs: LDA (if defined), eigen, then random."""
    starts = []
    lda = warm_start_lda(model)
    if lda is not None:
        starts.append(("lda", lda))
    starts.append(("eigen", warm_start_eigen(model)))
    if cfg.random_restarts:
        rng = np.random.default_rng(cfg.seed)
        for i in range(cfg.random_restarts):
            starts.append((f"random{i}", Direction(rng.standard_normal(model.p))))
    return starts


def minimize_error(model: GaussianPairModel, cfg: DescentConfig = DescentConfig()) -> OptimResult:
    """Best coordinate-descent result over all candidate starts."""
    best = None
    start_errors = {}
    for tag, start in candidate_starts(model, cfg):
        start_errors[tag] = classification_error(model, start)
        try:
            res = coordinate_descent(model, start, cfg, start_tag=tag)
        except OptimizationError:
            continue
        if best is None or res.error < best.error:
            best = res
    if best is None:
        raise OptimizationError("coordinate descent failed from every start")
    return OptimResult(
        direction=best.direction.canonical(),
        error=best.error,
        iterations=best.iterations,
        converged=best.converged,
        start_tag=best.start_tag,
        history=best.history,
        start_errors=start_errors,
    )
