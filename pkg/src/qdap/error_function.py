"""Closed-form misclassification error of the one-dimensional QDA rule.

After projecting onto a direction, class ``k`` is ``N(m_k, s_k^2)``.  Writing
``r = (m0 - m1)/s1`` and ``g = s0/s1`` reduces the error to a function of two
scalars; in those units class 1 is standard normal and class 0 is
``N(r, g^2)``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from .core import GaussianPairModel, OneDimParams, project_params

BRANCH_TOL = 1e-8
_SQRT2 = math.sqrt(2.0)


def normal_cdf(x):
    """Standard normal CDF, accurate to about 1e-16 absolute.

    Scalars go through :func:`math.erfc`; arrays through
    :func:`scipy.special.erfc`.
    """
    if np.ndim(x) == 0:
        return 0.5 * math.erfc(-float(x) / _SQRT2)
    return 0.5 * special.erfc(-np.asarray(x, dtype=float) / _SQRT2)


def _interval_prob(a: float, b: float) -> float:
    """P(a < Z < b) for standard normal Z, using the tail nearer zero."""
    if a >= 0.0:
        return normal_cdf(-a) - normal_cdf(-b)
    if b <= 0.0:
        return normal_cdf(b) - normal_cdf(a)
    return 1.0 - normal_cdf(a) - normal_cdf(-b)


def _outside_prob(a: float, b: float) -> float:
    return normal_cdf(a) + normal_cdf(-b)


def delta(params: OneDimParams) -> float:
    """Discriminant ``(m0-m1)^2 + (s0^2-s1^2) log(s0^2/s1^2)``, clamped at 0."""
    v0, v1 = params.s0**2, params.s1**2
    value = (params.m0 - params.m1) ** 2 + (v0 - v1) * math.log(v0 / v1)
    return max(value, 0.0)


def scaled_delta(r: float, g: float) -> float:
    g2 = g * g
    return max(r * r + (g2 - 1.0) * math.log(g2), 0.0)


def boundary_roots(r: float, g: float) -> tuple[float, float]:
    """Sorted points where the two scaled class log-densities are equal.

    Solves ``(g^2-1) x^2 + 2 r x - (r^2 + g^2 log g^2) = 0`` with the
    cancellation-free form of the quadratic formula.  Requires ``g != 1``.
    """
    g2 = g * g
    a = g2 - 1.0
    c = -(r * r + g2 * math.log(g2))
    sqrt_disc = g * math.sqrt(scaled_delta(r, g))
    q = -(r + math.copysign(sqrt_disc, r))
    x1, x2 = q / a, c / q
    return (x1, x2) if x1 <= x2 else (x2, x1)


def script_error(r: float, g: float, branch_tol: float = BRANCH_TOL) -> float:
    """Misclassification error as a function of the scaled pair ``(r, g)``.

    Parameters
    ----------
    r : float
        Mean gap ``(m0 - m1)/s1``.
    g : float
        Standard deviation ratio ``s0/s1``; must be positive.
    branch_tol : float
        Below this distance of ``g`` from 1 the equal-variance formula
        ``Phi(-|r|/2)`` is used.

    Returns
    -------
    float
        Error in ``(0, 1/2]``.
    """
    r = float(r)
    g = float(g)
    if not g > 0.0:
        raise ValueError(f"g must be positive, got {g}")
    r = abs(r)
    if abs(g - 1.0) < branch_tol:
        return normal_cdf(-r / 2.0)
    lo, hi = boundary_roots(r, g)
    lo0, hi0 = (lo - r) / g, (hi - r) / g
    if g > 1.0:
        # class 1 is narrower and owns the inside of the interval
        err = 0.5 * _interval_prob(lo0, hi0) + 0.5 * _outside_prob(lo, hi)
    else:
        err = 0.5 * _outside_prob(lo0, hi0) + 0.5 * _interval_prob(lo, hi)
    return min(err, 0.5)


def one_dim_error(params: OneDimParams) -> float:
    r, g = params.scaled_form()
    return script_error(r, g)


def classification_error(model: GaussianPairModel, direction) -> float:
    """Error of the 1D QDA rule after projecting ``model`` onto ``direction``.

    Invariant to rescaling ``direction`` by any nonzero constant.
    """
    return one_dim_error(project_params(model, direction))
