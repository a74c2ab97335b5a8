import math

import numpy as np
import pytest
from scipy import integrate, optimize, stats

from qdap.simulation import ModelSpec, build_model


@pytest.fixture(scope="session")
def models():
    return {k: build_model(ModelSpec(k)) for k in (1, 2, 3, 4, 5)}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def density_crossings(m0, m1, s0, s1, lo, hi, num=20001):
    """Points in [lo, hi] where the two weighted normal densities cross.

    Found by a grid scan for sign changes followed by bracketing; does not
    use any closed-form root formula.
    """
    diff = lambda x: stats.norm.logpdf(x, m0, s0) - stats.norm.logpdf(x, m1, s1)
    grid = np.linspace(lo, hi, num)
    vals = diff(grid)
    out = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0:
            out.append(a)
        elif fa * fb < 0:
            out.append(optimize.brentq(diff, a, b, xtol=1e-14))
    return out


def bayes_error_quadrature(m0, m1, s0, s1):
    """Error of the optimal 1D rule: integral of min(f0, f1)/2."""
    lo = min(m0 - 40 * s0, m1 - 40 * s1)
    hi = max(m0 + 40 * s0, m1 + 40 * s1)
    breaks = density_crossings(m0, m1, s0, s1, lo, hi)
    f = lambda x: 0.5 * min(stats.norm.pdf(x, m0, s0), stats.norm.pdf(x, m1, s1))
    edges = [lo, *breaks, hi]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        total += integrate.quad(f, a, b, epsabs=1e-14, epsrel=1e-12, limit=200)[0]
    return total


def binomial_se(p, n):
    return math.sqrt(max(p * (1 - p), 1e-300) / n)


def monte_carlo_rate(predict, model, n_per_class, rng, project=None):
    """Empirical error rate of ``predict`` on fresh draws from ``model``.

    Returns the rate and its binomial standard error.
    """
    wrong = 0
    for k, (mu, s) in enumerate(zip(model.means(), model.covariances())):
        z = rng.standard_normal((n_per_class, model.p))
        x = mu + z @ np.linalg.cholesky(s).T
        wrong += int(np.sum(predict(x) != k))
    n = 2 * n_per_class
    rate = wrong / n
    return rate, binomial_se(rate, n)


def angular_grid_minimizer(f, num=100_000):
    """Brute-force minimizer of ``f`` over unit vectors in the plane."""
    theta = (np.arange(num) + 0.5) * math.pi / num
    vals = np.array([f(np.array([math.cos(t), math.sin(t)])) for t in theta])
    i = int(np.argmin(vals))
    return np.array([math.cos(theta[i]), math.sin(theta[i])]), vals[i]


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE = []


def record_criterion(number, title, ok, detail):
    ACCEPTANCE.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
