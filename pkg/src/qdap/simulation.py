"""Simulation models, Gaussian sampling and the replicate benchmark harness.

Random streams come from :class:`numpy.random.SeedSequence` keyed by
``(seed, n, replicate)`` feeding PCG64, so every replicate draws the same
numbers whatever order (or process) it runs in.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import GaussianPairModel, LabeledDataset
from .exceptions import QdapError
from .optimizer import DescentConfig
from .pipeline import METHODS, evaluate, fit_method

MODEL_IDS = (1, 2, 3, 4, 5)
DESK_N = (200, 400, 600)
FULL_N = (200, 300, 400, 500, 600)


@dataclass(frozen=True)
class ModelSpec:
    """One of the five benchmark settings.

    ``param_seed`` fixes the random parameters of models 2 and 5; it is
    ignored by the others.
    """

    id: int
    p: int = 50
    param_seed: int = 0

    def __post_init__(self):
        if self.id not in MODEL_IDS:
            raise ValueError(f"unknown model id {self.id}; expected one of {MODEL_IDS}")
        if self.p < 1:
            raise ValueError("p must be positive")


def _compound_symmetric(p, diag=3.0, off=2.0):
    return np.full((p, p), off) + (diag - off) * np.eye(p)


def build_model(spec: ModelSpec) -> GaussianPairModel:
    p = spec.p
    zeros, ones, eye = np.zeros(p), np.ones(p), np.eye(p)
    if spec.id == 1:
        return GaussianPairModel(zeros, ones / 3.0, eye, eye)
    if spec.id == 2:
        rng = np.random.default_rng(spec.param_seed)
        b = rng.standard_normal((p, p))
        v = rng.uniform(0.0, 1.0, size=p)
        s = b.T @ b + np.diag(v)
        s = 0.5 * (s + s.T)
        return GaussianPairModel(zeros, ones, s, s)
    s1 = _compound_symmetric(p)
    if spec.id == 3:
        return GaussianPairModel(zeros, ones, eye, s1)
    if spec.id == 4:
        return GaussianPairModel(zeros, zeros, eye, s1)
    rng = np.random.default_rng(spec.param_seed)
    mu1 = rng.normal(0.0, math.sqrt(1.0 / p), size=p)
    s0 = np.diag(np.r_[10.0, np.ones(p - 1)])
    return GaussianPairModel(zeros, mu1, s0, s1)


def _factor(s):
    try:
        return np.linalg.cholesky(s)
    except np.linalg.LinAlgError:
        lam, vecs = np.linalg.eigh(s)
        scale = max(abs(lam).max(), 1.0)
        if lam.min() < -1e-10 * scale:
            raise ValueError("covariance is not positive semidefinite") from None
        return vecs * np.sqrt(np.clip(lam, 0.0, None))


def sample(model: GaussianPairModel, n_per_class: int, seed=None) -> LabeledDataset:
    """Draw ``n_per_class`` observations from each class.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts.
    """
    if n_per_class < 1:
        raise ValueError("n_per_class must be at least 1")
    rng = np.random.default_rng(seed)
    parts = []
    for mu, s in zip(model.means(), model.covariances()):
        z = rng.standard_normal((n_per_class, model.p))
        parts.append(mu + z @ _factor(s).T)
    return LabeledDataset.from_classes(*parts)


def replicate_seed(seed: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in key))


# -- reports ---------------------------------------------------------------


@dataclass(frozen=True)
class ReportRow:
    model: str
    n: int
    method: str
    mean_pct: float
    se_pct: float
    replicates: int
    failures: int

    @property
    def is_na(self) -> bool:
        return math.isnan(self.mean_pct)


CSV_COLUMNS = ("model", "n", "method", "mean_pct", "se_pct", "replicates", "failures")


def _cell(value: float, digits: int = 6) -> str:
    return "NA" if math.isnan(value) else f"{value:.{digits}f}"


@dataclass
class ExperimentReport:
    rows: list = field(default_factory=list)

    def get(self, method: str, n: int | None = None) -> ReportRow:
        for row in self.rows:
            if row.method.upper() == method.upper() and (n is None or row.n == n):
                return row
        raise KeyError((method, n))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            writer.writerow([r.model, r.n, r.method, _cell(r.mean_pct), _cell(r.se_pct),
                             r.replicates, r.failures])
        return buf.getvalue()

    def to_text(self, first_header: str = "n") -> str:
        """Aligned table: one line per (model, n), ``mean (se)`` per method."""
        methods = list(dict.fromkeys(r.method for r in self.rows))
        keys = list(dict.fromkeys((r.model, r.n) for r in self.rows))
        lookup = {(r.model, r.n, r.method): r for r in self.rows}
        header = ["model", first_header, *methods]
        body = []
        for model, n in keys:
            line = [model, str(n)]
            for m in methods:
                r = lookup.get((model, n, m))
                if r is None or r.is_na:
                    line.append("NA")
                else:
                    line.append(f"{r.mean_pct:.2f} ({r.se_pct:.2f})")
            body.append(line)
        widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
        fmt = lambda row: "  ".join(c.rjust(w) for c, w in zip(row, widths))
        rule = "-" * len(fmt(header))
        return "\n".join([fmt(header), rule, *map(fmt, body)]) + "\n"


def summarize(model_name: str, n: int, method: str, errors) -> ReportRow:
    """Mean and standard error in percent over the finite entries of ``errors``."""
    errors = np.asarray(errors, dtype=float)
    ok = errors[np.isfinite(errors)]
    failures = int(errors.size - ok.size)
    if ok.size == 0:
        return ReportRow(model_name, n, method, math.nan, math.nan, 0, failures)
    mean = 100.0 * ok.mean()
    se = 100.0 * ok.std(ddof=1) / math.sqrt(ok.size) if ok.size > 1 else math.nan
    return ReportRow(model_name, n, method, mean, se, int(ok.size), failures)


# -- simulation experiment -------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    """Replicated train/test simulation on one model.

    ``n_train`` holds total training sizes, split evenly between classes;
    ``n_test`` is the test size per class.
    """

    model: ModelSpec
    n_train: tuple = DESK_N
    n_test: int = 500
    replicates: int = 20
    seed: int = 0
    methods: tuple = METHODS
    descent: DescentConfig = DescentConfig()
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "n_train", tuple(int(n) for n in self.n_train))
        object.__setattr__(self, "methods", tuple(_canonical_method(m) for m in self.methods))
        if not self.n_train or any(n < 4 or n % 2 for n in self.n_train):
            raise ValueError("training sizes must be even and at least 4")
        if self.n_test < 1:
            raise ValueError("n_test must be positive")
        if self.replicates < 2:
            raise ValueError("at least 2 replicates are needed for a standard error")
        if not self.methods:
            raise ValueError("no methods selected")

    @classmethod
    def full_scale(cls, model: ModelSpec, **kw) -> ExperimentConfig:
        kw.setdefault("n_train", FULL_N)
        kw.setdefault("replicates", 100)
        return cls(model, **kw)


def _canonical_method(name: str) -> str:
    for m in METHODS:
        if m.upper() == str(name).upper():
            return m
    raise ValueError(f"unknown method {name!r}; choose from {', '.join(METHODS)}")


def _method_errors(methods, train, test, descent, true_model):
    out = []
    for m in methods:
        try:
            out.append(evaluate(fit_method(m, train, descent, true_model), test))
        except QdapError:
            out.append(math.nan)
    return out


def _simulation_replicate(args):
    cfg, true_model, n, rep = args
    rng = np.random.default_rng(replicate_seed(cfg.seed, n, rep))
    train = sample(true_model, n // 2, rng)
    test = sample(true_model, cfg.n_test, rng)
    return _method_errors(cfg.methods, train, test, cfg.descent, true_model)


def _map(fn, jobs, workers):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(job) for job in jobs]


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    true_model = build_model(cfg.model)
    name = f"model{cfg.model.id}"
    report = ExperimentReport()
    for n in cfg.n_train:
        jobs = [(cfg, true_model, n, rep) for rep in range(cfg.replicates)]
        errors = np.array(_map(_simulation_replicate, jobs, cfg.workers))
        for j, m in enumerate(cfg.methods):
            report.rows.append(summarize(name, n, m, errors[:, j]))
    return report


# -- random-split benchmark on supplied data ------------------------------


def random_split(data: LabeledDataset, train_frac: float, rng):
    """Shuffle and cut into train/test sets of sizes ``round(frac*n)`` and the rest."""
    if not 0.0 < train_frac < 1.0:
        raise ValueError("train fraction must lie strictly between 0 and 1")
    perm = rng.permutation(data.n)
    n_train = int(round(train_frac * data.n))
    if n_train == 0 or n_train == data.n:
        raise ValueError("split leaves an empty train or test set")
    return data.subset(np.sort(perm[:n_train])), data.subset(np.sort(perm[n_train:]))


def _split_replicate(args):
    data, train_frac, methods, descent, seed, rep = args
    rng = np.random.default_rng(replicate_seed(seed, rep))
    train, test = random_split(data, train_frac, rng)
    return _method_errors(methods, train, test, descent, None)


def run_split_bench(
    data: LabeledDataset,
    splits: int = 50,
    train_frac: float = 0.6,
    methods=("LDA", "QDA", "QDAP"),
    seed: int = 0,
    name: str = "data",
    descent: DescentConfig = DescentConfig(),
    workers: int = 1,
) -> ExperimentReport:
    """Average test error over repeated random train/test splits."""
    if splits < 2:
        raise ValueError("at least 2 splits are needed for a standard error")
    methods = tuple(_canonical_method(m) for m in methods)
    if "Oracle" in methods:
        raise ValueError("the oracle is only available for simulated data")
    jobs = [(data, train_frac, methods, descent, seed, rep) for rep in range(splits)]
    errors = np.array(_map(_split_replicate, jobs, workers))
    n_train = int(round(train_frac * data.n))
    report = ExperimentReport()
    for j, m in enumerate(methods):
        report.rows.append(summarize(name, n_train, m, errors[:, j]))
    return report
