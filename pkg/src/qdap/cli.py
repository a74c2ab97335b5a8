"""Command-line interface.

Exit status: 0 on success, 1 on a runtime failure, 2 on a usage error.
The default seed can be set with the ``QDAP_SEED`` environment variable.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .core import LabeledDataset
from .csvdata import CsvSchema, SchemaError, read_feature_csv, read_labeled_csv, write_labels
from .exceptions import QdapError
from .model_io import load_model, model_dimension, save_model
from .pipeline import METHODS, evaluate, fit_method
from .simulation import (
    DESK_N,
    FULL_N,
    ExperimentConfig,
    ModelSpec,
    random_split,
    replicate_seed,
    run_experiment,
    run_split_bench,
)

FIT_METHODS = ("lda", "qda", "qdap")


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("QDAP_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"QDAP_SEED must be an integer, got {raw!r}") from None


def _methods(text: str, allowed) -> tuple:
    names = [m.strip() for m in text.split(",") if m.strip()]
    lookup = {m.upper(): m for m in allowed}
    bad = [m for m in names if m.upper() not in lookup]
    if bad or not names:
        raise UsageError(f"unknown method(s) {bad or text!r}; choose from {', '.join(allowed)}")
    return tuple(lookup[m.upper()] for m in names)


def _warn_dropped(count: int) -> None:
    if count:
        print(f"warning: dropped {count} row(s) with missing or non-numeric values",
              file=sys.stderr)


def _write_report(report, out_dir: str, stem: str) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{stem}.csv").write_text(report.to_csv())
    (out / f"{stem}.txt").write_text(report.to_text())


# -- subcommands -----------------------------------------------------------


def cmd_simulate(args) -> int:
    if args.full_scale and (args.n or args.reps is not None):
        raise UsageError("--full-scale sets --n and --reps; do not combine them")
    n_train = tuple(args.n) if args.n else (FULL_N if args.full_scale else DESK_N)
    reps = 100 if args.full_scale else (20 if args.reps is None else args.reps)
    if reps < 2:
        raise UsageError("--reps must be at least 2")
    if any(n < 4 or n % 2 for n in n_train):
        raise UsageError("--n values must be even and at least 4")
    if args.p < 1:
        raise UsageError("--p must be positive")
    seed = _default_seed() if args.seed is None else args.seed
    cfg = ExperimentConfig(
        model=ModelSpec(args.model, p=args.p, param_seed=args.param_seed),
        n_train=n_train,
        n_test=args.n_test,
        replicates=reps,
        seed=seed,
        methods=_methods(args.methods, METHODS),
        workers=args.workers,
    )
    report = run_experiment(cfg)
    _write_report(report, args.out, f"simulate_model{args.model}")
    sys.stdout.write(report.to_text())
    return 0


def _load_training(args) -> LabeledDataset:
    data, dropped, _ = read_labeled_csv(args.data, CsvSchema(args.label, not args.no_header))
    _warn_dropped(dropped)
    return data


def cmd_fit(args) -> int:
    if args.split is not None and not 0.0 < args.split < 1.0:
        raise UsageError("--split must lie strictly between 0 and 1")
    seed = _default_seed() if args.seed is None else args.seed
    data = _load_training(args)
    train, holdout = data, None
    if args.split is not None:
        train, holdout = random_split(data, args.split, np.random.default_rng(replicate_seed(seed, 0)))
    model = fit_method(args.method, train)
    print(f"method {args.method}")
    print(f"n_train {train.n}")
    print(f"train_error {evaluate(model, train):.6f}")
    if holdout is not None:
        print(f"n_holdout {holdout.n}")
        print(f"holdout_error {evaluate(model, holdout):.6f}")
    save_model(model, args.out)
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    x, dropped = read_feature_csv(args.data, drop=args.label, header=not args.no_header)
    _warn_dropped(dropped)
    if x.shape[0] == 0:
        write_labels(args.out, [])
        return 0
    p = model_dimension(model)
    if x.shape[1] != p:
        raise QdapError(f"model expects {p} features but data has {x.shape[1]}")
    write_labels(args.out, np.atleast_1d(model.predict(x)))
    return 0


def cmd_split_bench(args) -> int:
    if args.full_scale and args.splits is not None:
        raise UsageError("--full-scale sets --splits; do not combine them")
    splits = 300 if args.full_scale else (50 if args.splits is None else args.splits)
    if splits < 2:
        raise UsageError("--splits must be at least 2")
    if not 0.0 < args.train_frac < 1.0:
        raise UsageError("--train-frac must lie strictly between 0 and 1")
    methods = _methods(args.methods, ("LDA", "QDA", "QDAP"))
    seed = _default_seed() if args.seed is None else args.seed
    data = _load_training(args)
    name = Path(args.data).stem
    report = run_split_bench(data, splits, args.train_frac, methods, seed, name,
                             workers=args.workers)
    _write_report(report, args.out, f"split_bench_{name}")
    sys.stdout.write(report.to_text(first_header="n_train"))
    return 0


# -- parser ----------------------------------------------------------------


def _add_csv_flags(p, label_required=False):
    p.add_argument("--data", required=True, help="CSV file")
    p.add_argument("--label", default=None, required=label_required,
                   help="label column name or index (default: last column)")
    p.add_argument("--no-header", action="store_true", help="CSV has no header row")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdap", description="QDA by projection toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="replicated benchmark on a simulation model")
    sim.add_argument("--model", type=int, required=True, choices=range(1, 6))
    sim.add_argument("--p", type=int, default=50)
    sim.add_argument("--n", type=int, action="append", help="total training size (repeatable)")
    sim.add_argument("--n-test", type=int, default=500, help="test points per class")
    sim.add_argument("--reps", type=int, default=None)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--param-seed", type=int, default=0, help="parameters of models 2 and 5")
    sim.add_argument("--methods", default=",".join(METHODS))
    sim.add_argument("--out", default=".", help="directory for the CSV and text reports")
    sim.add_argument("--full-scale", action="store_true", help="100 replicates, n=200..600")
    sim.add_argument("--workers", type=int, default=1)
    sim.set_defaults(func=cmd_simulate)

    fit = sub.add_parser("fit", help="train a model on a labeled CSV")
    _add_csv_flags(fit)
    fit.add_argument("--method", choices=FIT_METHODS, default="qdap")
    fit.add_argument("--out", required=True, help="model file to write")
    fit.add_argument("--split", type=float, default=None, help="training fraction for a holdout")
    fit.add_argument("--seed", type=int, default=None)
    fit.set_defaults(func=cmd_fit)

    pred = sub.add_parser("predict", help="label the rows of a CSV with a saved model")
    pred.add_argument("--model", required=True)
    pred.add_argument("--data", required=True)
    pred.add_argument("--label", default=None, help="column to ignore if present")
    pred.add_argument("--no-header", action="store_true")
    pred.add_argument("--out", required=True, help="file receiving one label per line")
    pred.set_defaults(func=cmd_predict)

    bench = sub.add_parser("split-bench", help="average error over random train/test splits")
    _add_csv_flags(bench)
    bench.add_argument("--splits", type=int, default=None, help="number of splits (default 50)")
    bench.add_argument("--train-frac", type=float, default=0.6)
    bench.add_argument("--methods", default="LDA,QDA,QDAP")
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--out", default=".")
    bench.add_argument("--full-scale", action="store_true", help="300 splits")
    bench.add_argument("--workers", type=int, default=1)
    bench.set_defaults(func=cmd_split_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qdap: error: {exc}", file=sys.stderr)
        return 2
    except (QdapError, SchemaError, OSError, ValueError) as exc:
        print(f"qdap: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
