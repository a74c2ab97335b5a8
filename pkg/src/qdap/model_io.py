"""Plain-text model files.

Layout (one record per line, fields separated by single spaces, floats
written with 17 significant digits)::

    qdap-model 1
    method qdap
    p 3
    direction 0.1 0.2 0.97...
    rule interval <lower> <upper> <inside_label>

``rule`` is ``interval <lower> <upper> <inside_label>``,
``threshold <cut> <left_label>`` or ``constant <label>``.  LDA and QDA
files store the Gaussian pair instead of ``direction``/``rule``: lines
``mu0``, ``mu1``, ``sigma0``, ``sigma1`` with matrices flattened row-major.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .classifiers import FullQdaRule, LdaRule, OneDimQdaRule
from .core import Direction, GaussianPairModel
from .exceptions import ModelFormatError
from .pipeline import QdapModel

MAGIC = "qdap-model"
VERSION = 1


def _fmt(values) -> str:
    return " ".join(f"{float(v):.17g}" for v in np.ravel(values))


def dumps(model) -> str:
    if isinstance(model, QdapModel):
        rule = model.rule
        if rule.kind == "interval":
            rule_line = f"interval {_fmt([rule.lower, rule.upper])} {rule.inside_label}"
        elif rule.kind == "threshold":
            rule_line = f"threshold {_fmt([rule.cut])} {rule.left_label}"
        else:
            rule_line = f"constant {rule.label}"
        lines = ["method qdap", f"p {model.p}", f"direction {_fmt(model.direction.v)}",
                 f"rule {rule_line}"]
    elif isinstance(model, (LdaRule, FullQdaRule)):
        g = model.model
        method = "lda" if isinstance(model, LdaRule) else "qda"
        lines = [f"method {method}", f"p {g.p}", f"mu0 {_fmt(g.mu0)}", f"mu1 {_fmt(g.mu1)}",
                 f"sigma0 {_fmt(g.sigma0)}", f"sigma1 {_fmt(g.sigma1)}"]
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    return "\n".join([f"{MAGIC} {VERSION}", *lines]) + "\n"


def loads(text: str):
    records = {}
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].split() != [MAGIC, str(VERSION)]:
        raise ModelFormatError(f"missing '{MAGIC} {VERSION}' header")
    for ln in lines[1:]:
        key, _, rest = ln.partition(" ")
        records[key] = rest.split()
    try:
        method = records["method"][0]
        p = int(records["p"][0])
        if method == "qdap":
            direction = Direction(np.array(records["direction"], dtype=float))
            kind, *args = records["rule"]
            if kind == "interval":
                rule = OneDimQdaRule("interval", lower=float(args[0]), upper=float(args[1]),
                                     inside_label=int(args[2]))
            elif kind == "threshold":
                rule = OneDimQdaRule("threshold", cut=float(args[0]), left_label=int(args[1]))
            elif kind == "constant":
                rule = OneDimQdaRule("constant", label=int(args[0]))
            else:
                raise ModelFormatError(f"unknown rule kind {kind!r}")
            if direction.p != p:
                raise ModelFormatError("direction length does not match p")
            return QdapModel(direction, rule)
        if method in ("lda", "qda"):
            arr = {k: np.array(records[k], dtype=float) for k in ("mu0", "mu1", "sigma0", "sigma1")}
            g = GaussianPairModel(arr["mu0"], arr["mu1"], arr["sigma0"].reshape(p, p),
                                  arr["sigma1"].reshape(p, p))
            return LdaRule(g) if method == "lda" else FullQdaRule(g)
    except (KeyError, IndexError, ValueError) as exc:
        raise ModelFormatError(f"malformed model file: {exc}") from exc
    raise ModelFormatError(f"unknown method {method!r}")


def save_model(model, path) -> None:
    Path(path).write_text(dumps(model))


def load_model(path):
    return loads(Path(path).read_text())


def model_dimension(model) -> int:
    return model.p if isinstance(model, QdapModel) else model.model.p


__all__ = ["dumps", "loads", "save_model", "load_model", "model_dimension"]
