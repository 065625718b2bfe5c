"""Classical baselines over tf-idf vectors: multinomial Naive Bayes and
a one-vs-rest linear SVM trained with Pegasos-style subgradient descent.

Both accept documents as sparse index->value maps (tf-idf weights act as
fractional occurrence masses for NB) or as dense rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from railcause.errors import DataError


SparseDoc = dict[int, float]


def _as_sparse(x) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(x, dict):
        if not x:
            return np.zeros(0, dtype=np.int64), np.zeros(0)
        idx = np.fromiter(x.keys(), dtype=np.int64, count=len(x))
        val = np.fromiter(x.values(), dtype=np.float64, count=len(x))
        return idx, val
    arr = np.asarray(x, dtype=np.float64)
    idx = np.flatnonzero(arr)
    return idx, arr[idx]


@dataclass
class NbcModel:
    """Multinomial NB: per-class log priors and smoothed log likelihoods."""

    log_prior: np.ndarray  # (K,)
    log_likelihood: np.ndarray  # (K, V)
    alpha: float

    @property
    def n_classes(self) -> int:
        return self.log_prior.shape[0]

    @property
    def dim(self) -> int:
        return self.log_likelihood.shape[1]


@dataclass
class LinearSvmModel:
    """One-vs-rest linear classifier: per-class weights and bias."""

    weights: np.ndarray  # (K, V)
    bias: np.ndarray  # (K,)
    lam: float

    @property
    def n_classes(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.weights.shape[1]


def fit_nbc(
    x: Sequence[SparseDoc] | np.ndarray,
    y: Sequence[int],
    n_classes: int,
    dim: int,
    alpha: float = 1.0,
) -> NbcModel:
    """Multinomial NB over tf-idf masses with Laplace smoothing alpha.

    Fractional feature values are summed as occurrence masses.  Every
    class in [0, n_classes) must appear in y.
    """
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    y = np.asarray(y, dtype=np.int64)
    present = np.bincount(y, minlength=n_classes)
    missing = np.flatnonzero(present == 0)
    if missing.size:
        raise DataError(f"class {int(missing[0])} absent from training labels")
    mass = np.zeros((n_classes, dim))
    for doc, label in zip(x, y):
        idx, val = _as_sparse(doc)
        mass[label, idx] += val
    totals = mass.sum(axis=1, keepdims=True)
    log_likelihood = np.log(mass + alpha) - np.log(totals + alpha * dim)
    log_prior = np.log(present / present.sum())
    return NbcModel(log_prior=log_prior, log_likelihood=log_likelihood, alpha=alpha)


def fit_svm(
    x: Sequence[SparseDoc] | np.ndarray,
    y: Sequence[int],
    n_classes: int,
    dim: int,
    lam: float = 1e-4,
    epochs: int = 20,
    seed: int = 0,
) -> tuple[LinearSvmModel, list[float]]:
    """One-vs-rest hinge loss minimized by stochastic subgradient descent.

    Uses the Pegasos schedule: step t has rate 1/(lam*t) and shrinks the
    weights by (1 - 1/t) before any margin-violation update; the bias is
    updated unregularized.  Deterministic per seed.  Returns the model
    and the mean per-sample hinge loss of each epoch.
    """
    if lam <= 0:
        raise ValueError("lam must be > 0")
    y = np.asarray(y, dtype=np.int64)
    if np.unique(y).size < 2:
        raise DataError("SVM training needs at least two classes in y")
    docs = [_as_sparse(doc) for doc in x]
    weights = np.zeros((n_classes, dim))
    bias = np.zeros(n_classes)
    rng = np.random.default_rng(seed)
    signs = -np.ones((len(docs), n_classes))
    signs[np.arange(len(docs)), y] = 1.0
    t = 0
    epoch_losses: list[float] = []
    for _ in range(epochs):
        order = rng.permutation(len(docs))
        hinge_sum = 0.0
        for i in order:
            t += 1
            idx, val = docs[i]
            eta = 1.0 / (lam * t)
            decision = weights[:, idx] @ val + bias
            margins = signs[i] * decision
            hinge_sum += float(np.maximum(0.0, 1.0 - margins).sum())
            weights *= 1.0 - eta * lam
            viol = margins < 1.0
            if viol.any() and idx.size:
                weights[np.ix_(viol, idx)] += eta * signs[i, viol, None] * val
            bias[viol] += eta * signs[i, viol]
        epoch_losses.append(hinge_sum / max(len(docs), 1))
    return LinearSvmModel(weights=weights, bias=bias, lam=lam), epoch_losses


def decision_scores(model: NbcModel | LinearSvmModel, doc: SparseDoc | np.ndarray) -> np.ndarray:
    """Per-class scores: log posterior (NB) or decision value (SVM)."""
    idx, val = _as_sparse(doc)
    if isinstance(model, NbcModel):
        return model.log_prior + model.log_likelihood[:, idx] @ val
    return model.weights[:, idx] @ val + model.bias


def predict_baseline(
    model: NbcModel | LinearSvmModel, doc: SparseDoc | np.ndarray
) -> tuple[int, np.ndarray]:
    """Argmax class and the score vector; ties go to the lowest index."""
    scores = decision_scores(model, doc)
    if scores.shape[0] != model.n_classes:
        raise ValueError("score dimension mismatch")
    return int(np.argmax(scores)), scores


def save_baseline(model: NbcModel | LinearSvmModel, stream: TextIO) -> None:
    if isinstance(model, NbcModel):
        payload = {
            "kind": "nbc",
            "alpha": model.alpha,
            "log_prior": model.log_prior.tolist(),
            "log_likelihood": model.log_likelihood.tolist(),
        }
    else:
        payload = {
            "kind": "svm",
            "lambda": model.lam,
            "weights": model.weights.tolist(),
            "bias": model.bias.tolist(),
        }
    json.dump(payload, stream, sort_keys=True)


def load_baseline(stream: TextIO) -> NbcModel | LinearSvmModel:
    payload = json.load(stream)
    kind = payload.get("kind")
    if kind == "nbc":
        return NbcModel(
            log_prior=np.asarray(payload["log_prior"], dtype=np.float64),
            log_likelihood=np.asarray(payload["log_likelihood"], dtype=np.float64),
            alpha=float(payload["alpha"]),
        )
    if kind == "svm":
        return LinearSvmModel(
            weights=np.asarray(payload["weights"], dtype=np.float64),
            bias=np.asarray(payload["bias"], dtype=np.float64),
            lam=float(payload["lambda"]),
        )
    raise DataError(f"unknown baseline kind {kind!r}")
