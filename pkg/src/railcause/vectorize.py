"""tf-idf document vectorization.

The weight of term t in document d is TF(d,t) * ln(N / df(t)) with raw
occurrence counts as TF, natural logarithm, no smoothing, and no vector
normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from railcause.errors import DataError
from railcause.text import N_RESERVED, Vocabulary


@dataclass
class TfIdfModel:
    """Per-token inverse document frequencies over a fixed vocabulary.

    ``idf`` is aligned with vocabulary indices; the PAD and UNK slots are
    zero and never produced by transforms.
    """

    vocab: Vocabulary
    idf: np.ndarray


def fit_tfidf(train_docs: list[list[str]], vocab: Vocabulary) -> TfIdfModel:
    """Compute idf(t) = ln(N / df(t)) from the training documents only.

    Document frequencies are recounted over ``train_docs`` so test
    documents can never leak in.  A vocabulary token that appears in no
    training document is an internal inconsistency.
    """
    n_docs = len(train_docs)
    if n_docs < 1:
        raise DataError("tf-idf needs at least one training document")
    df = np.zeros(vocab.size, dtype=np.float64)
    for doc in train_docs:
        for tok in set(doc):
            idx = vocab.token_to_index.get(tok)
            if idx is not None:
                df[idx] += 1
    zero = [vocab.index_to_token[i] for i in range(N_RESERVED, vocab.size) if df[i] == 0]
    if zero:
        raise DataError(
            f"{len(zero)} vocabulary token(s) absent from training docs (first: {zero[0]!r})"
        )
    idf = np.zeros(vocab.size, dtype=np.float64)
    real = np.arange(N_RESERVED, vocab.size)
    if real.size:
        idf[real] = np.log(n_docs / df[real])
    return TfIdfModel(vocab=vocab, idf=idf)


def tfidf_transform(model: TfIdfModel, doc: list[str]) -> dict[int, float]:
    """Sparse tf-idf vector of a document as an index -> weight map.

    Out-of-vocabulary tokens are ignored; only nonzero components are
    stored.
    """
    counts: dict[int, int] = {}
    for tok in doc:
        idx = model.vocab.token_to_index.get(tok)
        if idx is not None:
            counts[idx] = counts.get(idx, 0) + 1
    return {i: c * model.idf[i] for i, c in counts.items() if c * model.idf[i] != 0.0}


def to_dense(vec: dict[int, float], size: int) -> np.ndarray:
    """Densify a sparse vector to a fixed-length float array."""
    out = np.zeros(size, dtype=np.float64)
    if vec:
        idx = np.fromiter(vec.keys(), dtype=np.int64, count=len(vec))
        val = np.fromiter(vec.values(), dtype=np.float64, count=len(vec))
        out[idx] = val
    return out


def to_dense_batch(vecs: list[dict[int, float]], size: int) -> np.ndarray:
    """Densify a list of sparse vectors into an (N, size) matrix."""
    out = np.zeros((len(vecs), size), dtype=np.float64)
    for row, vec in enumerate(vecs):
        for i, v in vec.items():
            out[row, i] = v
    return out
