"""Word embeddings: word2vec training, GloVe-format loading, lookups.

Word2vec is trained from scratch with negative sampling, one SGD update
per (center, context) event, in CBOW or skip-gram mode.  GloVe vectors
are loaded from the standard plain-text format; training never happens
for GloVe here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TextIO

import numpy as np

from railcause.errors import DataError, EmbeddingParseError
from railcause.text import N_RESERVED, Vocabulary, build_vocab
from railcause.nn.ops import sigmoid


@dataclass
class Word2VecConfig:
    dim: int = 100
    window: int = 5
    mode: str = "cbow"  # or "skip-gram"
    negative_samples: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_learning_rate: float = 1e-4
    min_count: int = 5
    subsample: float | None = None  # frequency threshold; None disables

    def validate(self) -> None:
        if self.dim < 1 or self.window < 1 or self.negative_samples < 1:
            raise ValueError("dim, window, and negative_samples must all be >= 1")
        if self.mode not in ("cbow", "skip-gram"):
            raise ValueError(f"unknown word2vec mode {self.mode!r}")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")


@dataclass
class EmbeddingMatrix:
    """V x D matrix of token vectors aligned with a vocabulary.

    The PAD row (and by convention UNK) is all zeros so padded positions
    contribute nothing downstream.
    """

    vectors: np.ndarray
    vocab: Vocabulary
    provenance: str  # "trained-word2vec" | "loaded-glove"

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


def _negative_table(counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative unigram^0.75 distribution over real token indices."""
    real = np.flatnonzero(counts > 0)
    weights = counts[real] ** 0.75
    return real, np.cumsum(weights / weights.sum())


def train_word2vec(
    corpus: list[list[str]], config: Word2VecConfig, seed: int
) -> tuple[EmbeddingMatrix, list[float]]:
    """Train word2vec embeddings over tokenized sentences.

    Builds its own vocabulary (corpus frequency >= min_count), then runs
    negative-sampling SGD with a linearly decayed learning rate.
    Deterministic for a fixed seed.  Returns the embedding matrix plus
    the mean per-event loss of each epoch.
    """
    config.validate()
    vocab = build_vocab(corpus, min_count=config.min_count)
    if vocab.size <= N_RESERVED:
        raise DataError("word2vec vocabulary is empty after min_count filtering")

    rng = np.random.default_rng(seed)
    dim = config.dim
    vectors = np.zeros((vocab.size, dim))
    vectors[N_RESERVED:] = rng.uniform(-0.5 / dim, 0.5 / dim, size=(vocab.size - N_RESERVED, dim))
    matrix = EmbeddingMatrix(vectors=vectors, vocab=vocab, provenance="trained-word2vec")
    if config.epochs == 0:
        return matrix, []

    # Sentences as index arrays; OOV tokens are dropped before windowing.
    sentences = []
    counts = np.zeros(vocab.size)
    for doc in corpus:
        idxs = [vocab.token_to_index[t] for t in doc if t in vocab.token_to_index]
        if idxs:
            sentences.append(np.array(idxs, dtype=np.int64))
            np.add.at(counts, idxs, 1)
    if config.subsample:
        total = counts.sum()
        keep_prob = np.ones(vocab.size)
        freq = counts / total
        high = freq > config.subsample
        keep_prob[high] = np.sqrt(config.subsample / freq[high])
        kept = []
        for sent in sentences:
            mask = rng.random(len(sent)) < keep_prob[sent]
            if mask.any():
                kept.append(sent[mask])
        sentences = kept
    if not sentences:
        raise DataError("no trainable sentences after filtering")

    neg_idx, neg_cum = _negative_table(counts)
    context = np.zeros_like(vectors)  # output-side vectors start at zero
    total_events = config.epochs * sum(len(s) for s in sentences)
    lr0, lr_min = config.learning_rate, config.min_learning_rate
    k = config.negative_samples
    w = config.window
    processed = 0
    epoch_losses: list[float] = []

    cbow = config.mode == "cbow"
    for _ in range(config.epochs):
        loss_sum = 0.0
        n_events = 0
        for sent in sentences:
            length = len(sent)
            for pos in range(length):
                lr = lr0 + (lr_min - lr0) * (processed / total_events)
                processed += 1
                lo = max(0, pos - w)
                hi = min(length, pos + w + 1)
                ctx = np.concatenate([sent[lo:pos], sent[pos + 1 : hi]])
                if ctx.size == 0:
                    continue
                center = sent[pos]
                if cbow:
                    negs = neg_idx[np.searchsorted(neg_cum, rng.random(k))]
                    targets = np.concatenate(([center], negs[negs != center]))
                    h = vectors[ctx].mean(axis=0)
                    loss, dh = _negative_sampling_step(context, targets, h, lr)
                    vectors[ctx] -= dh / ctx.size
                    loss_sum += loss
                    n_events += 1
                else:
                    for ctx_word in ctx:
                        negs = neg_idx[np.searchsorted(neg_cum, rng.random(k))]
                        targets = np.concatenate(([ctx_word], negs[negs != ctx_word]))
                        h = vectors[center]
                        loss, dh = _negative_sampling_step(context, targets, h, lr)
                        vectors[center] -= dh
                        loss_sum += loss
                        n_events += 1
        epoch_losses.append(loss_sum / max(n_events, 1))
    return matrix, epoch_losses


def _negative_sampling_step(
    context: np.ndarray, targets: np.ndarray, h: np.ndarray, lr: float
) -> tuple[float, np.ndarray]:
    """One SGD update on the output vectors for a single training event.

    ``targets[0]`` is the positive word, the rest are negatives.  Updates
    ``context`` rows in place and returns (loss, gradient on h).  The
    gradient on h is computed against the pre-update output vectors.
    """
    scores = context[targets] @ h
    # -log sigmoid(s_pos) - sum log sigmoid(-s_neg), via logaddexp for stability
    loss = float(np.logaddexp(0.0, -scores[0]) + np.logaddexp(0.0, scores[1:]).sum())
    p = sigmoid(scores)
    p[0] -= 1.0
    g = p * lr
    dh = g @ context[targets]
    context[targets] -= np.outer(g, h)
    return loss, dh


def load_glove(reader: TextIO, vocab: Vocabulary) -> EmbeddingMatrix:
    """Load GloVe-format text vectors for the tokens of a vocabulary.

    Each line is ``word v1 ... vD``; the dimension is inferred from the
    first line and must stay constant.  Vocabulary tokens absent from the
    file (and PAD/UNK) get zero vectors.
    """
    vectors: np.ndarray | None = None
    dim = 0
    for line_no, line in enumerate(reader, start=1):
        parts = line.rstrip("\n").split(" ")
        if len(parts) < 2:
            if line.strip() == "":
                continue
            raise EmbeddingParseError("expected `word v1 ... vD`", line_no)
        word = parts[0]
        if vectors is None:
            dim = len(parts) - 1
            vectors = np.zeros((vocab.size, dim))
        elif len(parts) - 1 != dim:
            raise EmbeddingParseError(
                f"dimension {len(parts) - 1} differs from first-line dimension {dim}", line_no
            )
        idx = vocab.token_to_index.get(word)
        if idx is None:
            continue
        try:
            vectors[idx] = [float(v) for v in parts[1:]]
        except ValueError as exc:
            raise EmbeddingParseError(f"non-numeric component: {exc}", line_no) from exc
    if vectors is None:
        raise EmbeddingParseError("embedding file is empty")
    return EmbeddingMatrix(vectors=vectors, vocab=vocab, provenance="loaded-glove")


def load_embedding_file(reader: TextIO) -> EmbeddingMatrix:
    """Load a GloVe-format file standalone, building a vocabulary from
    the file's own tokens in line order."""
    tokens: list[str] = []
    rows: list[list[float]] = []
    dim = 0
    for line_no, line in enumerate(reader, start=1):
        parts = line.rstrip("\n").split(" ")
        if len(parts) < 2:
            if line.strip() == "":
                continue
            raise EmbeddingParseError("expected `word v1 ... vD`", line_no)
        if dim == 0:
            dim = len(parts) - 1
        elif len(parts) - 1 != dim:
            raise EmbeddingParseError(
                f"dimension {len(parts) - 1} differs from first-line dimension {dim}", line_no
            )
        try:
            rows.append([float(v) for v in parts[1:]])
        except ValueError as exc:
            raise EmbeddingParseError(f"non-numeric component: {exc}", line_no) from exc
        tokens.append(parts[0])
    if not tokens:
        raise EmbeddingParseError("embedding file is empty")
    vocab = Vocabulary(n_docs=0)
    for tok in tokens:
        if tok in vocab.token_to_index:
            continue
        vocab.token_to_index[tok] = len(vocab.index_to_token)
        vocab.index_to_token.append(tok)
    vectors = np.zeros((vocab.size, dim))
    for tok, row in zip(tokens, rows):
        vectors[vocab.token_to_index[tok]] = row
    return EmbeddingMatrix(vectors=vectors, vocab=vocab, provenance="loaded-glove")


def save_embedding(matrix: EmbeddingMatrix, writer: TextIO) -> None:
    """Write real-token vectors in GloVe text format, 6 significant digits."""
    for tok in matrix.vocab.tokens():
        row = matrix.vectors[matrix.vocab.token_to_index[tok]]
        writer.write(tok + " " + " ".join(f"{v:.6g}" for v in row) + "\n")


def cosine_knn(matrix: EmbeddingMatrix, query: str, k: int) -> list[tuple[str, float]]:
    """Top-k nearest tokens by cosine similarity, excluding the query.

    Zero-vector rows (PAD, UNK, unfilled tokens) are never candidates;
    ties are broken by vocabulary index.
    """
    if query not in matrix.vocab.token_to_index:
        raise KeyError(query)
    q_idx = matrix.vocab.token_to_index[query]
    q = matrix.vectors[q_idx]
    q_norm = np.linalg.norm(q)
    if q_norm == 0.0:
        raise ValueError(f"query {query!r} has a zero vector; similarity undefined")
    norms = np.linalg.norm(matrix.vectors, axis=1)
    sims = np.full(matrix.vocab.size, -np.inf)
    valid = norms > 0
    valid[q_idx] = False
    valid[:N_RESERVED] = False
    sims[valid] = (matrix.vectors[valid] @ q) / (norms[valid] * q_norm)
    order = np.lexsort((np.arange(matrix.vocab.size), -sims))
    out = []
    for idx in order:
        if not valid[idx]:
            continue
        out.append((matrix.vocab.index_to_token[idx], float(sims[idx])))
        if len(out) == k:
            break
    return out


def embed_sequence(seq, matrix: EmbeddingMatrix) -> np.ndarray:
    """Dense L x D matrix for a token sequence; PAD rows are zero.

    Accepts a TokenSequence or a raw index array; the matrix must have
    been built over the same vocabulary the sequence was encoded with.
    """
    indices = getattr(seq, "indices", seq)
    return matrix.vectors[np.asarray(indices)]
