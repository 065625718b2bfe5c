"""Assembly, training, and inference for the DNN, CNN, and GRU classifiers.

A trained model is self-contained: it bundles the network parameters with
the vocabulary and the tf-idf or embedding preprocessing it was trained
with, so a free-text narrative can be classified directly.
"""

from __future__ import annotations

import copy
import json
import os
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from railcause import metrics as ev
from railcause.corpus import DatasetSplit
from railcause.embed import EmbeddingMatrix
from railcause.errors import ConfigError, DataError, TrainingDivergedError
from railcause.nn import layers as nnl
from railcause.nn.ops import softmax, softmax_cross_entropy
from railcause.nn.optim import make_optimizer
from railcause.nn.serialize import load_tensors, save_tensors
from railcause.text import Vocabulary, encode, load_vocab, save_vocab, tokenize
from railcause.vectorize import TfIdfModel, tfidf_transform, to_dense_batch

MODEL_FORMAT_VERSION = 1


@dataclass
class ModelSpec:
    """Architecture description for one of the three classifier variants.

    dnn: tf-idf input, five 1000-unit ReLU hidden layers with dropout.
    cnn: embedded sequence input, three conv1d/maxpool/dropout blocks
         (kernel and pool size 5), then a 32-unit dense head.
    rnn: embedded sequence input, two 64-unit GRU layers with dropout,
         then a 128-unit dense head.
    """

    arch: str
    n_classes: int
    dropout_rate: float = 0.5
    # dnn
    input_dim: int | None = None
    hidden_layers: int = 5
    hidden_units: int = 1000
    # cnn / rnn
    capacity: int = 500
    embed_dim: int = 100
    conv_blocks: int = 3
    filters: int = 128
    kernel_size: int = 5
    pool_size: int = 5
    cnn_dense_units: int = 32
    gru_layers: int = 2
    gru_units: int = 64
    rnn_dense_units: int = 128
    embedding_source: str | None = None  # "word2vec" | "glove"
    embedding_trainable: bool = False

    def validate(self) -> None:
        if self.arch not in ("dnn", "cnn", "rnn"):
            raise ConfigError(f"unknown architecture {self.arch!r}")
        if self.n_classes < 2:
            raise ConfigError("n_classes must be >= 2")
        if not 0.1 <= self.dropout_rate <= 0.5:
            raise ConfigError("dropout_rate must lie in [0.1, 0.5]")
        if self.arch == "dnn":
            if not self.input_dim or self.input_dim < 1:
                raise ConfigError("dnn needs a positive input_dim")
        else:
            if self.embedding_source not in ("word2vec", "glove"):
                raise ConfigError(f"{self.arch} needs an embedding source (word2vec or glove)")
            if self.arch == "cnn":
                self.conv_chain_lengths()

    def conv_chain_lengths(self) -> list[int]:
        """Sequence lengths through the conv/pool chain; errors if any
        stage underruns its kernel or pool window."""
        lengths = [self.capacity]
        length = self.capacity
        for block in range(self.conv_blocks):
            if length < self.kernel_size:
                raise ConfigError(
                    f"cnn block {block}: length {length} shorter than kernel {self.kernel_size}"
                )
            length = length - self.kernel_size + 1
            lengths.append(length)
            if length < self.pool_size:
                raise ConfigError(
                    f"cnn block {block}: length {length} shorter than pool window {self.pool_size}"
                )
            length = (length - self.pool_size) // self.pool_size + 1
            lengths.append(length)
        return lengths


@dataclass
class TrainConfig:
    epochs: int = 15
    batch_size: int = 64
    optimizer: str = "adam"
    learning_rate: float = 1e-3
    validation_fraction: float = 0.1
    early_stopping_patience: int | None = 3
    seed: int = 0

    def validate(self) -> None:
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")
        if self.epochs < 0:
            raise ConfigError("epochs must be >= 0")
        if not 0.0 < self.validation_fraction < 1.0:
            raise ConfigError("validation_fraction must lie in (0, 1)")
        if self.optimizer not in ("adam", "sgd"):
            raise ConfigError(f"unknown optimizer {self.optimizer!r}")


@dataclass
class TrainedModel:
    """A built (possibly trained) classifier plus its preprocessing."""

    spec: ModelSpec
    network: nnl.Network
    vocab: Vocabulary
    classes: list[str]
    tfidf: TfIdfModel | None = None
    embedding: EmbeddingMatrix | None = None
    history: list[dict] = field(default_factory=list)
    train_config: TrainConfig | None = None

    def _prepare(self, narratives: list[str]):
        """Preprocess narratives: sparse tf-idf vectors for the dnn, an
        (N, L) index matrix for sequence models."""
        if self.spec.arch == "dnn":
            return [tfidf_transform(self.tfidf, tokenize(t)) for t in narratives]
        seqs = [encode(tokenize(t), self.vocab, self.spec.capacity) for t in narratives]
        return np.stack([s.indices for s in seqs])

    def _batch(self, prepared, idx) -> np.ndarray:
        """Densify one minibatch of prepared inputs."""
        if self.spec.arch == "dnn":
            return to_dense_batch([prepared[i] for i in idx], self.vocab.size)
        return prepared[idx]

    def predict_proba(self, narrative: str) -> np.ndarray:
        """Class probabilities for one narrative (inference mode, no dropout)."""
        return self.predict_proba_many([narrative])[0]

    def predict_proba_many(self, narratives: list[str], batch_size: int = 64) -> np.ndarray:
        prepared = self._prepare(narratives)
        out = np.zeros((len(narratives), self.spec.n_classes))
        for lo in range(0, len(narratives), batch_size):
            idx = np.arange(lo, min(lo + batch_size, len(narratives)))
            logits = self.network.forward(self._batch(prepared, idx), train=False)
            out[idx] = softmax(logits, axis=-1)
        return out

    def predict(self, narrative: str) -> str:
        """Most probable class name; ties go to the lowest class index."""
        return self.classes[int(np.argmax(self.predict_proba(narrative)))]

    def ranked_causes(self, narrative: str, top_n: int | None = None) -> list[tuple[str, float]]:
        probs = self.predict_proba(narrative)
        order = np.argsort(-probs, kind="stable")
        if top_n is not None:
            order = order[:top_n]
        return [(self.classes[i], float(probs[i])) for i in order]


def build(
    spec: ModelSpec,
    seed: int,
    *,
    vocab: Vocabulary,
    classes: list[str],
    tfidf: TfIdfModel | None = None,
    embedding: EmbeddingMatrix | None = None,
) -> TrainedModel:
    """Deterministically initialize a classifier for the given spec.

    Dense and conv weights are uniform with 1/sqrt(fan_in) scaling; GRU
    input and recurrent matrices use the same rule (no orthogonal init).
    """
    spec.validate()
    if len(classes) != spec.n_classes:
        raise ConfigError(f"{len(classes)} class names for n_classes={spec.n_classes}")
    rng = np.random.default_rng(seed)
    rate = spec.dropout_rate
    if spec.arch == "dnn":
        if tfidf is None:
            raise ConfigError("dnn requires a fitted tf-idf model")
        if spec.input_dim != vocab.size:
            raise ConfigError(f"dnn input_dim {spec.input_dim} != vocabulary size {vocab.size}")
        stack: list[nnl.Layer] = []
        d = spec.input_dim
        for _ in range(spec.hidden_layers):
            stack += [nnl.Dense(d, spec.hidden_units, rng), nnl.Relu(), nnl.Dropout(rate)]
            d = spec.hidden_units
        stack.append(nnl.Dense(d, spec.n_classes, rng))
        return TrainedModel(spec=spec, network=nnl.Network(stack), vocab=vocab, classes=list(classes), tfidf=tfidf)

    if embedding is None:
        raise ConfigError(f"{spec.arch} requires an embedding matrix")
    if embedding.vectors.shape[0] != vocab.size:
        raise ConfigError("embedding row count does not match vocabulary size")
    if embedding.dim != spec.embed_dim:
        raise ConfigError(f"embedding dim {embedding.dim} != spec embed_dim {spec.embed_dim}")
    lookup = nnl.EmbeddingLookup(embedding.vectors, trainable=spec.embedding_trainable)
    if spec.arch == "cnn":
        lengths = spec.conv_chain_lengths()
        stack = [lookup]
        d = spec.embed_dim
        for _ in range(spec.conv_blocks):
            stack += [
                nnl.Conv1D(spec.filters, spec.kernel_size, d, rng),
                nnl.Relu(),
                nnl.MaxPool1D(spec.pool_size),
                nnl.Dropout(rate),
            ]
            d = spec.filters
        flat = lengths[-1] * spec.filters
        stack += [
            nnl.Flatten(),
            nnl.Dense(flat, spec.cnn_dense_units, rng),
            nnl.Relu(),
            nnl.Dropout(rate),
            nnl.Dense(spec.cnn_dense_units, spec.n_classes, rng),
        ]
        return TrainedModel(spec=spec, network=nnl.Network(stack), vocab=vocab, classes=list(classes), embedding=embedding)

    # rnn: stacked GRUs emit full sequences; the last one feeds its final
    # state to the dense head.
    stack = [lookup]
    d = spec.embed_dim
    for layer_i in range(spec.gru_layers):
        last = layer_i == spec.gru_layers - 1
        stack += [nnl.Gru(d, spec.gru_units, rng, return_sequences=not last), nnl.Dropout(rate)]
        d = spec.gru_units
    stack += [
        nnl.Dense(d, spec.rnn_dense_units, rng),
        nnl.Relu(),
        nnl.Dropout(rate),
        nnl.Dense(spec.rnn_dense_units, spec.n_classes, rng),
    ]
    return TrainedModel(spec=spec, network=nnl.Network(stack), vocab=vocab, classes=list(classes), embedding=embedding)


def _labels_to_indices(items: list[tuple], classes: list[str]) -> np.ndarray:
    index = {name: i for i, name in enumerate(classes)}
    try:
        return np.array([index[label] for _, label in items], dtype=np.int64)
    except KeyError as exc:
        raise DataError(f"label {exc} not in model classes {classes}") from exc


def train(model: TrainedModel, dataset: DatasetSplit, config: TrainConfig) -> TrainedModel:
    """Minibatch-train a built model on the dataset's training half.

    Shuffling, dropout, and the validation carve-out are all seeded, so a
    fixed config reproduces identical parameters in single-threaded runs.
    With early stopping enabled, the parameters with the best validation
    macro-F1 are restored at the end.
    """
    config.validate()
    model.train_config = config
    if config.epochs == 0:
        model.history = []
        return model

    narratives = [rec.narrative for rec, _ in dataset.train]
    y = _labels_to_indices(dataset.train, model.classes)
    prepared = model._prepare(narratives)

    seeds = np.random.SeedSequence(config.seed).spawn(2)
    shuffle_rng = np.random.default_rng(seeds[0])
    dropout_rng = np.random.default_rng(seeds[1])

    n = len(narratives)
    n_val = max(1, int(round(config.validation_fraction * n))) if n > 1 else 0
    perm = shuffle_rng.permutation(n)
    val_idx = perm[:n_val]
    train_idx = perm[n_val:]
    if train_idx.size == 0:
        raise DataError("no training samples left after validation carve-out")

    optimizer = make_optimizer(config.optimizer, config.learning_rate)
    net = model.network
    best_f1 = -1.0
    best_params: dict[str, np.ndarray] | None = None
    best_epoch = -1
    since_best = 0
    history: list[dict] = []

    for epoch in range(config.epochs):
        order = shuffle_rng.permutation(train_idx.size)
        epoch_loss = 0.0
        n_batches = 0
        for b, lo in enumerate(range(0, train_idx.size, config.batch_size)):
            batch = train_idx[order[lo : lo + config.batch_size]]
            logits = net.forward(model._batch(prepared, batch), train=True, rng=dropout_rng)
            loss, dlogits = softmax_cross_entropy(logits, y[batch])
            if not np.isfinite(loss):
                raise TrainingDivergedError("training loss is not finite", epoch=epoch, batch=b)
            net.backward(dlogits)
            optimizer.step(net.params(), net.grads())
            epoch_loss += loss
            n_batches += 1
        val_f1 = None
        if n_val:
            val_pred = _predict_indices(model, prepared, val_idx, config.batch_size)
            cm = ev.confusion(y[val_idx], val_pred, len(model.classes))
            val_f1 = ev.metrics(cm).macro_f1
        history.append(
            {"epoch": epoch, "train_loss": epoch_loss / max(n_batches, 1), "val_macro_f1": val_f1}
        )
        if config.early_stopping_patience is not None and val_f1 is not None:
            if val_f1 > best_f1:
                best_f1 = val_f1
                best_epoch = epoch
                best_params = {k: v.copy() for k, v in net.params().items()}
                since_best = 0
            else:
                since_best += 1
                if since_best > config.early_stopping_patience:
                    break
    if best_params is not None:
        net.set_params(best_params)
        history.append({"epoch": best_epoch, "restored_best": True, "val_macro_f1": best_f1})
    model.history = history
    return model


def _predict_indices(
    model: TrainedModel, prepared, idx: np.ndarray, batch_size: int
) -> np.ndarray:
    out = np.zeros(idx.size, dtype=np.int64)
    for lo in range(0, idx.size, batch_size):
        chunk = idx[lo : lo + batch_size]
        logits = model.network.forward(model._batch(prepared, chunk), train=False)
        out[lo : lo + chunk.size] = np.argmax(logits, axis=-1)
    return out


def predict_proba(model: TrainedModel, narrative: str) -> np.ndarray:
    return model.predict_proba(narrative)


def predict(model: TrainedModel, narrative: str) -> str:
    return model.predict(narrative)


# ---------------------------------------------------------------------------
# serialization: named-tensor container + JSON sidecar + vocabulary file


def save_model(model: TrainedModel, out_dir: str | Path) -> Path:
    """Write model.ntc, model.json, and vocab.txt into a directory.

    Returns the sidecar path.  Output bytes are a pure function of the
    model state: no timestamps, sorted keys.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tensors = dict(model.network.params())
    if model.embedding is not None and "layer0.vectors" not in tensors:
        tensors["embedding.vectors"] = model.embedding.vectors
    if model.tfidf is not None:
        tensors["tfidf.idf"] = model.tfidf.idf
    save_tensors(out_dir / "model.ntc", tensors)
    _atomic_write_text(out_dir / "vocab.txt", _vocab_text(model.vocab))
    sidecar = {
        "format": "railcause-model",
        "version": MODEL_FORMAT_VERSION,
        "kind": model.spec.arch,
        "classes": model.classes,
        "spec": asdict(model.spec),
        "vocab_file": "vocab.txt",
        "embedding_provenance": model.embedding.provenance if model.embedding else None,
        "history": model.history,
        "train_config": asdict(model.train_config) if model.train_config else None,
    }
    path = out_dir / "model.json"
    _atomic_write_text(path, json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return path


def load_model(path: str | Path) -> TrainedModel:
    """Load a model saved by :func:`save_model`; path may be the sidecar
    file or its directory."""
    path = Path(path)
    if path.is_dir():
        path = path / "model.json"
    with open(path) as fh:
        sidecar = json.load(fh)
    if sidecar.get("format") != "railcause-model":
        raise DataError(f"{path}: not a model sidecar")
    if sidecar.get("version") != MODEL_FORMAT_VERSION:
        raise DataError(f"{path}: unsupported model version {sidecar.get('version')}")
    base = path.parent
    with open(base / sidecar["vocab_file"]) as fh:
        vocab = load_vocab(fh)
    spec = ModelSpec(**sidecar["spec"])
    tensors = load_tensors(base / "model.ntc")
    tfidf = None
    embedding = None
    if spec.arch == "dnn":
        tfidf = TfIdfModel(vocab=vocab, idf=tensors.pop("tfidf.idf"))
    else:
        key = "embedding.vectors" if "embedding.vectors" in tensors else "layer0.vectors"
        vectors = tensors[key] if key == "layer0.vectors" else tensors.pop(key)
        embedding = EmbeddingMatrix(
            vectors=vectors, vocab=vocab, provenance=sidecar.get("embedding_provenance") or "loaded"
        )
    model = build(
        spec, seed=0, vocab=vocab, classes=list(sidecar["classes"]), tfidf=tfidf, embedding=embedding
    )
    model.network.set_params({k: v for k, v in tensors.items() if k.startswith("layer")})
    model.history = sidecar.get("history") or []
    tc = sidecar.get("train_config")
    model.train_config = TrainConfig(**tc) if tc else None
    return model


def _vocab_text(vocab: Vocabulary) -> str:
    import io

    buf = io.StringIO()
    save_vocab(vocab, buf)
    return buf.getvalue()


def _atomic_write_text(path: Path, content: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
