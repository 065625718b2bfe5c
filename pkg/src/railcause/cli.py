"""End-to-end command-line workflow.

Verbs: prepare (ingest CSVs into train/test datasets), train (embedding x
architecture or a classical baseline), evaluate (metrics + confusion +
ROC files), predict (ranked causes for a narrative), inspect (embedding
nearest neighbors).

Exit codes: 0 success, 2 config error, 3 data error, 4 training failure.
Every prepare/train/evaluate run writes a resolved-config copy beside its
outputs, and all output files are written atomically.
"""

from __future__ import annotations

import argparse
import difflib
import io
import json
import os
import sys
import tempfile
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from railcause import baselines as bl
from railcause import metrics as ev
from railcause import models as md
from railcause.corpus import (
    ColumnMap,
    DatasetSplit,
    IngestReport,
    class_names,
    label_for,
    load_records,
    load_saved_records,
    save_records,
    stratified_split,
)
from railcause.embed import (
    Word2VecConfig,
    cosine_knn,
    load_embedding_file,
    load_glove,
    save_embedding,
    train_word2vec,
)
from railcause.errors import (
    ConfigError,
    DataError,
    NonFiniteGradientError,
    RailcauseError,
    TrainingDivergedError,
)
from railcause.nn.ops import softmax
from railcause.text import Vocabulary, build_vocab, load_vocab, save_vocab, tokenize
from railcause.vectorize import TfIdfModel, fit_tfidf, tfidf_transform

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_TRAINING = 4

SEQUENCE_MODELS = ("cnn", "rnn")
TFIDF_MODELS = ("dnn", "nbc", "svm")


@dataclass
class RunConfig:
    """Resolved settings for one command invocation."""

    csv_paths: list[str] = field(default_factory=list)
    column_map: dict = field(default_factory=dict)
    scheme: str = "general"
    test_fraction: float = 0.2
    min_count: int = 1
    seed: int = 0
    output_dir: str = "out"
    dataset_dir: str | None = None
    embedding: str = "word2vec"  # word2vec | glove | tfidf
    model: str = "rnn"  # dnn | cnn | rnn | nbc | svm
    glove_path: str | None = None
    word2vec: dict = field(default_factory=dict)
    train: dict = field(default_factory=dict)
    model_params: dict = field(default_factory=dict)
    nbc_alpha: float = 1.0
    svm_lambda: float = 1e-4
    svm_epochs: int = 20

    @classmethod
    def load(cls, path: str | None, overrides: argparse.Namespace) -> "RunConfig":
        data = {}
        if path:
            try:
                with open(path) as fh:
                    data = json.load(fh)
            except FileNotFoundError as exc:
                raise ConfigError(f"config file not found: {path}") from exc
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        known = {f_.name for f_ in cls.__dataclass_fields__.values()}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        cfg = cls(**data)
        for name in ("seed", "scheme", "embedding", "model"):
            value = getattr(overrides, name, None)
            if value is not None:
                setattr(cfg, name, value)
        if getattr(overrides, "output", None) is not None:
            cfg.output_dir = overrides.output
        if getattr(overrides, "dataset_dir", None) is not None:
            cfg.dataset_dir = overrides.dataset_dir
        if cfg.scheme not in ("general", "specific"):
            raise ConfigError(f"unknown scheme {cfg.scheme!r}")
        return cfg


def _atomic_write(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_resolved_config(cfg: RunConfig, out_dir: Path, command: str) -> None:
    payload = {"command": command, **asdict(cfg)}
    _atomic_write(out_dir / "resolved_config.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# prepare


def cmd_prepare(cfg: RunConfig) -> int:
    if not cfg.csv_paths:
        raise ConfigError("prepare needs csv_paths in the config")
    if not cfg.column_map:
        raise ConfigError("prepare needs a column_map in the config")
    column_map = ColumnMap.from_dict(cfg.column_map)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    records = []
    report = IngestReport()
    for path in cfg.csv_paths:
        try:
            with open(path, newline="") as fh:
                recs, rep = load_records(fh, column_map)
        except FileNotFoundError as exc:
            raise DataError(f"input CSV not found: {path}") from exc
        records.extend(recs)
        report.merge(rep)

    labeled = []
    dropped_unlabeled = 0
    for rec in records:
        label = label_for(rec.cause_code, cfg.scheme)
        if label is None:
            dropped_unlabeled += 1
        else:
            labeled.append((rec, label))

    if labeled:
        split = stratified_split(labeled, cfg.test_fraction, cfg.seed)
    else:
        print("warning: no labeled records ingested; writing empty dataset", file=sys.stderr)
        split = DatasetSplit(train=[], test=[], seed=cfg.seed, test_fraction=cfg.test_fraction)

    for name, part in (("train.jsonl", split.train), ("test.jsonl", split.test)):
        buf = io.StringIO()
        save_records((rec for rec, _ in part), buf)
        _atomic_write(out_dir / name, buf.getvalue())

    train_docs = [tokenize(rec.narrative) for rec, _ in split.train]
    vocab = build_vocab(train_docs, min_count=cfg.min_count)
    buf = io.StringIO()
    save_vocab(vocab, buf)
    _atomic_write(out_dir / "vocab.txt", buf.getvalue())

    totals = Counter(label for _, label in labeled)
    train_counts = Counter(label for _, label in split.train)
    test_counts = Counter(label for _, label in split.test)
    ordered = sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))
    distribution = {
        "scheme": cfg.scheme,
        "total": len(labeled),
        "classes": [{"label": k, "count": v} for k, v in ordered],
        "train_counts": dict(sorted(train_counts.items())),
        "test_counts": dict(sorted(test_counts.items())),
        "dropped_unlabeled": dropped_unlabeled,
        "ingest": asdict(report),
    }
    _atomic_write(out_dir / "distribution.json", json.dumps(distribution, indent=2, sort_keys=True) + "\n")
    _write_resolved_config(cfg, out_dir, "prepare")

    print(f"ingested {report.accepted} records ({report.rows_read} rows read)")
    print(
        f"skipped: {report.missing_cause} missing cause, {report.malformed_cause} malformed cause, "
        f"{report.empty_narrative} empty narrative; {report.duplicate_ids} duplicate ids kept"
    )
    if dropped_unlabeled:
        print(f"dropped {dropped_unlabeled} records outside the {cfg.scheme} label set")
    print(f"split: {len(split.train)} train / {len(split.test)} test (fraction {cfg.test_fraction})")
    print(f"vocabulary: {vocab.size - 2} tokens (min_count {cfg.min_count})")
    print("label distribution:")
    for k, v in ordered:
        print(f"  {k:<10} {v}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# train


@dataclass
class BaselineBundle:
    """A fitted classical baseline plus the preprocessing to run it on text."""

    kind: str
    model: bl.NbcModel | bl.LinearSvmModel
    tfidf: TfIdfModel
    vocab: Vocabulary
    classes: list[str]
    history: list[dict] = field(default_factory=list)

    def predict_proba_many(self, narratives: list[str], batch_size: int = 64) -> np.ndarray:
        out = np.zeros((len(narratives), len(self.classes)))
        for i, text in enumerate(narratives):
            vec = tfidf_transform(self.tfidf, tokenize(text))
            scores = bl.decision_scores(self.model, vec)
            # NB scores are log posteriors, so softmax recovers the true
            # posterior; SVM decision values become pseudo-probabilities.
            out[i] = softmax(scores)
        return out

    def predict_proba(self, narrative: str) -> np.ndarray:
        return self.predict_proba_many([narrative])[0]

    def predict(self, narrative: str) -> str:
        return self.classes[int(np.argmax(self.predict_proba(narrative)))]

    def ranked_causes(self, narrative: str, top_n: int | None = None) -> list[tuple[str, float]]:
        probs = self.predict_proba(narrative)
        order = np.argsort(-probs, kind="stable")
        if top_n is not None:
            order = order[:top_n]
        return [(self.classes[i], float(probs[i])) for i in order]


def save_baseline_bundle(bundle: BaselineBundle, out_dir: Path) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    bl.save_baseline(bundle.model, buf)
    sidecar = {
        "format": "railcause-model",
        "version": md.MODEL_FORMAT_VERSION,
        "kind": bundle.kind,
        "classes": bundle.classes,
        "baseline": json.loads(buf.getvalue()),
        "tfidf_idf": bundle.tfidf.idf.tolist(),
        "vocab_file": "vocab.txt",
        "history": bundle.history,
    }
    vbuf = io.StringIO()
    save_vocab(bundle.vocab, vbuf)
    _atomic_write(out_dir / "vocab.txt", vbuf.getvalue())
    path = out_dir / "model.json"
    _atomic_write(path, json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return path


def load_any_model(path: str | Path):
    """Load a trained model file of any kind (network or baseline)."""
    path = Path(path)
    if path.is_dir():
        path = path / "model.json"
    try:
        with open(path) as fh:
            sidecar = json.load(fh)
    except FileNotFoundError as exc:
        raise DataError(f"model file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"model file {path} is not valid JSON") from exc
    kind = sidecar.get("kind")
    if kind in ("dnn", "cnn", "rnn"):
        return md.load_model(path)
    if kind in ("nbc", "svm"):
        with open(path.parent / sidecar["vocab_file"]) as fh:
            vocab = load_vocab(fh)
        model = bl.load_baseline(io.StringIO(json.dumps(sidecar["baseline"])))
        tfidf = TfIdfModel(vocab=vocab, idf=np.asarray(sidecar["tfidf_idf"], dtype=np.float64))
        return BaselineBundle(
            kind=kind,
            model=model,
            tfidf=tfidf,
            vocab=vocab,
            classes=list(sidecar["classes"]),
            history=sidecar.get("history") or [],
        )
    raise DataError(f"model file {path} has unknown kind {kind!r}")


def _load_dataset(dataset_dir: Path, name: str, scheme: str) -> list[tuple]:
    path = dataset_dir / name
    try:
        with open(path) as fh:
            records = load_saved_records(fh)
    except FileNotFoundError as exc:
        raise DataError(f"dataset file not found: {path} (run prepare first)") from exc
    labeled = []
    for rec in records:
        label = label_for(rec.cause_code, scheme)
        if label is not None:
            labeled.append((rec, label))
    return labeled


def _train_config(cfg: RunConfig) -> md.TrainConfig:
    params = dict(cfg.train)
    params.setdefault("seed", cfg.seed)
    try:
        tc = md.TrainConfig(**params)
    except TypeError as exc:
        raise ConfigError(f"bad train config: {exc}") from exc
    tc.validate()
    return tc


def _model_spec(cfg: RunConfig, arch: str, n_classes: int, **extra) -> md.ModelSpec:
    params = {**cfg.model_params, **extra}
    try:
        spec = md.ModelSpec(arch=arch, n_classes=n_classes, **params)
    except TypeError as exc:
        raise ConfigError(f"bad model_params: {exc}") from exc
    return spec


def _write_history_csv(history: list[dict], path: Path) -> None:
    lines = ["epoch,train_loss,val_macro_f1"]
    for row in history:
        if row.get("restored_best"):
            continue
        val = row.get("val_macro_f1")
        lines.append(f"{row['epoch']},{row['train_loss']!r},{'' if val is None else repr(val)}")
    _atomic_write(path, "\n".join(lines) + "\n")


def cmd_train(cfg: RunConfig) -> int:
    if cfg.model in SEQUENCE_MODELS and cfg.embedding not in ("word2vec", "glove"):
        raise ConfigError(
            f"{cfg.model} requires a word embedding (word2vec or glove); "
            f"got embedding={cfg.embedding!r} (sequence models cannot consume tf-idf)"
        )
    if cfg.model in TFIDF_MODELS and cfg.embedding != "tfidf":
        raise ConfigError(f"{cfg.model} runs on tf-idf vectors; got embedding={cfg.embedding!r}")
    if cfg.model not in SEQUENCE_MODELS + TFIDF_MODELS:
        raise ConfigError(f"unknown model {cfg.model!r}")

    dataset_dir = Path(cfg.dataset_dir or cfg.output_dir)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    labeled = _load_dataset(dataset_dir, "train.jsonl", cfg.scheme)
    if not labeled:
        raise DataError("training dataset is empty")
    classes = list(class_names(cfg.scheme))
    docs = [tokenize(rec.narrative) for rec, _ in labeled]
    split = DatasetSplit(train=labeled, test=[], seed=cfg.seed, test_fraction=cfg.test_fraction)

    if cfg.embedding == "tfidf":
        with open(dataset_dir / "vocab.txt") as fh:
            vocab = load_vocab(fh)
        tfidf = fit_tfidf(docs, vocab)
        if cfg.model in ("nbc", "svm"):
            return _train_baseline(cfg, out_dir, labeled, docs, vocab, tfidf, classes)
        spec = _model_spec(cfg, "dnn", len(classes), input_dim=vocab.size)
        model = md.build(spec, cfg.seed, vocab=vocab, classes=classes, tfidf=tfidf)
    else:
        if cfg.embedding == "word2vec":
            w2v_params = dict(cfg.word2vec)
            try:
                w2v_cfg = Word2VecConfig(**w2v_params)
            except TypeError as exc:
                raise ConfigError(f"bad word2vec config: {exc}") from exc
            matrix, losses = train_word2vec(docs, w2v_cfg, cfg.seed)
            vocab = matrix.vocab
            buf = io.StringIO()
            save_embedding(matrix, buf)
            _atomic_write(out_dir / "embedding.txt", buf.getvalue())
            if losses:
                print(f"word2vec: first-epoch loss {losses[0]:.4f}, last-epoch loss {losses[-1]:.4f}")
        else:
            if not cfg.glove_path:
                raise ConfigError("glove embedding requires glove_path in the config")
            with open(dataset_dir / "vocab.txt") as fh:
                vocab = load_vocab(fh)
            try:
                with open(cfg.glove_path) as fh:
                    matrix = load_glove(fh, vocab)
            except FileNotFoundError as exc:
                raise DataError(f"GloVe file not found: {cfg.glove_path}") from exc
        spec = _model_spec(cfg, cfg.model, len(classes), embed_dim=matrix.dim, embedding_source=cfg.embedding)
        model = md.build(spec, cfg.seed, vocab=vocab, classes=classes, embedding=matrix)

    print(f"built {spec.arch} with {model.network.param_count()} trainable parameters")
    train_cfg = _train_config(cfg)
    md.train(model, split, train_cfg)
    md.save_model(model, out_dir)
    _write_history_csv(model.history, out_dir / "history.csv")
    _write_resolved_config(cfg, out_dir, "train")
    last = next((h for h in reversed(model.history) if "train_loss" in h), None)
    if last is not None:
        val = last.get("val_macro_f1")
        print(
            f"trained {spec.arch}: final epoch loss {last['train_loss']:.4f}"
            + (f", validation macro-F1 {val:.4f}" if val is not None else "")
        )
    print(f"model written to {out_dir / 'model.json'}")
    return EXIT_OK


def _train_baseline(
    cfg: RunConfig,
    out_dir: Path,
    labeled: list[tuple],
    docs: list[list[str]],
    vocab: Vocabulary,
    tfidf: TfIdfModel,
    classes: list[str],
) -> int:
    x = [tfidf_transform(tfidf, doc) for doc in docs]
    index = {name: i for i, name in enumerate(classes)}
    y = np.array([index[label] for _, label in labeled], dtype=np.int64)
    history: list[dict] = []
    if cfg.model == "nbc":
        model = bl.fit_nbc(x, y, n_classes=len(classes), dim=vocab.size, alpha=cfg.nbc_alpha)
    else:
        model, losses = bl.fit_svm(
            x, y, n_classes=len(classes), dim=vocab.size,
            lam=cfg.svm_lambda, epochs=cfg.svm_epochs, seed=cfg.seed,
        )
        history = [{"epoch": i, "train_loss": loss, "val_macro_f1": None} for i, loss in enumerate(losses)]
    bundle = BaselineBundle(
        kind=cfg.model, model=model, tfidf=tfidf, vocab=vocab, classes=classes, history=history
    )
    save_baseline_bundle(bundle, out_dir)
    _write_history_csv(history, out_dir / "history.csv")
    _write_resolved_config(cfg, out_dir, "train")
    print(f"trained {cfg.model} baseline on {len(labeled)} documents")
    print(f"model written to {out_dir / 'model.json'}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# evaluate


def cmd_evaluate(cfg: RunConfig, model_file: str) -> int:
    model = load_any_model(model_file)
    expected = list(class_names(cfg.scheme))
    if list(model.classes) != expected:
        raise DataError(
            f"label-scheme mismatch: model classes {model.classes} vs {cfg.scheme} classes {expected}"
        )
    dataset_dir = Path(cfg.dataset_dir or cfg.output_dir)
    labeled = _load_dataset(dataset_dir, "test.jsonl", cfg.scheme)
    if not labeled:
        raise DataError("test dataset is empty")
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    narratives = [rec.narrative for rec, _ in labeled]
    index = {name: i for i, name in enumerate(model.classes)}
    y_true = np.array([index[label] for _, label in labeled], dtype=np.int64)
    proba = model.predict_proba_many(narratives)
    y_pred = np.argmax(proba, axis=1)

    cm = ev.confusion(y_true, y_pred, len(model.classes), classes=list(model.classes))
    report = ev.metrics(cm)
    buf = io.StringIO()
    ev.write_metrics_json(report, buf)
    _atomic_write(out_dir / "metrics.json", buf.getvalue())
    buf = io.StringIO()
    ev.write_confusion_csv(cm, buf)
    _atomic_write(out_dir / "confusion.csv", buf.getvalue())
    roc = ev.ovr_roc(proba, y_true, classes=list(model.classes))
    for name, curve in roc.curves.items():
        buf = io.StringIO()
        ev.write_roc_csv(curve, buf)
        _atomic_write(out_dir / f"roc_{name}.csv", buf.getvalue())
    for name in roc.omitted:
        print(f"warning: class {name} has no positives in the test set; ROC omitted", file=sys.stderr)
    _write_resolved_config(cfg, out_dir, "evaluate")

    print(f"evaluated {len(labeled)} test records")
    print(f"macro-F1:  {report.macro_f1:.4f}")
    print(f"accuracy:  {report.accuracy:.4f}")
    for i, name in enumerate(model.classes):
        print(
            f"  {name:<10} precision {report.precision[i]:.3f}  recall {report.recall[i]:.3f}  "
            f"f1 {report.f1[i]:.3f}  support {int(report.support[i])}"
        )
    auc_strs = ", ".join(f"{name}={curve.auc:.3f}" for name, curve in roc.curves.items())
    if auc_strs:
        print(f"one-vs-rest AUC: {auc_strs}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# predict / inspect


def cmd_predict(model_file: str, narrative: str, top_n: int, as_json: bool) -> int:
    model = load_any_model(model_file)
    ranked = model.ranked_causes(narrative, top_n)
    if as_json:
        payload = {
            "narrative": narrative,
            "predictions": [{"cause": c, "probability": p} for c, p in ranked],
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"narrative: {narrative!r}")
        for cause, prob in ranked:
            print(f"  {cause:<10} {prob:.4f}")
    return EXIT_OK


def cmd_inspect(embedding_file: str, word: str, k: int) -> int:
    try:
        with open(embedding_file) as fh:
            matrix = load_embedding_file(fh)
    except FileNotFoundError as exc:
        raise DataError(f"embedding file not found: {embedding_file}") from exc
    try:
        neighbors = cosine_knn(matrix, word, k)
    except KeyError:
        close = difflib.get_close_matches(word, matrix.vocab.tokens(), n=5)
        hint = f"; closest spellings: {', '.join(close)}" if close else ""
        raise DataError(f"{word!r} is not in the embedding vocabulary{hint}") from None
    except ValueError as exc:
        raise DataError(str(exc)) from None
    print(f"nearest neighbors of {word!r}:")
    for tok, sim in neighbors:
        print(f"  {tok:<20} {sim:.4f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="railcause", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, config_required: bool = True) -> None:
        p.add_argument("--config", required=config_required, help="JSON run-config file")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--scheme", choices=["general", "specific"], default=None)
        p.add_argument("--output", default=None, help="output directory override")
        p.add_argument("--dataset-dir", dest="dataset_dir", default=None)

    p = sub.add_parser("prepare", help="ingest CSVs into split dataset files")
    add_common(p)

    p = sub.add_parser("train", help="train a model or baseline on a prepared dataset")
    add_common(p)
    p.add_argument("--embedding", choices=["word2vec", "glove", "tfidf"], default=None)
    p.add_argument("--model", choices=["dnn", "cnn", "rnn", "nbc", "svm"], default=None)

    p = sub.add_parser("evaluate", help="evaluate a trained model on the test set")
    add_common(p)
    p.add_argument("--model-file", required=True, help="model.json written by train")

    p = sub.add_parser("predict", help="rank cause codes for a narrative")
    p.add_argument("--model-file", required=True)
    p.add_argument("narrative", nargs="?", default=None, help="narrative text (or use --file)")
    p.add_argument("--file", default=None, help="read the narrative from a file")
    p.add_argument("--top", type=int, default=5)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("inspect", help="nearest neighbors in an embedding file")
    p.add_argument("--embedding-file", required=True)
    p.add_argument("word")
    p.add_argument("-k", type=int, default=10)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "prepare":
            cfg = RunConfig.load(args.config, args)
            return cmd_prepare(cfg)
        if args.command == "train":
            cfg = RunConfig.load(args.config, args)
            return cmd_train(cfg)
        if args.command == "evaluate":
            cfg = RunConfig.load(args.config, args)
            return cmd_evaluate(cfg, args.model_file)
        if args.command == "predict":
            if args.narrative is None and args.file is None:
                raise ConfigError("predict needs a narrative argument or --file")
            narrative = args.narrative
            if args.file is not None:
                try:
                    with open(args.file) as fh:
                        narrative = fh.read().strip()
                except FileNotFoundError as exc:
                    raise DataError(f"narrative file not found: {args.file}") from exc
            return cmd_predict(args.model_file, narrative, args.top, args.json)
        if args.command == "inspect":
            return cmd_inspect(args.embedding_file, args.word, args.k)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (TrainingDivergedError, NonFiniteGradientError) as exc:
        print(f"training failure: {exc}", file=sys.stderr)
        return EXIT_TRAINING
    except RailcauseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
