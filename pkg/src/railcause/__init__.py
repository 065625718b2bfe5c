"""Classify railroad accident narratives into coded accident causes.

Pipeline: CSV ingestion -> tokenization/vocabulary -> tf-idf or word
embeddings (trained word2vec or loaded GloVe) -> DNN/CNN/GRU classifiers
built on a from-scratch reverse-mode core, plus NBC/SVM baselines and
macro-F1 / confusion-matrix / ROC evaluation.
"""

__version__ = "0.1.0"

from railcause.corpus import (
    AccidentRecord,
    DatasetSplit,
    general_label,
    load_records,
    specific_label,
    stratified_split,
)
from railcause.embed import EmbeddingMatrix, Word2VecConfig, cosine_knn, load_glove, train_word2vec
from railcause.metrics import confusion, metrics, ovr_roc, roc_curve
from railcause.models import ModelSpec, TrainConfig, TrainedModel, build, predict, predict_proba, train
from railcause.text import Vocabulary, build_vocab, encode, tokenize
from railcause.vectorize import TfIdfModel, fit_tfidf, tfidf_transform

__all__ = [
    "AccidentRecord",
    "DatasetSplit",
    "EmbeddingMatrix",
    "ModelSpec",
    "TfIdfModel",
    "TrainConfig",
    "TrainedModel",
    "Vocabulary",
    "Word2VecConfig",
    "build",
    "build_vocab",
    "confusion",
    "cosine_knn",
    "encode",
    "fit_tfidf",
    "general_label",
    "load_glove",
    "load_records",
    "metrics",
    "ovr_roc",
    "predict",
    "predict_proba",
    "roc_curve",
    "specific_label",
    "stratified_split",
    "tfidf_transform",
    "tokenize",
    "train",
    "train_word2vec",
]
