"""Tokenization, vocabulary construction, and fixed-length index encoding."""

from __future__ import annotations

import string
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from railcause.errors import DataError

PAD = 0
UNK = 1
PAD_TOKEN = "<pad>"
UNK_TOKEN = "<unk>"
N_RESERVED = 2

DEFAULT_CAPACITY = 500


def tokenize(text: str) -> list[str]:
    """Split a narrative into lowercase unigrams.

    Splits on whitespace, strips leading/trailing punctuation from each
    token, and drops tokens that become empty.  Internal characters are
    kept as-is, so unit identifiers like "hokx112078" survive intact.
    """
    tokens = []
    for raw in text.lower().split():
        tok = raw.strip(string.punctuation)
        if tok:
            tokens.append(tok)
    return tokens


@dataclass
class Vocabulary:
    """Token/index maps with per-token document frequencies.

    Index 0 is PAD and index 1 is UNK; real tokens start at index 2.
    ``doc_freq`` counts the number of documents a token appears in and
    never contains PAD or UNK.
    """

    token_to_index: dict[str, int] = field(default_factory=dict)
    index_to_token: list[str] = field(default_factory=lambda: [PAD_TOKEN, UNK_TOKEN])
    doc_freq: dict[str, int] = field(default_factory=dict)
    n_docs: int = 0

    @property
    def size(self) -> int:
        """Total index count, including the PAD and UNK slots."""
        return len(self.index_to_token)

    def __len__(self) -> int:
        return len(self.index_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_index

    def index(self, token: str) -> int:
        """Index of a token, or UNK when out of vocabulary."""
        return self.token_to_index.get(token, UNK)

    def tokens(self) -> list[str]:
        """Real tokens in index order (excludes PAD and UNK)."""
        return self.index_to_token[N_RESERVED:]


@dataclass
class TokenSequence:
    """Fixed-length vector of vocabulary indices, PAD-filled at the tail."""

    indices: np.ndarray
    true_length: int

    @property
    def capacity(self) -> int:
        return len(self.indices)


def build_vocab(docs: Iterable[list[str]], min_count: int = 1) -> Vocabulary:
    """Build a vocabulary from tokenized documents.

    Keeps tokens whose total corpus occurrence count is at least
    ``min_count``.  Indices are assigned by descending corpus frequency,
    ties broken lexicographically, so identical corpora always produce
    identical vocabularies.
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    counts: Counter[str] = Counter()
    doc_freq: Counter[str] = Counter()
    n_docs = 0
    for doc in docs:
        n_docs += 1
        counts.update(doc)
        doc_freq.update(set(doc))
    kept = sorted(
        (t for t, c in counts.items() if c >= min_count),
        key=lambda t: (-counts[t], t),
    )
    vocab = Vocabulary(n_docs=n_docs)
    for tok in kept:
        vocab.token_to_index[tok] = len(vocab.index_to_token)
        vocab.index_to_token.append(tok)
        vocab.doc_freq[tok] = doc_freq[tok]
    return vocab


def encode(tokens: list[str], vocab: Vocabulary, capacity: int = DEFAULT_CAPACITY) -> TokenSequence:
    """Map tokens to a fixed-length index sequence.

    Out-of-vocabulary tokens map to UNK.  Sequences longer than
    ``capacity`` are truncated at the tail (the narrative's beginning is
    kept); shorter ones are padded with PAD at the tail.
    """
    if capacity < 1:
        raise ValueError("capacity must be >= 1")
    indices = np.zeros(capacity, dtype=np.int64)
    true_length = min(len(tokens), capacity)
    for i in range(true_length):
        indices[i] = vocab.index(tokens[i])
    return TokenSequence(indices=indices, true_length=true_length)


def decode(seq: TokenSequence, vocab: Vocabulary) -> list[str]:
    """Tokens for the first ``true_length`` positions of a sequence."""
    return [vocab.index_to_token[i] for i in seq.indices[: seq.true_length]]


def save_vocab(vocab: Vocabulary, stream: TextIO) -> None:
    """Write a vocabulary as a header line with n_docs, then one
    ``token<TAB>doc_freq`` line per real token in index order."""
    stream.write(f"{vocab.n_docs}\n")
    for tok in vocab.tokens():
        stream.write(f"{tok}\t{vocab.doc_freq[tok]}\n")


def load_vocab(stream: TextIO) -> Vocabulary:
    """Read a vocabulary written by :func:`save_vocab`."""
    header = stream.readline()
    if not header:
        raise DataError("vocabulary file is empty")
    try:
        n_docs = int(header.strip())
    except ValueError as exc:
        raise DataError(f"bad vocabulary header {header.strip()!r}") from exc
    vocab = Vocabulary(n_docs=n_docs)
    for line_no, line in enumerate(stream, start=2):
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise DataError(f"line {line_no}: expected token<TAB>doc_freq, got {line!r}")
        tok, df = parts
        try:
            df_val = int(df)
        except ValueError as exc:
            raise DataError(f"line {line_no}: bad doc_freq {df!r}") from exc
        vocab.token_to_index[tok] = len(vocab.index_to_token)
        vocab.index_to_token.append(tok)
        vocab.doc_freq[tok] = df_val
    return vocab
