"""Pre-trained word vectors in the plain-text ``word v1 ... vd`` format."""

import logging

import numpy as np

from .errors import InputError, ParseError
from .preprocess import BEGIN, END, MASK

log = logging.getLogger(__name__)

UNK = "<unk>"
INIT_SCALE = 0.25


class EmbeddingTable:
    """Word vectors plus an unknown-word vector and vectors for the reserved tokens.

    ``unk_vector`` and the reserved vectors are drawn from U(-0.25, 0.25) with
    ``seed``, so two loads of the same file are identical.
    """

    def __init__(self, words, vectors, seed=0):
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(words):
            raise InputError("vectors must be a (len(words), dim) matrix")
        self.dim = vectors.shape[1]
        self.seed = seed
        self.words = list(words)
        self.vectors = vectors
        self.index = {}
        for i, w in enumerate(self.words):
            self.index.setdefault(w, i)
        rng = np.random.default_rng(seed)
        extra = rng.uniform(-INIT_SCALE, INIT_SCALE, size=(4, self.dim))
        self.unk_vector = extra[0]
        self.reserved = {MASK: extra[1], BEGIN: extra[2], END: extra[3]}

    def __len__(self):
        return len(self.words)

    def __contains__(self, token):
        return token in self.index or token in self.reserved

    def lookup(self, token):
        i = self.index.get(token)
        if i is not None:
            return self.vectors[i]
        if token in self.reserved:
            return self.reserved[token]
        return self.unk_vector


def load_embeddings(path, expected_dim, seed=0):
    """Parse a text vector file; a leading ``count dim`` header line is skipped.

    Raises:
        ParseError: if any row does not carry exactly ``expected_dim`` values.
    """
    words, rows = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\r\n").split(" ")
            parts = [p for p in parts if p]
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
                continue
            if len(parts) - 1 != expected_dim:
                raise ParseError(
                    f"expected {expected_dim} values for {parts[0]!r}, got {len(parts) - 1}",
                    line=lineno, path=str(path))
            try:
                rows.append([float(v) for v in parts[1:]])
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno, path=str(path)) from None
            words.append(parts[0])
    vectors = np.array(rows, dtype=np.float64).reshape(len(rows), expected_dim)
    return EmbeddingTable(words, vectors, seed=seed)


def save_embeddings(table, path):
    with open(path, "w", encoding="utf-8") as fh:
        for word, vec in zip(table.words, table.vectors):
            fh.write(word + " " + " ".join(repr(float(v)) for v in vec) + "\n")


def mean_embedding(tokens, table):
    """Componentwise mean of the token vectors (unknown words use ``unk_vector``).

    If no token is known the result is the zero vector and a warning is logged.
    """
    if len(tokens) == 0:
        raise InputError("mean_embedding needs at least one token")
    if not any(tok in table for tok in tokens):
        log.warning("all tokens out of vocabulary: %s", " ".join(tokens))
        return np.zeros(table.dim)
    # sorted so the float summation order, and hence the result, ignores token order
    return np.mean([table.lookup(tok) for tok in sorted(tokens)], axis=0)
