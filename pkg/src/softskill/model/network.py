"""Classifier definitions: parameter layout, initialization, batched forward/backward."""

import enum
from dataclasses import dataclass, field

import numpy as np

from ..embed import INIT_SCALE
from ..errors import ConfigurationError, InputError
from ..preprocess import BEGIN, END, MASK
from ..represent import RepresentationMode
from . import layers

PAD = "<pad>"
UNK = "<unk>"
SPECIAL_TOKENS = (PAD, UNK, MASK, BEGIN, END)
PAD_ID = 0
UNK_ID = 1

GATES = ("input", "forget", "output", "cell")


class ModelKind(enum.Enum):
    MEAN_LOGISTIC = "mean"
    CNN = "cnn"
    LSTM = "lstm"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        aliases = {"meanlogistic": "mean", "mean-logistic": "mean", "logistic": "mean"}
        v = str(value).lower()
        try:
            return cls(aliases.get(v, v))
        except ValueError:
            raise ConfigurationError(f"unknown model kind {value!r} (expected mean, cnn or lstm)") from None


@dataclass(frozen=True)
class Prediction:
    probability_positive: float
    logits: tuple


@dataclass
class ClassifierModel:
    """A trained or freshly initialized classifier.

    ``hyper`` holds the architecture settings (dim, hidden_size,
    filter_widths, filters_per_width, max_doc_len, dropout, skill_dim,
    forget_bias); ``params`` maps tensor names to float64 arrays.
    """

    kind: ModelKind
    mode: RepresentationMode
    vocab: list
    hyper: dict
    params: dict
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.token_index = {tok: i for i, tok in enumerate(self.vocab)}

    @property
    def dim(self):
        return self.hyper["dim"]

    @property
    def skill_dim(self):
        return self.hyper.get("skill_dim", 0)

    def encode(self, tokens):
        get = self.token_index.get
        return np.array([get(t, UNK_ID) for t in tokens], dtype=np.int64)

    def copy(self):
        return ClassifierModel(self.kind, self.mode, list(self.vocab), dict(self.hyper),
                               {k: v.copy() for k, v in self.params.items()}, dict(self.meta))


def feature_width(kind, hyper):
    if kind is ModelKind.MEAN_LOGISTIC:
        base = hyper["dim"]
    elif kind is ModelKind.LSTM:
        base = hyper["hidden_size"]
    else:
        base = len(hyper["filter_widths"]) * hyper["filters_per_width"]
    return base + hyper.get("skill_dim", 0)


def expected_shapes(kind, hyper, vocab_size):
    D = hyper["dim"]
    shapes = {"embedding": (vocab_size, D)}
    if kind is ModelKind.LSTM:
        H = hyper["hidden_size"]
        for gate in GATES:
            shapes[f"lstm.{gate}.W"] = (D + H, H)
            shapes[f"lstm.{gate}.b"] = (H,)
    elif kind is ModelKind.CNN:
        F = hyper["filters_per_width"]
        for w in hyper["filter_widths"]:
            shapes[f"conv{w}.W"] = (w * D, F)
            shapes[f"conv{w}.b"] = (F,)
    shapes["dense.W"] = (feature_width(kind, hyper), 2)
    shapes["dense.b"] = (2,)
    return shapes


def init_model(kind, mode, vocab, hyper, rng, embeddings=None, random_biases=False):
    """Initialize parameters.

    Embedding rows come from ``embeddings`` where the token is known to it,
    otherwise from U(-0.25, 0.25); the padding row is zero. LSTM forget-gate
    biases start at ``hyper['forget_bias']``.
    """
    kind = ModelKind.parse(kind)
    mode = RepresentationMode.parse(mode)
    vocab = list(vocab)
    if tuple(vocab[:len(SPECIAL_TOKENS)]) != SPECIAL_TOKENS:
        raise ConfigurationError("vocabulary must start with the special tokens")
    shapes = expected_shapes(kind, hyper, len(vocab))
    D = hyper["dim"]

    emb = rng.uniform(-INIT_SCALE, INIT_SCALE, size=(len(vocab), D))
    if embeddings is not None:
        if embeddings.dim != D:
            raise ConfigurationError(f"embedding table has dim {embeddings.dim}, model expects {D}")
        for i, tok in enumerate(vocab):
            if tok in embeddings.index:
                emb[i] = embeddings.vectors[embeddings.index[tok]]
            elif tok in embeddings.reserved:
                emb[i] = embeddings.reserved[tok]
        emb[UNK_ID] = embeddings.unk_vector
    emb[PAD_ID] = 0.0
    params = {"embedding": emb}

    def uniform(shape, fan_in):
        bound = 1.0 / np.sqrt(fan_in)
        return rng.uniform(-bound, bound, size=shape)

    def bias(shape, value=0.0):
        if random_biases:
            return rng.uniform(-0.1, 0.1, size=shape) + value
        return np.full(shape, float(value))

    if kind is ModelKind.LSTM:
        H = hyper["hidden_size"]
        for gate in GATES:
            params[f"lstm.{gate}.W"] = uniform((D + H, H), H)
            params[f"lstm.{gate}.b"] = bias((H,), hyper.get("forget_bias", 1.0) if gate == "forget" else 0.0)
    elif kind is ModelKind.CNN:
        for w in hyper["filter_widths"]:
            params[f"conv{w}.W"] = uniform(shapes[f"conv{w}.W"], w * D)
            params[f"conv{w}.b"] = bias(shapes[f"conv{w}.b"])
    fw = feature_width(kind, hyper)
    params["dense.W"] = uniform((fw, 2), fw)
    params["dense.b"] = bias((2,))
    return ClassifierModel(kind, mode, vocab, dict(hyper), params)


@dataclass
class Batch:
    ids: np.ndarray          # (B, T) int, right-padded with PAD_ID
    lengths: np.ndarray      # (B,) int
    skill: object = None     # (B, S) float or None
    labels: object = None    # (B,) int or None


def make_batch(model, inputs, encoded=None):
    if encoded is None:
        encoded = [model.encode(x.tokens) for x in inputs]
    lengths = np.array([len(e) for e in encoded], dtype=np.int64)
    if (lengths == 0).any():
        raise InputError("cannot classify an empty token sequence")
    for x in inputs:
        if x.mode is not model.mode:
            raise ConfigurationError(f"model expects {model.mode.value} inputs, got {x.mode.value}")
    T = int(lengths.max())
    ids = np.full((len(encoded), T), PAD_ID, dtype=np.int64)
    for r, e in enumerate(encoded):
        ids[r, :len(e)] = e
    skill = None
    if model.mode is RepresentationMode.MASKED_WITH_EMBEDDING:
        vecs = []
        for x in inputs:
            if x.skill_vector is None or len(x.skill_vector) != model.skill_dim:
                raise ConfigurationError(f"masked-embed input needs a skill vector of length {model.skill_dim}")
            vecs.append(x.skill_vector)
        skill = np.asarray(vecs, dtype=np.float64)
    labels = None
    if all(x.label is not None for x in inputs):
        labels = np.array([x.label for x in inputs], dtype=np.int64)
    return Batch(ids, lengths, skill, labels)


def _lstm_W(params):
    return (np.concatenate([params[f"lstm.{g}.W"] for g in GATES], axis=1),
            np.concatenate([params[f"lstm.{g}.b"] for g in GATES]))


def forward_batch(model, batch, rng=None):
    """Return ``(logits, cache)``; a non-None ``rng`` enables dropout."""
    p = model.params
    hyper = model.hyper
    ids, lengths = batch.ids, batch.lengths
    cache = {"ids": ids}
    if model.kind is ModelKind.CNN:
        L = hyper["max_doc_len"]
        lengths = np.minimum(lengths, L)
        ids = ids[:, :L]
        if ids.shape[1] < L:
            ids = np.pad(ids, ((0, 0), (0, L - ids.shape[1])), constant_values=PAD_ID)
        cache["ids"] = ids
    emb = p["embedding"][ids]

    if model.kind is ModelKind.MEAN_LOGISTIC:
        feats, cache["pool"] = layers.mean_pool_forward(emb, lengths)
    elif model.kind is ModelKind.LSTM:
        W, b = _lstm_W(p)
        feats, cache["lstm"] = layers.lstm_forward(emb, lengths, W, b)
    else:
        pooled = []
        for w in hyper["filter_widths"]:
            out, cache[f"conv{w}"] = layers.conv_maxpool_forward(emb, p[f"conv{w}.W"], p[f"conv{w}.b"], w)
            pooled.append(out)
        feats = np.concatenate(pooled, axis=1)
    cache["base_width"] = feats.shape[1]
    if batch.skill is not None:
        feats = np.concatenate([feats, batch.skill], axis=1)
    rate = hyper.get("dropout", 0.0) if rng is not None else 0.0
    feats, cache["dropout"] = layers.dropout_forward(feats, rate, rng)
    logits, cache["dense"] = layers.dense_forward(feats, p["dense.W"], p["dense.b"])
    return logits, cache


def backward_batch(model, dlogits, cache):
    """Gradients of all parameters.

    The embedding gradient is returned as ``(rows, row_grads)`` over the
    distinct non-padding rows used by the batch; the padding row is fixed.
    """
    p = model.params
    grads = {}
    dfeats, grads["dense.W"], grads["dense.b"] = layers.dense_backward(dlogits, cache["dense"], p["dense.W"])
    dfeats = layers.dropout_backward(dfeats, cache["dropout"])
    dfeats = dfeats[:, :cache["base_width"]]

    if model.kind is ModelKind.MEAN_LOGISTIC:
        demb = layers.mean_pool_backward(dfeats, cache["pool"])
    elif model.kind is ModelKind.LSTM:
        W, _ = _lstm_W(p)
        demb, dW, db = layers.lstm_backward(dfeats, cache["lstm"])
        H = model.hyper["hidden_size"]
        for k, g in enumerate(GATES):
            grads[f"lstm.{g}.W"] = dW[:, k * H:(k + 1) * H]
            grads[f"lstm.{g}.b"] = db[k * H:(k + 1) * H]
    else:
        demb = np.zeros(cache["ids"].shape + (model.dim,))
        F = model.hyper["filters_per_width"]
        for k, w in enumerate(model.hyper["filter_widths"]):
            d, grads[f"conv{w}.W"], grads[f"conv{w}.b"] = layers.conv_maxpool_backward(
                dfeats[:, k * F:(k + 1) * F], cache[f"conv{w}"], p[f"conv{w}.W"])
            demb += d

    ids = cache["ids"]
    T = demb.shape[1]
    flat_ids = ids[:, :T].reshape(-1)
    flat_grad = demb.reshape(-1, model.dim)
    rows, inverse = np.unique(flat_ids, return_inverse=True)
    row_grads = np.zeros((len(rows), model.dim))
    np.add.at(row_grads, inverse, flat_grad)
    keep = rows != PAD_ID
    grads["embedding"] = (rows[keep], row_grads[keep])
    return grads


def dense_embedding_grad(model, grads):
    rows, values = grads["embedding"]
    full = np.zeros_like(model.params["embedding"])
    full[rows] = values
    return full


def predict_logits(model, inputs, batch_size=256):
    out = []
    for start in range(0, len(inputs), batch_size):
        chunk = inputs[start:start + batch_size]
        logits, _ = forward_batch(model, make_batch(model, chunk))
        out.append(logits)
    return np.concatenate(out, axis=0) if out else np.zeros((0, 2))


def predict_proba(model, inputs, batch_size=256):
    """Probability of the positive class for each input, dropout off."""
    logits = predict_logits(model, inputs, batch_size)
    return layers.softmax(logits)[:, 1] if len(logits) else np.zeros(0)


def forward(model, x, train_mode=False, rng=None):
    """Classify a single represented input.

    With ``train_mode`` dropout is active and ``rng`` (or a fresh default
    generator) supplies the masks.
    """
    if train_mode and rng is None:
        rng = np.random.default_rng()
    logits, _ = forward_batch(model, make_batch(model, [x]), rng=rng if train_mode else None)
    probs = layers.softmax(logits)[0]
    return Prediction(float(probs[1]), (float(logits[0, 0]), float(logits[0, 1])))
