"""Minibatch training with Adam, a 50/50 train/validation split and early stopping."""

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import ConfigurationError, TrainingError
from ..evaluation import confusion_from_predictions, f1_weighted
from ..represent import RepresentationMode
from . import layers
from .adam import Adam
from .network import (SPECIAL_TOKENS, ModelKind, backward_batch, forward_batch,
                      init_model, make_batch)

log = logging.getLogger(__name__)

DEFAULT_DROPOUT = {ModelKind.CNN: 0.5, ModelKind.LSTM: 0.2, ModelKind.MEAN_LOGISTIC: 0.0}


@dataclass
class TrainConfig:
    model_kind: ModelKind = ModelKind.LSTM
    mode: RepresentationMode = RepresentationMode.TAGGED
    learning_rate: float = 0.001
    batch_size: int = 16
    max_epochs: int = 100
    patience: int = 5
    seed: int = 0
    dropout: object = None          # None: 0.5 for CNN, 0.2 for LSTM, 0 for MeanLogistic
    max_doc_len: int = 30
    hidden_size: int = 100
    filter_widths: tuple = (2, 3, 4)
    filters_per_width: int = 50
    forget_bias: float = 1.0
    embedding_dim: int = 100        # used only when no embedding table is given
    validation_fraction: float = 0.5

    def __post_init__(self):
        self.model_kind = ModelKind.parse(self.model_kind)
        self.mode = RepresentationMode.parse(self.mode)
        self.filter_widths = tuple(int(w) for w in self.filter_widths)
        if self.dropout is None:
            self.dropout = DEFAULT_DROPOUT[self.model_kind]
        if not 0.0 <= self.dropout < 1.0:
            raise ConfigurationError("dropout must lie in [0, 1)")
        if self.learning_rate <= 0:
            raise ConfigurationError("learning_rate must be positive")
        if self.batch_size < 1:
            raise ConfigurationError("batch_size must be at least 1")
        if self.max_epochs < 1 or self.patience < 1:
            raise ConfigurationError("max_epochs and patience must be at least 1")
        if not 0.0 < self.validation_fraction < 1.0:
            raise ConfigurationError("validation_fraction must lie in (0, 1)")

    def to_dict(self):
        d = asdict(self)
        d["model_kind"] = self.model_kind.value
        d["mode"] = self.mode.value
        d["filter_widths"] = list(self.filter_widths)
        return d

    def digest(self):
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class TrainingLog:
    epochs: list = field(default_factory=list)
    best_epoch: int = 0
    stopped_early: bool = False
    n_train: int = 0
    n_validation: int = 0

    @property
    def best(self):
        return self.epochs[self.best_epoch - 1] if self.epochs else {}


def build_vocab(inputs, embeddings=None):
    """Special tokens, then the table's words, then unseen training words in first-seen order."""
    vocab = list(SPECIAL_TOKENS)
    seen = set(vocab)
    if embeddings is not None:
        for w in embeddings.words:
            if w not in seen:
                seen.add(w)
                vocab.append(w)
    for x in inputs:
        for tok in x.tokens:
            if tok not in seen:
                seen.add(tok)
                vocab.append(tok)
    return vocab


def make_hyper(config, dim, skill_dim):
    return {
        "dim": int(dim),
        "hidden_size": config.hidden_size,
        "filter_widths": list(config.filter_widths),
        "filters_per_width": config.filters_per_width,
        "max_doc_len": config.max_doc_len,
        "dropout": float(config.dropout),
        "skill_dim": int(skill_dim),
        "forget_bias": config.forget_bias,
    }


def _check_dataset(dataset, config):
    if not dataset:
        raise TrainingError("training set is empty")
    labels = [x.label for x in dataset]
    if any(lab is None for lab in labels):
        raise TrainingError("every training input needs a label")
    if len(set(labels)) < 2:
        raise TrainingError("training set must contain both classes")
    for x in dataset:
        if x.mode is not config.mode:
            raise ConfigurationError(f"config mode is {config.mode.value}, input has {x.mode.value}")


def _iterate(n, batch_size, rng=None):
    order = np.arange(n) if rng is None else rng.permutation(n)
    for start in range(0, n, batch_size):
        yield order[start:start + batch_size]


def evaluate_split(model, inputs, encoded, batch_size=256):
    """Loss, accuracy and F1-weighted at the 0.5 decision threshold."""
    losses, probs = [], []
    for idx in _iterate(len(inputs), batch_size):
        batch = make_batch(model, [inputs[i] for i in idx], [encoded[i] for i in idx])
        logits, _ = forward_batch(model, batch)
        loss, _ = layers.softmax_cross_entropy(logits, batch.labels)
        losses.append(float(loss) * len(idx))
        probs.append(layers.softmax(logits)[:, 1])
    probs = np.concatenate(probs)
    labels = np.array([x.label for x in inputs])
    preds = (probs >= 0.5).astype(int)
    conf = confusion_from_predictions(labels, preds)
    return {
        "loss": float(sum(losses) / len(inputs)),
        "accuracy": float(np.mean(preds == labels)),
        "f1_weighted": f1_weighted(conf),
    }


def train(dataset, config, embeddings=None):
    """Train a classifier; returns ``(model, TrainingLog)``.

    The data are shuffled with ``config.seed`` and split into training and
    validation halves. The parameters of the epoch with the best validation
    F1-weighted are kept; training stops after ``patience`` epochs without
    improvement.

    Raises:
        TrainingError: empty or single-class data, or a non-finite loss.
        ConfigurationError: inputs whose mode differs from ``config.mode``.
    """
    _check_dataset(dataset, config)
    seeds = np.random.SeedSequence(config.seed).spawn(3)
    split_rng, init_rng, loop_rng = (np.random.default_rng(s) for s in seeds)

    n = len(dataset)
    n_val = max(1, min(n - 1, int(round(n * config.validation_fraction))))
    perm = split_rng.permutation(n)
    val = [dataset[i] for i in perm[:n_val]]
    tr = [dataset[i] for i in perm[n_val:]]

    skill_dim = 0
    if config.mode is RepresentationMode.MASKED_WITH_EMBEDDING:
        vec = dataset[0].skill_vector
        if vec is None:
            raise ConfigurationError("masked-embed inputs need skill vectors")
        skill_dim = len(vec)
    dim = embeddings.dim if embeddings is not None else config.embedding_dim
    vocab = build_vocab(tr, embeddings)
    model = init_model(config.model_kind, config.mode, vocab, make_hyper(config, dim, skill_dim),
                       init_rng, embeddings=embeddings)
    model.meta = {"seed": config.seed, "config": config.to_dict(), "config_hash": config.digest()}

    enc_tr = [model.encode(x.tokens) for x in tr]
    enc_val = [model.encode(x.tokens) for x in val]
    optimizer = Adam(model.params, lr=config.learning_rate)
    history = TrainingLog(n_train=len(tr), n_validation=len(val))
    best_params = {k: v.copy() for k, v in model.params.items()}
    best_f1 = -1.0
    wait = 0

    for epoch in range(1, config.max_epochs + 1):
        total = 0.0
        for idx in _iterate(len(tr), config.batch_size, loop_rng):
            batch = make_batch(model, [tr[i] for i in idx], [enc_tr[i] for i in idx])
            logits, cache = forward_batch(model, batch, rng=loop_rng)
            loss, dlogits = layers.softmax_cross_entropy(logits, batch.labels)
            loss = float(loss)
            if not np.isfinite(loss):
                raise TrainingError(f"non-finite loss {loss} at epoch {epoch}; try a lower learning rate")
            total += loss * len(idx)
            optimizer.step(model.params, backward_batch(model, dlogits, cache))
        stats = evaluate_split(model, val, enc_val)
        stats = {"epoch": epoch, "train_loss": total / len(tr), **{f"val_{k}": v for k, v in stats.items()}}
        history.epochs.append(stats)
        log.info("epoch %d train_loss %.4f val_loss %.4f val_acc %.4f val_f1w %.4f", epoch,
                 stats["train_loss"], stats["val_loss"], stats["val_accuracy"], stats["val_f1_weighted"])
        if stats["val_f1_weighted"] > best_f1:
            best_f1 = stats["val_f1_weighted"]
            best_params = {k: v.copy() for k, v in model.params.items()}
            history.best_epoch = epoch
            wait = 0
        else:
            wait += 1
            if wait >= config.patience:
                history.stopped_early = True
                break

    model.params = best_params
    model.meta["best_epoch"] = history.best_epoch
    return model, history
