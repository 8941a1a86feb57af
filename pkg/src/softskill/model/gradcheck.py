"""Finite-difference verification of the hand-written backward passes."""

import numpy as np

from ..represent import RepresentationMode, RepresentedInput
from . import layers
from .network import (PAD_ID, SPECIAL_TOKENS, backward_batch, dense_embedding_grad,
                      forward_batch, init_model, make_batch, ModelKind)


def _loss(model, batch):
    logits, cache = forward_batch(model, batch)
    loss, dlogits = layers.softmax_cross_entropy(logits, batch.labels)
    return loss, dlogits, cache


def relative_errors(model, inputs, step=1e-5):
    """Maximum relative error per parameter tensor, dropout off.

    Analytic gradients are computed in float64. The central differences are
    evaluated on an extended-precision copy of the model so that round-off
    in the loss does not swamp near-zero gradient entries. The padding row
    of the embedding is fixed and therefore skipped.
    """
    batch = make_batch(model, inputs)
    _, dlogits, cache = _loss(model, batch)
    grads = backward_batch(model, dlogits, cache)
    grads["embedding"] = dense_embedding_grad(model, grads)
    probe = model.copy()
    probe.params = {k: v.astype(np.longdouble) for k, v in model.params.items()}
    errors = {}
    for name, param in probe.params.items():
        analytic = grads[name]
        numeric = np.zeros(param.shape)
        flat = param.reshape(-1)
        for k in range(flat.size):
            if name == "embedding" and k // param.shape[1] == PAD_ID:
                continue
            orig = flat[k]
            flat[k] = orig + step
            up = _loss(probe, batch)[0]
            flat[k] = orig - step
            down = _loss(probe, batch)[0]
            flat[k] = orig
            numeric.reshape(-1)[k] = float((up - down) / (2 * step))
        if name == "embedding":
            analytic = analytic[1:]
            numeric = numeric[1:]
        denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
        errors[name] = float(np.max(np.abs(analytic - numeric) / denom))
    return errors


def _random_inputs(mode, rng, words, n=3, skill_dim=8):
    mode = RepresentationMode.parse(mode)
    out = []
    for i in range(n):
        length = int(rng.integers(3, 9))
        toks = tuple(rng.choice(words, size=length))
        vec = rng.normal(size=skill_dim) if mode is RepresentationMode.MASKED_WITH_EMBEDDING else None
        out.append(RepresentedInput(toks, mode, vec, label=i % 2))
    return out


def gradient_check(model_kind, mode, sample_input=None, seed=0, dim=8, hidden=8,
                   filters=4, step=1e-5):
    """Largest relative error between analytic and central-difference gradients.

    A small random model (``dim``-dimensional embeddings, ``hidden`` LSTM
    units, ``filters`` CNN filters per width) is built around
    ``sample_input`` (a :class:`RepresentedInput` or a list of them); without
    a sample a few random inputs are generated. All biases are randomized so
    that no bias gradient is trivially zero.
    """
    kind = ModelKind.parse(model_kind)
    mode = RepresentationMode.parse(mode)
    rng = np.random.default_rng(seed)
    if sample_input is None:
        inputs = _random_inputs(mode, rng, ["a", "b", "c", "d", "e", "xxx", "<begin>", "<end>"], skill_dim=dim)
    elif isinstance(sample_input, RepresentedInput):
        inputs = [sample_input]
    else:
        inputs = list(sample_input)
    inputs = [x if x.label is not None else RepresentedInput(x.tokens, x.mode, x.skill_vector, 1)
              for x in inputs]
    vocab = list(SPECIAL_TOKENS)
    for x in inputs:
        vocab += [t for t in x.tokens if t not in vocab]
    skill_dim = len(inputs[0].skill_vector) if mode is RepresentationMode.MASKED_WITH_EMBEDDING else 0
    hyper = {"dim": dim, "hidden_size": hidden, "filter_widths": [2, 3, 4], "filters_per_width": filters,
             "max_doc_len": 30, "dropout": 0.0, "skill_dim": skill_dim, "forget_bias": 1.0}
    model = init_model(kind, mode, vocab, hyper, rng, random_biases=True)
    return max(relative_errors(model, inputs, step).values())
