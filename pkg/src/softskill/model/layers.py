"""Forward/backward primitives in float64 numpy.

Each ``*_forward`` returns its output and a cache; the matching
``*_backward`` takes the upstream gradient and that cache.
"""

import numpy as np


def sigmoid(x):
    # split by sign to avoid overflow in exp
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax(logits):
    z = logits - logits.max(axis=-1, keepdims=True)
    ez = np.exp(z)
    return ez / ez.sum(axis=-1, keepdims=True)


def softmax_cross_entropy(logits, labels):
    """Mean cross-entropy over the batch and its gradient w.r.t. ``logits``.

    The loss keeps the dtype of ``logits`` (a numpy scalar).
    """
    z = logits - logits.max(axis=1, keepdims=True)
    logsum = np.log(np.exp(z).sum(axis=1))
    n = logits.shape[0]
    loss = np.mean(logsum - z[np.arange(n), labels])
    grad = softmax(logits)
    grad[np.arange(n), labels] -= 1.0
    return loss, grad / n


def dense_forward(x, W, b):
    return x @ W + b, x


def dense_backward(dout, x, W):
    return dout @ W.T, x.T @ dout, dout.sum(axis=0)


def dropout_forward(x, rate, rng):
    """Inverted dropout; ``rng=None`` or ``rate=0`` means inference (identity)."""
    if rng is None or rate <= 0.0:
        return x, None
    keep = 1.0 - rate
    mask = (rng.random(x.shape) < keep) / keep
    return x * mask, mask


def dropout_backward(dout, mask):
    return dout if mask is None else dout * mask


def mean_pool_forward(emb, lengths):
    """Mean over the first ``lengths[b]`` positions of ``emb`` (B, T, D)."""
    T = emb.shape[1]
    valid = (np.arange(T)[None, :] < lengths[:, None]).astype(emb.dtype)
    out = (emb * valid[:, :, None]).sum(axis=1) / lengths[:, None]
    return out, (valid, lengths)


def mean_pool_backward(dout, cache):
    valid, lengths = cache
    return (dout / lengths[:, None])[:, None, :] * valid[:, :, None]


def lstm_forward(emb, lengths, W, b):
    """Single-layer LSTM over a right-padded batch; returns each sequence's last hidden state.

    ``W`` is (D + H, 4H) and ``b`` is (4H,), gate blocks ordered input,
    forget, output, cell. Steps past a sequence's length leave its state
    untouched, so the result equals running each sequence on its own.
    """
    B, T, _ = emb.shape
    H = W.shape[1] // 4
    h = np.zeros((B, H), dtype=emb.dtype)
    c = np.zeros((B, H), dtype=emb.dtype)
    steps = []
    for t in range(T):
        m = (t < lengths).astype(emb.dtype)[:, None]
        if not m.any():
            break
        xh = np.concatenate([emb[:, t, :], h], axis=1)
        z = xh @ W + b
        i = sigmoid(z[:, :H])
        f = sigmoid(z[:, H:2 * H])
        o = sigmoid(z[:, 2 * H:3 * H])
        g = np.tanh(z[:, 3 * H:])
        c_new = f * c + i * g
        tc = np.tanh(c_new)
        h_new = o * tc
        steps.append((m, xh, c, i, f, o, g, tc))
        c = m * c_new + (1.0 - m) * c
        h = m * h_new + (1.0 - m) * h
    return h, (steps, W, T)


def lstm_backward(dh, cache):
    steps, W, T = cache
    B, H = dh.shape
    D = W.shape[0] - H
    dW = np.zeros_like(W)
    db = np.zeros(W.shape[1])
    demb = np.zeros((B, T, D))
    dc = np.zeros((B, H))
    for t in range(len(steps) - 1, -1, -1):
        m, xh, c_prev, i, f, o, g, tc = steps[t]
        dh_new = m * dh
        dc_new = m * dc + dh_new * o * (1.0 - tc * tc)
        dz = np.concatenate([
            dc_new * g * i * (1.0 - i),
            dc_new * c_prev * f * (1.0 - f),
            dh_new * tc * o * (1.0 - o),
            dc_new * i * (1.0 - g * g),
        ], axis=1)
        dW += xh.T @ dz
        db += dz.sum(axis=0)
        dxh = dz @ W.T
        demb[:, t, :] = dxh[:, :D]
        dh = (1.0 - m) * dh + dxh[:, D:]
        dc = (1.0 - m) * dc + dc_new * f
    return demb, dW, db


def conv_maxpool_forward(emb, W, b, width):
    """Narrow 1-D convolution over time (full embedding width), ReLU, max over time.

    ``emb`` is (B, L, D) with L >= width; ``W`` is (width * D, F).
    """
    B, L, D = emb.shape
    P = L - width + 1
    windows = np.concatenate([emb[:, k:k + P, :] for k in range(width)], axis=2)
    act = np.maximum(windows @ W + b, 0.0)
    idx = act.argmax(axis=1)
    pooled = np.take_along_axis(act, idx[:, None, :], axis=1)[:, 0, :]
    return pooled, (windows, idx, pooled, width, L)


def conv_maxpool_backward(dpooled, cache, W):
    windows, idx, pooled, width, L = cache
    B, P, _ = windows.shape
    D = windows.shape[2] // width
    # ReLU gradient is zero where the pooled activation was clipped
    dpooled = dpooled * (pooled > 0.0)
    dact = np.zeros((B, P, W.shape[1]))
    np.put_along_axis(dact, idx[:, None, :], dpooled[:, None, :], axis=1)
    dW = np.einsum("bpk,bpf->kf", windows, dact)
    db = dact.sum(axis=(0, 1))
    dwin = dact @ W.T
    demb = np.zeros((B, L, D))
    for k in range(width):
        demb[:, k:k + P, :] += dwin[:, :, k * D:(k + 1) * D]
    return demb, dW, db
