import numpy as np


class Adam:
    """Adam with lazy row updates for the embedding matrix.

    Dense parameters get the textbook update. For ``embedding`` the gradient
    arrives as ``(rows, row_grads)`` and only those rows' moments and values
    are touched, as in sparse/lazy Adam variants; the bias correction uses the
    global step count.
    """

    def __init__(self, params, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, params, grads):
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        c1 = 1.0 - b1 ** self.t
        c2 = 1.0 - b2 ** self.t
        for name, g in grads.items():
            m, v, p = self.m[name], self.v[name], params[name]
            if isinstance(g, tuple):
                rows, g = g
                m[rows] = b1 * m[rows] + (1.0 - b1) * g
                v[rows] = b2 * v[rows] + (1.0 - b2) * g * g
                p[rows] -= self.lr * (m[rows] / c1) / (np.sqrt(v[rows] / c2) + self.eps)
            else:
                m *= b1
                m += (1.0 - b1) * g
                v *= b2
                v += (1.0 - b2) * g * g
                p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)
