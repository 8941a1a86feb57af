"""Synthetic data for experiments, tests and demos.

The skill-identity task makes the label a deterministic function of the
skill token, with contexts drawn from one skill-independent distribution.
A classifier can only solve it by looking at the skill itself.
"""

import numpy as np

from .embed import EmbeddingTable
from .matcher import Snippet
from .represent import NEGATIVE, POSITIVE


def skill_identity_snippets(n=4000, n_skills=20, n_context_words=50, window=10, seed=0):
    """Snippets whose label is positive iff the skill is one of the first half of the skills.

    Returns ``(snippets, labels, skill_words, context_words)``. Every skill is a
    single token, so masking leaves no trace of which skill it was.
    """
    rng = np.random.default_rng(seed)
    skills = [f"skill{i}" for i in range(n_skills)]
    context = [f"word{i}" for i in range(n_context_words)]
    positive = set(range(n_skills // 2))
    snippets, labels = [], []
    for k in range(n):
        sid = int(rng.integers(n_skills))
        left = tuple(rng.choice(context, size=int(rng.integers(0, window + 1))))
        right = tuple(rng.choice(context, size=int(rng.integers(0, window + 1))))
        snippets.append(Snippet(left, (skills[sid],), right, sid, f"synthetic:{k}"))
        labels.append(POSITIVE if sid in positive else NEGATIVE)
    return snippets, labels, skills, context


def random_table(words, dim, seed=0, scale=0.5):
    rng = np.random.default_rng(seed)
    return EmbeddingTable(list(words), rng.uniform(-scale, scale, size=(len(words), dim)), seed=seed)


def class_separating_table(skill_words, context_words, dim, n_positive=None, seed=0):
    """Random vectors, except that skill vectors carry the class in their first component.

    The first ``n_positive`` skills get +1 there and the rest -1, so the mean
    embedding of any single-skill phrase separates the classes linearly.
    """
    rng = np.random.default_rng(seed)
    n_positive = len(skill_words) // 2 if n_positive is None else n_positive
    words = list(skill_words) + list(context_words)
    vectors = rng.uniform(-0.5, 0.5, size=(len(words), dim))
    for i in range(len(skill_words)):
        vectors[i, 0] = 1.0 if i < n_positive else -1.0
    return EmbeddingTable(words, vectors, seed=seed)
