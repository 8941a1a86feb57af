"""Weak labelling from seed skills whose crowd annotations are (nearly) unanimous."""

from collections import defaultdict
from dataclasses import dataclass

from .matcher import Snippet
from .preprocess import normalize
from .represent import NEGATIVE, POSITIVE

DEFAULT_EXCLUSIONS = ("candidate", "individual", "looking for")


@dataclass(frozen=True)
class AnnotationRecord:
    skill_id: int
    votes_positive: int
    votes_negative: int
    snippet: object = None

    def __post_init__(self):
        if self.votes_positive < 0 or self.votes_negative < 0 or self.votes_positive + self.votes_negative < 1:
            raise ValueError("an annotation needs at least one non-negative vote")

    @classmethod
    def from_record(cls, rec):
        snip = None
        if "skill" in rec:
            snip = Snippet.from_record(rec)
        return cls(int(rec["skill_id"]), int(rec["votes_positive"]), int(rec["votes_negative"]), snip)


def select_seed_skills(annotations, neg_ratio=0.7):
    """Split skills into negative and positive seeds by pooled vote fractions.

    A skill is a negative seed if more than ``neg_ratio`` of all its votes say
    "not the candidate", and a positive seed if none do.
    Returns ``(negative_seeds, positive_seeds)`` as sorted lists of skill ids.
    """
    pos = defaultdict(int)
    neg = defaultdict(int)
    for a in annotations:
        pos[a.skill_id] += a.votes_positive
        neg[a.skill_id] += a.votes_negative
    negative, positive = [], []
    for sid in sorted(pos.keys() | neg.keys()):
        total = pos[sid] + neg[sid]
        frac = neg[sid] / total
        if frac > neg_ratio:
            negative.append(sid)
        elif neg[sid] == 0:
            positive.append(sid)
    return negative, positive


def _contains(tokens, phrase):
    n = len(phrase)
    return any(tuple(tokens[i:i + n]) == phrase for i in range(len(tokens) - n + 1))


def mine_weak_labels(snippets, seed_skills, polarity, exclusion_phrases=DEFAULT_EXCLUSIONS, limit=None):
    """Label snippets of seed skills with ``polarity``, in corpus order.

    For negative mining, snippets whose left or right context contains any
    exclusion phrase (compared as normalized token runs) are discarded.
    Returns a list of ``(snippet, label)`` pairs, at most ``limit`` long.
    """
    label = POSITIVE if polarity in (POSITIVE, "positive") else NEGATIVE
    seeds = set(seed_skills)
    phrases = [tuple(normalize(p)) for p in exclusion_phrases] if label == NEGATIVE else []
    phrases = [p for p in phrases if p]
    out = []
    for snip in snippets:
        if limit is not None and len(out) >= limit:
            break
        if snip.skill_id not in seeds:
            continue
        if any(_contains(snip.left, p) or _contains(snip.right, p) for p in phrases):
            continue
        out.append((snip, label))
    return out
