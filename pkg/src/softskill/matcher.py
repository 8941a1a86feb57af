"""Phrase matching over normalized token sequences and snippet extraction.

Matches are leftmost-longest and non-overlapping: scanning left to right, the
longest lexicon phrase starting at the current position wins and scanning
resumes after it.
"""

from dataclasses import dataclass

from .errors import InputError
from .preprocess import RESERVED_TOKENS

DEFAULT_WINDOW = 10


class _Node:
    __slots__ = ("children", "phrase_id")

    def __init__(self):
        self.children = {}
        self.phrase_id = None


class MatchIndex:
    """Token trie over the lexicon's normalized phrases."""

    def __init__(self, phrases=()):
        self._root = _Node()
        self._accepting = 0
        self.max_length = 0
        for phrase in phrases:
            self._insert(phrase.tokens, phrase.id)

    def _insert(self, tokens, phrase_id):
        node = self._root
        for tok in tokens:
            node = node.children.setdefault(tok, _Node())
        if node.phrase_id is None:
            self._accepting += 1
            node.phrase_id = phrase_id
        self.max_length = max(self.max_length, len(tokens))

    @property
    def accepting_states(self):
        return self._accepting

    def longest_at(self, tokens, start):
        """Return ``(phrase_id, end)`` of the longest phrase starting at ``start``, or None."""
        node = self._root
        best = None
        for i in range(start, len(tokens)):
            node = node.children.get(tokens[i])
            if node is None:
                break
            if node.phrase_id is not None:
                best = (node.phrase_id, i + 1)
        return best


@dataclass(frozen=True)
class Match:
    skill_id: int
    start: int
    end: int


@dataclass(frozen=True)
class Snippet:
    left: tuple
    skill: tuple
    right: tuple
    skill_id: int
    source_id: str = ""

    @property
    def tokens(self):
        return self.left + self.skill + self.right

    def to_record(self, lexicon=None):
        rec = {"source_id": self.source_id, "skill_id": self.skill_id}
        if lexicon is not None:
            rec["skill_text"] = lexicon[self.skill_id].raw_text
        rec.update(left=list(self.left), skill=list(self.skill), right=list(self.right))
        return rec

    @classmethod
    def from_record(cls, rec):
        return cls(
            left=tuple(rec.get("left", ())),
            skill=tuple(rec["skill"]),
            right=tuple(rec.get("right", ())),
            skill_id=int(rec["skill_id"]),
            source_id=str(rec.get("source_id", "")),
        )


def build_index(lexicon):
    return MatchIndex(lexicon.phrases)


def find_matches(tokens, index):
    """Leftmost-longest, non-overlapping matches of ``index`` phrases in ``tokens``."""
    bad = RESERVED_TOKENS.intersection(tokens)
    if bad:
        raise InputError(f"input contains reserved token(s) {sorted(bad)}")
    matches = []
    i = 0
    n = len(tokens)
    while i < n:
        hit = index.longest_at(tokens, i)
        if hit is None:
            i += 1
            continue
        phrase_id, end = hit
        matches.append(Match(phrase_id, i, end))
        i = end
    return matches


def extract_snippet(tokens, match, window=DEFAULT_WINDOW, source_id=""):
    if window < 0:
        raise InputError("window must be non-negative")
    if not 0 <= match.start < match.end <= len(tokens):
        raise InputError(f"match [{match.start}, {match.end}) out of bounds for {len(tokens)} tokens")
    tokens = tuple(tokens)
    return Snippet(
        left=tokens[max(0, match.start - window):match.start],
        skill=tokens[match.start:match.end],
        right=tokens[match.end:match.end + window],
        skill_id=match.skill_id,
        source_id=source_id,
    )


def snippets_from_tokens(tokens, index, window=DEFAULT_WINDOW, source_id=""):
    """One snippet per match, each centred on its own skill."""
    return [extract_snippet(tokens, m, window, source_id) for m in find_matches(tokens, index)]
