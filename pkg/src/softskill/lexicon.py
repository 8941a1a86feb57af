"""Soft-skill lexicon: loading, saving and summary statistics.

The on-disk format is one phrase per line, ``cluster_id<TAB>phrase``. Blank
lines are ignored.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field

from .errors import ParseError
from .preprocess import RESERVED_TOKENS, normalize

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SkillPhrase:
    id: int
    raw_text: str
    tokens: tuple
    cluster_id: int


@dataclass
class SkillLexicon:
    phrases: list = field(default_factory=list)
    clusters: dict = field(default_factory=dict)
    # Number of lines dropped because they normalized to an existing phrase.
    duplicate_count: int = field(default=0, compare=False)
    # Number of lines dropped because they normalized to no tokens.
    empty_count: int = field(default=0, compare=False)

    def __len__(self):
        return len(self.phrases)

    def __getitem__(self, phrase_id):
        return self.phrases[phrase_id]

    @classmethod
    def from_pairs(cls, pairs):
        """Build a lexicon from ``(cluster_id, phrase_text)`` pairs, in order."""
        lex = cls()
        seen = set()
        for cluster_id, text in pairs:
            tokens = tuple(normalize(text))
            if not tokens:
                log.warning("phrase %r normalizes to no tokens; skipped", text)
                lex.empty_count += 1
                continue
            reserved = RESERVED_TOKENS.intersection(tokens)
            if reserved:
                raise ValueError(f"phrase {text!r} contains reserved token(s) {sorted(reserved)}")
            if tokens in seen:
                lex.duplicate_count += 1
                continue
            seen.add(tokens)
            phrase = SkillPhrase(len(lex.phrases), text, tokens, int(cluster_id))
            lex.phrases.append(phrase)
            lex.clusters.setdefault(phrase.cluster_id, []).append(phrase.id)
        if lex.duplicate_count:
            log.warning("%d duplicate phrase(s) collapsed", lex.duplicate_count)
        return lex


@dataclass(frozen=True)
class LexiconStats:
    phrase_count: int
    cluster_count: int
    length_histogram: dict
    one_word_count: int
    max_length: int

    def as_lines(self):
        lines = [
            f"phrase_count: {self.phrase_count}",
            f"cluster_count: {self.cluster_count}",
            f"one_word_count: {self.one_word_count}",
            f"max_length: {self.max_length}",
        ]
        lines += [f"length_{k}: {v}" for k, v in sorted(self.length_histogram.items())]
        return lines


def _parse_lines(lines, path=None):
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError("expected 'cluster_id<TAB>phrase'", line=lineno, path=path)
        try:
            cluster_id = int(parts[0].strip())
        except ValueError:
            raise ParseError(f"cluster id {parts[0]!r} is not an integer", line=lineno, path=path) from None
        yield lineno, cluster_id, parts[1]


def load_lexicon(path):
    """Read a lexicon TSV file.

    Raises:
        ParseError: on a malformed line or a phrase containing a reserved token.
    """
    with open(path, encoding="utf-8") as fh:
        rows = list(_parse_lines(fh, path=str(path)))
    for lineno, _, text in rows:
        reserved = RESERVED_TOKENS.intersection(normalize(text))
        if reserved:
            raise ParseError(f"phrase contains reserved token(s) {sorted(reserved)}", line=lineno, path=str(path))
    return SkillLexicon.from_pairs((cid, text) for _, cid, text in rows)


def save_lexicon(lexicon, path):
    with open(path, "w", encoding="utf-8") as fh:
        for phrase in lexicon.phrases:
            fh.write(f"{phrase.cluster_id}\t{phrase.raw_text}\n")


def compute_stats(lexicon):
    hist = Counter(len(p.tokens) for p in lexicon.phrases)
    return LexiconStats(
        phrase_count=len(lexicon.phrases),
        cluster_count=len(lexicon.clusters),
        length_histogram=dict(sorted(hist.items())),
        one_word_count=hist.get(1, 0),
        max_length=max(hist, default=0),
    )
