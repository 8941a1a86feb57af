"""Text normalization: tokenization, case-folding and a small rule-based lemmatizer.

Lexicon phrases and corpus text go through the same :func:`normalize`, so a
phrase matches a corpus span iff their normalized tokens are identical. The
lemmatizer only reduces plural nouns; it is an approximation of a dictionary
lemmatizer, not a replacement for one.

Hyphenated words stay single tokens (``fault-tolerant``).
"""

import unicodedata

MASK = "xxx"
BEGIN = "<begin>"
END = "<end>"
RESERVED_TOKENS = frozenset({MASK, BEGIN, END})

COMMA = ","

# Words ending in "s" that are not plurals (or whose plural rule misfires).
_IRREGULAR = frozenset({
    "is", "this", "its", "was", "has", "does", "as", "us", "yes", "his",
    "hers", "ours", "yours", "theirs", "thus", "plus", "always", "perhaps",
    "news", "series", "species", "means", "whereas", "less", "unless",
    "across", "towards", "afterwards", "besides", "sometimes", "various",
    "previous", "serious", "numerous", "famous", "gas", "bus", "bias",
    "canvas", "chaos", "ethos", "physics", "mathematics", "economics",
    "politics", "ethics", "logistics", "analytics", "statistics",
    "athletics", "tennis", "diabetes", "overseas", "whereabouts", "alias",
    "atlas", "basis", "crisis", "analysis", "emphasis", "thesis",
})

_ES_SUFFIXES = ("ses", "xes", "zes", "ches", "shes")


def _is_punct(ch):
    # punctuation, symbols, and control/format characters
    return unicodedata.category(ch)[0] in "PSC"


def _strip_punct(fragment):
    start, end = 0, len(fragment)
    while start < end and _is_punct(fragment[start]):
        start += 1
    while end > start and _is_punct(fragment[end - 1]):
        end -= 1
    return fragment[start:end]


def tokenize(text):
    """Split ``text`` into case-folded tokens, keeping commas as their own token.

    >>> tokenize("accurate, legible documentation")
    ['accurate', ',', 'legible', 'documentation']
    """
    tokens = []
    for chunk in text.split():
        parts = chunk.split(COMMA)
        for i, part in enumerate(parts):
            if i > 0:
                tokens.append(COMMA)
            core = _strip_punct(part)
            if core:
                tokens.append(core.casefold())
    return tokens


def _reduce_once(token):
    if len(token) <= 3 or token in _IRREGULAR:
        return token
    if token.endswith("ies") and len(token) > 4:
        return token[:-3] + "y"
    if token.endswith(_ES_SUFFIXES):
        return token[:-2]
    if token.endswith("s") and not token.endswith(("ss", "us", "is")):
        return token[:-1]
    return token


def lemmatize(token):
    """Reduce a plural noun to its singular form; other tokens pass through.

    Only purely alphabetic tokens are touched. Rules are applied until the
    token stops changing, which makes the function idempotent.
    """
    if not token.isalpha():
        return token
    while True:
        reduced = _reduce_once(token)
        if reduced == token:
            return token
        token = reduced


def normalize(text):
    """Tokenize and lemmatize ``text``."""
    return [lemmatize(tok) for tok in tokenize(text)]
