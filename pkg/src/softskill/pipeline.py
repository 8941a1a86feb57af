"""Composable steps behind the command-line interface."""

import logging

from .corpus import ingest_corpus
from .errors import ConfigurationError
from .matcher import DEFAULT_WINDOW, Snippet, build_index, snippets_from_tokens
from .model import predict_proba
from .preprocess import RESERVED_TOKENS, normalize
from .represent import RepresentationMode, RepresentedInput, parse_label, represent

log = logging.getLogger(__name__)


def match_units(units, lexicon, window=DEFAULT_WINDOW):
    """Snippets for every match in ``(source_id, text)`` units.

    Reserved tokens (``xxx``, ``<begin>``, ``<end>``) occurring in raw text
    are dropped before matching so they cannot be confused with markup.
    """
    index = build_index(lexicon)
    dropped = 0
    for source_id, text in units:
        tokens = normalize(text)
        clean = [t for t in tokens if t not in RESERVED_TOKENS]
        dropped += len(tokens) - len(clean)
        yield from snippets_from_tokens(clean, index, window, source_id)
    if dropped:
        log.warning("dropped %d reserved token(s) found in raw text", dropped)


def match_corpus(path, lexicon, window=DEFAULT_WINDOW, text_column=None):
    return list(match_units(ingest_corpus(path, text_column), lexicon, window))


def record_to_input(rec, mode, embeddings=None):
    """Turn a JSONL record into a :class:`RepresentedInput` of ``mode``.

    Records carrying ``tokens`` are already represented; records carrying
    ``skill`` are snippets and get represented here.
    """
    mode = RepresentationMode.parse(mode)
    if "tokens" in rec:
        x = RepresentedInput.from_record(rec)
        if x.mode is not mode:
            raise ConfigurationError(f"record has mode {x.mode.value}, expected {mode.value}")
        if mode is RepresentationMode.MASKED_WITH_EMBEDDING and x.skill_vector is None:
            raise ConfigurationError("masked-embed record lacks a skill vector")
        return x
    return represent(Snippet.from_record(rec), mode, embeddings, label=parse_label(rec.get("label")))


def score_snippets(snippets, model, embeddings=None):
    if model.mode is RepresentationMode.MASKED_WITH_EMBEDDING and embeddings is None:
        raise ConfigurationError("this model needs --embeddings to build skill vectors")
    inputs = [represent(s, model.mode, embeddings) for s in snippets]
    return predict_proba(model, inputs) if inputs else []


def disambiguate(snippets, model, threshold, embeddings=None, lexicon=None):
    """Per-match records with the positive probability and a keep/drop decision."""
    scores = score_snippets(snippets, model, embeddings)
    out = []
    for snip, p in zip(snippets, scores):
        rec = snip.to_record(lexicon)
        rec["probability_positive"] = float(p)
        rec["keep"] = bool(p >= threshold)
        out.append(rec)
    return out
