"""Soft-skill phrase matching with context-based disambiguation.

Typical flow: load a lexicon, match it against normalized text, cut
snippets around each match, represent them (unmodified, masked,
masked + skill embedding, or tagged), and classify them as describing the
candidate or something else.
"""

__version__ = "0.1.0"

from .embed import EmbeddingTable, load_embeddings, mean_embedding
from .evaluation import (Confusion, EvalReport, calibrate_threshold, evaluate_scores,
                         f1_weighted, filter_report, naive_baseline)
from .lexicon import SkillLexicon, compute_stats, load_lexicon, save_lexicon
from .matcher import Match, Snippet, build_index, extract_snippet, find_matches
from .preprocess import lemmatize, normalize, tokenize
from .represent import RepresentationMode, RepresentedInput, represent
