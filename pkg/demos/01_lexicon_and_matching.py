"""
Lexicon statistics and phrase matching
======================================

Load a soft-skill lexicon, look at how long its phrases are, and find every
lexicon phrase in a small job-ad corpus. Each match becomes a snippet: the
skill plus up to ten tokens of context on both sides.
"""
from pathlib import Path

from softskill import build_index, compute_stats, find_matches, load_lexicon, normalize
from softskill.corpus import ingest_corpus
from softskill.pipeline import match_units

DATA = Path(__file__).resolve().parent.parent / "data"

lexicon = load_lexicon(DATA / "lexicon.tsv")
stats = compute_stats(lexicon)
print("\n".join(stats.as_lines()))

# Phrases are normalized the same way as corpus text: case-folded, plural
# nouns reduced, punctuation dropped except commas.
print(normalize("Excellent Communication Skills, please!"))

# Matching is leftmost-longest: "dedicated person" wins over "dedicated".
index = build_index(lexicon)
tokens = normalize("Bar and kitchen business seek a dedicated person who want to be")
for m in find_matches(tokens, index):
    print(m, lexicon[m.skill_id].raw_text)

# Whole corpus: one snippet per match.
snippets = list(match_units(ingest_corpus(DATA / "corpus.txt"), lexicon))
print(f"{len(snippets)} matches")
for s in snippets[:5]:
    print(f"{s.source_id:>5}  {' '.join(s.left)} [{' '.join(s.skill)}] {' '.join(s.right)}")
