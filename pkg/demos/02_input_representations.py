"""
Four ways to show a skill to the classifier
===========================================

The same snippet rendered as unmodified text, with the skill masked, masked
plus the skill's mean word vector, and with the skill tagged.
"""
from pathlib import Path

from softskill import load_embeddings, load_lexicon, represent
from softskill.pipeline import match_units
from softskill.represent import RepresentationMode

DATA = Path(__file__).resolve().parent.parent / "data"

lexicon = load_lexicon(DATA / "lexicon.tsv")
table = load_embeddings(DATA / "vectors16.txt", 16)
(snippet,) = match_units([("ex:0", "bar and kitchen business seek a dedicated person who want to be")], lexicon)

for mode in RepresentationMode:
    x = represent(snippet, mode, table)
    print(f"{mode.value:>13}: {' '.join(x.tokens)}")

# Only the masked-embed representation carries a skill vector: the mean of
# the skill's word vectors, fed to the classifier's last layer.
x = represent(snippet, RepresentationMode.MASKED_WITH_EMBEDDING, table)
print(x.skill_vector.round(3))
