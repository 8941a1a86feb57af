import numpy as np
import pytest
from hypothesis import given, strategies as st

from softskill.embed import mean_embedding
from softskill.errors import ConfigurationError
from softskill.matcher import Snippet
from softskill.represent import RepresentationMode as Mode, RepresentedInput, represent


def test_masked_dedicated_example(dedicated_snippet):
    x = represent(dedicated_snippet, Mode.MASKED)
    assert " ".join(x.tokens) == "bar and kitchen business seek a xxx xxx who want to be"
    assert x.skill_vector is None


def test_tagged_dedicated_example(dedicated_snippet):
    x = represent(dedicated_snippet, "tagged")
    assert " ".join(x.tokens) == "bar and kitchen business seek a <begin> dedicated person <end> who want to be"


def test_unmodified_is_identity(dedicated_snippet):
    x = represent(dedicated_snippet, Mode.UNMODIFIED)
    assert x.tokens == dedicated_snippet.left + dedicated_snippet.skill + dedicated_snippet.right


def test_masked_with_embedding(dedicated_snippet, tiny_table):
    x = represent(dedicated_snippet, Mode.MASKED_WITH_EMBEDDING, tiny_table)
    assert x.tokens == represent(dedicated_snippet, Mode.MASKED).tokens
    np.testing.assert_array_equal(x.skill_vector, mean_embedding(dedicated_snippet.skill, tiny_table))


def test_masked_with_embedding_needs_table(dedicated_snippet):
    with pytest.raises(ConfigurationError):
        represent(dedicated_snippet, Mode.MASKED_WITH_EMBEDDING)


def test_unknown_mode():
    with pytest.raises(ConfigurationError):
        Mode.parse("bogus")


def test_record_round_trip(dedicated_snippet, tiny_table):
    x = represent(dedicated_snippet, Mode.MASKED_WITH_EMBEDDING, tiny_table, label=1)
    y = RepresentedInput.from_record(x.to_record())
    assert y.tokens == x.tokens and y.mode is x.mode and y.label == 1
    np.testing.assert_array_equal(y.skill_vector, x.skill_vector)


ctx = st.lists(st.sampled_from(["c1", "c2", "c3"]), max_size=10).map(tuple)
skill = st.lists(st.sampled_from(["s1", "s2"]), min_size=1, max_size=12).map(tuple)


@given(ctx, skill, ctx)
def test_representation_invariants(left, sk, right):
    snip = Snippet(left, sk, right, 0)
    plain = represent(snip, Mode.UNMODIFIED).tokens
    masked = represent(snip, Mode.MASKED).tokens
    tagged = represent(snip, Mode.TAGGED).tokens
    assert len(masked) == len(plain)
    assert len(tagged) == len(plain) + 2
    assert tagged.count("<begin>") == 1 and tagged.count("<end>") == 1
    b, e = tagged.index("<begin>"), tagged.index("<end>")
    assert tagged[b + 1:e] == sk
    assert masked[len(left):len(left) + len(sk)] == ("xxx",) * len(sk)
    assert masked.count("xxx") == len(sk)
    assert not set(sk) & set(masked)
