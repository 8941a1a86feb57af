"""Classifier input representations of a snippet.

* ``UNMODIFIED``: the snippet tokens as they are.
* ``MASKED``: each skill token replaced by ``xxx``.
* ``MASKED_WITH_EMBEDDING``: masked tokens plus the mean word vector of the
  skill, fed to the classifier's last layer.
* ``TAGGED``: the skill wrapped in ``<begin>`` ... ``<end>``.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .embed import mean_embedding
from .errors import ConfigurationError
from .preprocess import BEGIN, END, MASK

POSITIVE = 1
NEGATIVE = 0
_LABEL_NAMES = {POSITIVE: "positive", NEGATIVE: "negative"}


class RepresentationMode(enum.Enum):
    UNMODIFIED = "unmodified"
    MASKED = "masked"
    MASKED_WITH_EMBEDDING = "masked-embed"
    TAGGED = "tagged"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise ConfigurationError(f"unknown representation mode {value!r} (expected one of {names})") from None


def parse_label(value):
    """Accept 1/0, true/false, or ``positive``/``negative``."""
    if value is None:
        return None
    if isinstance(value, str):
        v = value.strip().lower()
        if v in ("positive", "pos", "+", "1", "true", "candidate"):
            return POSITIVE
        if v in ("negative", "neg", "-", "0", "false", "other"):
            return NEGATIVE
        raise ValueError(f"unrecognised label {value!r}")
    return POSITIVE if int(value) else NEGATIVE


def label_name(label):
    return _LABEL_NAMES[label]


@dataclass(frozen=True, eq=False)
class RepresentedInput:
    tokens: tuple
    mode: RepresentationMode
    skill_vector: object = None
    label: object = None
    skill_id: object = None
    source_id: str = ""

    def to_record(self):
        rec = {"source_id": self.source_id, "skill_id": self.skill_id,
               "mode": self.mode.value, "tokens": list(self.tokens)}
        if self.skill_vector is not None:
            rec["skill_vector"] = [float(v) for v in self.skill_vector]
        if self.label is not None:
            rec["label"] = label_name(self.label)
        return rec

    @classmethod
    def from_record(cls, rec):
        vec = rec.get("skill_vector")
        return cls(
            tokens=tuple(rec["tokens"]),
            mode=RepresentationMode.parse(rec["mode"]),
            skill_vector=None if vec is None else np.asarray(vec, dtype=np.float64),
            label=parse_label(rec.get("label")),
            skill_id=rec.get("skill_id"),
            source_id=str(rec.get("source_id", "")),
        )


def represent(snippet, mode, embeddings=None, label=None):
    mode = RepresentationMode.parse(mode)
    skill_vector = None
    if mode is RepresentationMode.UNMODIFIED:
        middle = snippet.skill
    elif mode is RepresentationMode.TAGGED:
        middle = (BEGIN,) + tuple(snippet.skill) + (END,)
    else:
        middle = (MASK,) * len(snippet.skill)
        if mode is RepresentationMode.MASKED_WITH_EMBEDDING:
            if embeddings is None:
                raise ConfigurationError("masked-embed representation needs an embedding table")
            skill_vector = mean_embedding(snippet.skill, embeddings)
    return RepresentedInput(
        tokens=tuple(snippet.left) + tuple(middle) + tuple(snippet.right),
        mode=mode,
        skill_vector=skill_vector,
        label=label,
        skill_id=snippet.skill_id,
        source_id=snippet.source_id,
    )
