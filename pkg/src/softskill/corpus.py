"""Corpus ingestion: documents to sentence-like units.

Splitting is deliberately simple: units end at ``.``, ``!``, ``?``, newlines
and common list-bullet symbols. Abbreviations and decimals are split too.
"""

import csv
import re
from pathlib import Path

BULLETS = "•◦▪▫●○■□►▶▸‣⁃➢➤✓✔·*"
_SPLIT = re.compile(r"[.!?\n\r" + re.escape(BULLETS) + r"]+")
# a hyphen or dash used as a list marker at the start of a line
_DASH_BULLET = re.compile(r"(?m)^\s*[-\u2013\u2014]\s+")


def split_units(text):
    text = _DASH_BULLET.sub("\n", text)
    return [u.strip() for u in _SPLIT.split(text) if u.strip()]


def ingest_corpus(path, text_column=None):
    """Yield ``(source_id, unit_text)`` with ``source_id`` = ``"<doc>:<unit>"``, both 0-based.

    Plain-text files hold one document per line. ``.csv``/``.tsv`` files (or
    any file when ``text_column`` is given) are read as tables with a header
    row, taking the text from ``text_column`` (default: the first column).
    """
    path = Path(path)
    tabular = text_column is not None or path.suffix.lower() in (".csv", ".tsv")
    with open(path, encoding="utf-8", newline="" if tabular else None) as fh:
        if tabular:
            delim = "\t" if path.suffix.lower() == ".tsv" else ","
            reader = csv.DictReader(fh, delimiter=delim)
            column = text_column or (reader.fieldnames[0] if reader.fieldnames else None)
            if reader.fieldnames and column not in reader.fieldnames:
                raise KeyError(f"column {column!r} not in {reader.fieldnames}")
            docs = (row[column] or "" for row in reader)
        else:
            docs = (line.rstrip("\n") for line in fh)
        for doc_id, doc in enumerate(docs):
            for unit_id, unit in enumerate(split_units(doc)):
                yield f"{doc_id}:{unit_id}", unit
