"""Line-delimited JSON with an optional leading provenance record.

Writers may put ``{"_meta": {...}}`` on the first line; readers skip it.
"""

import json


def dumps(record):
    return json.dumps(record, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def write_jsonl(path, records, meta=None):
    with open(path, "w", encoding="utf-8") as fh:
        if meta is not None:
            fh.write(dumps({"_meta": meta}) + "\n")
        for rec in records:
            fh.write(dumps(rec) + "\n")


def read_jsonl(path):
    from .errors import ParseError

    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(exc.msg, line=lineno, path=str(path)) from None
            if isinstance(rec, dict) and "_meta" in rec:
                continue
            records.append(rec)
    return records
