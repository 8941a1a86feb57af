"""Checkpoint files.

Byte layout (all integers little-endian)::

    offset  size  content
    0       8     magic b"SSKCKPT\\0"
    8       4     uint32 format version (currently 1)
    12      8     uint64 header length N
    20      N     UTF-8 JSON header, keys sorted
    20+N    ...   tensor payloads, float64 little-endian, C order, back to back
    end-32  32    SHA-256 of every preceding byte

The header records ``kind``, ``mode``, ``hyper``, ``vocab``, ``meta`` and a
``tensors`` list of ``{name, shape, offset, nbytes}`` where ``offset`` is
relative to the start of the payload section. Writing is deterministic, so
equal models give byte-identical files.
"""

import hashlib
import json
import os
import struct

import numpy as np

from ..errors import CheckpointError
from ..represent import RepresentationMode
from .network import ClassifierModel, ModelKind, expected_shapes

MAGIC = b"SSKCKPT\x00"
VERSION = 1
_PREFIX = struct.Struct("<8sIQ")
_DTYPE = np.dtype("<f8")


def _to_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def to_bytes(model):
    tensors, chunks, offset = [], [], 0
    for name in sorted(model.params):
        arr = np.ascontiguousarray(model.params[name], dtype=_DTYPE)
        data = arr.tobytes()
        tensors.append({"name": name, "shape": list(arr.shape), "offset": offset, "nbytes": len(data)})
        chunks.append(data)
        offset += len(data)
    header = {
        "format_version": VERSION,
        "kind": model.kind.value,
        "mode": model.mode.value,
        "dim": model.dim,
        "vocab_size": len(model.vocab),
        "hyper": model.hyper,
        "meta": model.meta,
        "vocab": model.vocab,
        "tensors": tensors,
    }
    head = _to_json(header).encode("utf-8")
    body = _PREFIX.pack(MAGIC, VERSION, len(head)) + head + b"".join(chunks)
    return body + hashlib.sha256(body).digest()


def from_bytes(blob):
    if len(blob) < _PREFIX.size + 32:
        raise CheckpointError("checkpoint too short")
    body, digest = blob[:-32], blob[-32:]
    magic, version, head_len = _PREFIX.unpack_from(body)
    if magic != MAGIC:
        raise CheckpointError("not a checkpoint file (bad magic)")
    if version != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    if hashlib.sha256(body).digest() != digest:
        raise CheckpointError("checksum mismatch; file truncated or corrupt")
    start = _PREFIX.size
    try:
        header = json.loads(body[start:start + head_len].decode("utf-8"))
        kind = ModelKind.parse(header["kind"])
        mode = RepresentationMode.parse(header["mode"])
        vocab, hyper = header["vocab"], header["hyper"]
    except (ValueError, KeyError) as exc:
        raise CheckpointError(f"bad checkpoint header: {exc}") from None
    payload = body[start + head_len:]
    shapes = expected_shapes(kind, hyper, len(vocab))
    params = {}
    for t in header["tensors"]:
        end = t["offset"] + t["nbytes"]
        if end > len(payload):
            raise CheckpointError(f"tensor {t['name']} runs past end of file")
        arr = np.frombuffer(payload[t["offset"]:end], dtype=_DTYPE)
        shape = tuple(t["shape"])
        if arr.size != int(np.prod(shape)):
            raise CheckpointError(f"tensor {t['name']} has {arr.size} values for shape {shape}")
        params[t["name"]] = arr.reshape(shape).astype(np.float64)
    if {k: v.shape for k, v in params.items()} != shapes:
        raise CheckpointError("tensor names or shapes do not match the recorded architecture")
    return ClassifierModel(kind, mode, list(vocab), hyper, params, header.get("meta", {}))


def save_model(model, path):
    blob = to_bytes(model)
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(blob)
    os.replace(tmp, path)


def load_model(path):
    with open(path, "rb") as fh:
        return from_bytes(fh.read())
