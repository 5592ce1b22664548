"""On-disk JSON schemas for graph files and K33 length files.

Decoding rejects unknown keys; encoding is canonical (fixed field order,
shortest round-trip float repr) so files round-trip byte for byte.
"""

from __future__ import annotations

import msgspec
import numpy as np


class EdgeRecord(msgspec.Struct, forbid_unknown_fields=True):
    """One weighted edge: endpoints and prescribed length."""

    u: str
    v: str
    length: float


class GraphFile(msgspec.Struct, forbid_unknown_fields=True):
    """A weighted graph as stored on disk."""

    vertices: list[str]
    edges: list[EdgeRecord]


class K33LengthsFile(msgspec.Struct, forbid_unknown_fields=True, omit_defaults=True):
    """K33 lengths by stage name; later stages may be omitted."""

    a: float | None = None
    b: float | None = None
    c: float | None = None
    d: float | None = None
    e: float | None = None
    f: float | None = None
    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None


_GRAPH_DECODER = msgspec.json.Decoder(GraphFile)
_K33_DECODER = msgspec.json.Decoder(K33LengthsFile)
_ENCODER = msgspec.json.Encoder()


def decode_graph_file(raw: bytes | str) -> GraphFile:
    """Decode a graph file, raising msgspec errors on schema violations."""

    return _GRAPH_DECODER.decode(raw)


def decode_k33_file(raw: bytes | str) -> K33LengthsFile:
    """Decode a K33 lengths file."""

    return _K33_DECODER.decode(raw)


def encode_pretty(obj: object) -> bytes:
    """Encode a struct as indented JSON with a trailing newline."""

    return msgspec.json.format(_ENCODER.encode(obj), indent=2) + b"\n"


def _encode_extra(obj: object) -> object:
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise NotImplementedError(f"Cannot encode {type(obj).__name__}")


_REPORT_ENCODER = msgspec.json.Encoder(enc_hook=_encode_extra, order="sorted")


def encode_report(obj: object) -> bytes:
    """Encode a report (dicts, lists, numbers) with sorted keys, indented, newline-terminated."""

    return msgspec.json.format(_REPORT_ENCODER.encode(obj), indent=2) + b"\n"


__all__ = [
    "EdgeRecord",
    "GraphFile",
    "K33LengthsFile",
    "decode_graph_file",
    "decode_k33_file",
    "encode_pretty",
    "encode_report",
]
