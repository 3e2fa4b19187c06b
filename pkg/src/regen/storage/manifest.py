"""Manifest and share-file formats.

A share file is ``sha256(manifest json)`` (32 bytes) followed by the node id
as a 4-byte little-endian integer and then the payload: every stripe's share
matrix flattened row by row, stripes in order, packed with
:mod:`regen.storage.symbols`.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..errors import CorruptionError
from .symbols import byte_length, bytes_to_symbols, symbols_to_bytes

FORMAT_VERSION = 1
HEADER = struct.Struct("<32sI")


@dataclass
class Manifest:
    format_version: int
    code_kind: str
    q: int
    n: int
    k: int
    d: int
    b: int
    primitive_polynomial: list[int]
    node_exponents: list[int]
    original_length: int
    pad_length: int
    B: int
    stripe_count: int
    content_digest: str

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Manifest":
        data = json.loads(text)
        missing = set(cls.__dataclass_fields__) - set(data)
        if missing:
            raise CorruptionError(f"manifest lacks fields {sorted(missing)}")
        return cls(**{k: data[k] for k in cls.__dataclass_fields__})

    def digest(self) -> bytes:
        return hashlib.sha256(self.to_json().encode()).digest()

    @classmethod
    def load(cls, path: str | os.PathLike) -> "Manifest":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


@dataclass
class ShareFile:
    manifest_digest: bytes
    node_id: int
    symbols: np.ndarray = field(repr=False)

    def to_bytes(self, q: int) -> bytes:
        return HEADER.pack(self.manifest_digest, self.node_id) + symbols_to_bytes(self.symbols, q)

    @classmethod
    def from_bytes(cls, raw: bytes, q: int, count: int) -> "ShareFile":
        if len(raw) < HEADER.size + byte_length(count, q):
            raise CorruptionError(f"share file truncated: {len(raw)} bytes")
        digest, node = HEADER.unpack_from(raw)
        sym = bytes_to_symbols(raw[HEADER.size:], q) if q <= 251 else _u16(raw[HEADER.size:])
        return cls(digest, node, sym[:count])


def _u16(raw: bytes) -> np.ndarray:
    return np.frombuffer(raw, dtype="<u2").astype(np.int64)


def atomic_write(path: str | os.PathLike, data: bytes) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def share_path(directory: str | os.PathLike, node_id: int) -> Path:
    return Path(directory) / f"node_{node_id:04d}.share"


def manifest_path(directory: str | os.PathLike) -> Path:
    return Path(directory) / "manifest.json"
