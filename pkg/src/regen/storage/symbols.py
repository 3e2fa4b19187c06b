"""Byte <-> symbol mapping for files and share payloads.

* ``q = 2``: eight symbols per byte, most significant bit first.
* ``2 < q <= 251``: one symbol per byte; bytes ``>= q`` are rejected.
* ``q > 251``: one symbol per two bytes, little-endian; values ``>= q`` are
  rejected and an odd trailing byte is padded with zero.
"""

from __future__ import annotations

import numpy as np


def bytes_to_symbols(data: bytes, q: int) -> np.ndarray:
    raw = np.frombuffer(data, dtype=np.uint8)
    if q == 2:
        return np.unpackbits(raw).astype(np.int64)
    if q <= 251:
        sym = raw.astype(np.int64)
    else:
        if raw.size % 2:
            raw = np.concatenate([raw, np.zeros(1, dtype=np.uint8)])
        sym = raw.view("<u2").astype(np.int64)
    if sym.size and sym.max() >= q:
        bad = int(np.flatnonzero(sym >= q)[0])
        raise ValueError(f"symbol {bad} has value {int(sym[bad])} >= q={q}; pre-map the input into [0, {q})")
    return sym


def symbols_to_bytes(symbols, q: int) -> bytes:
    sym = np.asarray(symbols, dtype=np.int64).reshape(-1)
    if q == 2:
        return np.packbits(sym.astype(np.uint8)).tobytes()
    if q <= 251:
        return sym.astype(np.uint8).tobytes()
    return sym.astype("<u2").tobytes()


def byte_length(count: int, q: int) -> int:
    """Bytes needed to store ``count`` symbols."""
    if q == 2:
        return (count + 7) // 8
    return count if q <= 251 else 2 * count
