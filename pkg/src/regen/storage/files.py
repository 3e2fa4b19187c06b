"""Encode a file into shares on disk, repair a lost share, and reconstruct the file."""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..errors import CorruptionError, ParameterError
from ..linalg import GfMatrix
from ..shares import NodeShare
from .codecs import Codec, build_codec
from .manifest import FORMAT_VERSION, Manifest, ShareFile, atomic_write, manifest_path, share_path
from .symbols import bytes_to_symbols, symbols_to_bytes


@dataclass(frozen=True)
class LedgerEntry:
    operation: str
    nodes: tuple[int, ...]
    symbols: int


@dataclass
class BandwidthLedger:
    """Symbols moved between nodes, one entry per repair or reconstruction."""

    entries: list[LedgerEntry] = field(default_factory=list)

    def record(self, operation: str, nodes: Iterable[int], symbols: int) -> LedgerEntry:
        entry = LedgerEntry(operation, tuple(nodes), int(symbols))
        self.entries.append(entry)
        return entry

    def total(self, operation: str | None = None) -> int:
        return sum(e.symbols for e in self.entries if operation is None or e.operation == operation)

    def count(self, operation: str) -> int:
        return sum(1 for e in self.entries if e.operation == operation)


def split_stripes(symbols: np.ndarray, B: int) -> tuple[np.ndarray, int]:
    """Zero-pad to a positive multiple of ``B``; returns ``(stripes x B array, pad)``."""
    stripes = max(1, -(-symbols.size // B))
    pad = stripes * B - symbols.size
    padded = np.concatenate([symbols, np.zeros(pad, dtype=np.int64)])
    return padded.reshape(stripes, B), pad


def codec_from_manifest(man: Manifest) -> Codec:
    codec = build_codec(man.code_kind, man.n, man.k, man.d, man.q, man.b)
    if list(codec.poly) != man.primitive_polynomial or list(codec.exponents) != man.node_exponents:
        raise CorruptionError("manifest polynomial/exponents differ from the ones derived from its parameters")
    if codec.B != man.B:
        raise CorruptionError(f"manifest B={man.B} but parameters give {codec.B}")
    return codec


def _share_symbols(shares: Sequence[NodeShare]) -> np.ndarray:
    return np.concatenate([s.payload.array.reshape(-1) for s in shares])


def cmd_encode(input_path: str | os.PathLike, kind: str, n: int, k: int, d: int | None, q: int, b: int,
               out_dir: str | os.PathLike) -> tuple[Manifest, list[Path]]:
    data = Path(input_path).read_bytes()
    codec = build_codec(kind, n, k, d, q, b)
    symbols = bytes_to_symbols(data, q)
    stripes, pad = split_stripes(symbols, codec.B)
    man = Manifest(
        format_version=FORMAT_VERSION, code_kind=codec.kind, q=q, n=codec.n, k=codec.k, d=codec.d, b=b,
        primitive_polynomial=list(codec.poly), node_exponents=list(codec.exponents),
        original_length=len(data), pad_length=int(pad), B=codec.B, stripe_count=len(stripes),
        content_digest=hashlib.sha256(data).hexdigest(),
    )
    per_node: list[list[NodeShare]] = [[] for _ in range(codec.n)]
    for stripe in stripes:
        for share in codec.encode(stripe):
            per_node[share.node_id - 1].append(share)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    digest = man.digest()
    paths = []
    for j, shares in enumerate(per_node, start=1):
        path = share_path(out, j)
        atomic_write(path, ShareFile(digest, j, _share_symbols(shares)).to_bytes(q))
        paths.append(path)
    atomic_write(manifest_path(out), man.to_json().encode())
    return man, paths


def load_shares(man: Manifest, codec: Codec, node_id: int, shares_dir: str | os.PathLike) -> list[NodeShare]:
    path = share_path(shares_dir, node_id)
    if not path.exists():
        raise FileNotFoundError(f"missing share for node {node_id}: {path}")
    count = man.stripe_count * codec.alpha
    sf = ShareFile.from_bytes(path.read_bytes(), man.q, count)
    if sf.manifest_digest != man.digest():
        raise CorruptionError(f"share {path} belongs to a different manifest")
    if sf.node_id != node_id:
        raise CorruptionError(f"share {path} claims node {sf.node_id}")
    mats = sf.symbols.reshape(man.stripe_count, *codec.share_shape)
    return [NodeShare(node_id, GfMatrix(mat, man.q)) for mat in mats]


def cmd_repair(manifest: str | os.PathLike, failed_node: int, helper_ids: Sequence[int],
               shares_dir: str | os.PathLike, out_dir: str | os.PathLike | None = None,
               ledger: BandwidthLedger | None = None) -> tuple[Path, LedgerEntry]:
    """Rebuild ``failed_node``'s share file from ``d`` helpers."""
    man = Manifest.load(manifest)
    codec = codec_from_manifest(man)
    helpers = sorted(set(helper_ids))
    if len(helpers) != len(helper_ids):
        raise ParameterError(f"duplicate helper ids in {list(helper_ids)}")
    if failed_node in helpers:
        raise ParameterError(f"failed node {failed_node} cannot help repair itself")
    if len(helpers) != codec.d:
        raise ParameterError(f"repair needs exactly d={codec.d} helpers, got {len(helpers)}")
    if not 1 <= failed_node <= codec.n or any(not 1 <= h <= codec.n for h in helpers):
        raise ParameterError(f"node ids must lie in 1..{codec.n}")
    helper_shares = {h: load_shares(man, codec, h, shares_dir) for h in helpers}
    repaired, moved = [], 0
    for s in range(man.stripe_count):
        packets = [codec.repair_helper(helper_shares[h][s], failed_node) for h in helpers]
        moved += sum(pk.symbols for pk in packets)
        repaired.append(codec.repair_assemble(packets))
    ledger = ledger if ledger is not None else BandwidthLedger()
    entry = ledger.record("repair", [failed_node, *helpers], moved)
    target = share_path(out_dir if out_dir is not None else shares_dir, failed_node)
    target.parent.mkdir(parents=True, exist_ok=True)
    atomic_write(target, ShareFile(man.digest(), failed_node, _share_symbols(repaired)).to_bytes(man.q))
    return target, entry


def cmd_reconstruct(manifest: str | os.PathLike, node_ids: Sequence[int], shares_dir: str | os.PathLike,
                    out_path: str | os.PathLike, ledger: BandwidthLedger | None = None) -> bytes:
    """Rebuild the original file from ``k`` nodes and check it against the manifest digest."""
    man = Manifest.load(manifest)
    codec = codec_from_manifest(man)
    nodes = sorted(set(node_ids))
    if len(nodes) != len(node_ids):
        raise ParameterError(f"duplicate node ids in {list(node_ids)}")
    if len(nodes) != codec.k:
        raise ParameterError(f"reconstruction needs exactly k={codec.k} nodes, got {len(nodes)}")
    loaded = {j: load_shares(man, codec, j, shares_dir) for j in nodes}
    parts = [codec.reconstruct([loaded[j][s] for j in nodes]) for s in range(man.stripe_count)]
    if ledger is not None:
        ledger.record("reconstruct", nodes, man.stripe_count * codec.k * codec.alpha)
    symbols = np.concatenate(parts)
    symbols = symbols[:symbols.size - man.pad_length]
    data = symbols_to_bytes(symbols, man.q)[:man.original_length]
    if hashlib.sha256(data).hexdigest() != man.content_digest:
        raise CorruptionError("reconstructed content does not match the manifest digest")
    atomic_write(out_path, data)
    return data
