import hashlib
import json
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from regen.errors import CorruptionError, ParameterError
from regen.storage import build_codec, cmd_encode, cmd_reconstruct, cmd_repair
from regen.storage.files import BandwidthLedger, split_stripes
from regen.storage.manifest import HEADER, Manifest, ShareFile, manifest_path, share_path
from regen.storage.symbols import byte_length, bytes_to_symbols, symbols_to_bytes

DESK = dict(kind="nmbr", n=4, k=2, d=3, q=2, b=4)


def encode(tmp_path, data, **params):
    params = {**DESK, **params}
    tmp_path.mkdir(parents=True, exist_ok=True)
    src = tmp_path / "input.bin"
    src.write_bytes(data)
    out = tmp_path / "shares"
    man, paths = cmd_encode(src, params["kind"], params["n"], params["k"], params["d"], params["q"],
                            params["b"], out)
    return man, paths, out


@settings(max_examples=40)
@given(st.binary(max_size=64), st.sampled_from([2, 257, 65521]))
def test_symbol_round_trip(data, q):
    if q > 2:
        # keep every little-endian pair below q
        data = bytes(v if i % 2 == 0 else min(v, q // 256 - 1) for i, v in enumerate(data))
    sym = bytes_to_symbols(data, q)
    assert symbols_to_bytes(sym, q)[:len(data)] == data
    assert len(symbols_to_bytes(sym, q)) == byte_length(sym.size, q)


def test_symbol_mapping_rules():
    assert bytes_to_symbols(b"\x80\x01", 2).tolist() == [1, 0, 0, 0, 0, 0, 0, 0] + [0] * 7 + [1]
    assert bytes_to_symbols(b"\x00\x02\x04", 5).tolist() == [0, 2, 4]
    with pytest.raises(ValueError, match="pre-map"):
        bytes_to_symbols(b"\x05", 5)
    assert bytes_to_symbols(b"\x00\x01", 257).tolist() == [256]
    assert bytes_to_symbols(b"\x07", 257).tolist() == [7]  # odd length padded
    with pytest.raises(ValueError):
        bytes_to_symbols(b"\x01\x01", 257)  # 257 is not a symbol


def test_split_stripes():
    s, pad = split_stripes(np.zeros(0, dtype=np.int64), 18)
    assert s.shape == (1, 18) and pad == 18
    s, pad = split_stripes(np.ones(36, dtype=np.int64), 18)
    assert s.shape == (2, 18) and pad == 0
    s, pad = split_stripes(np.ones(37, dtype=np.int64), 18)
    assert s.shape == (3, 18) and pad == 17 and s[2, 1:].sum() == 0


def test_empty_file(tmp_path):
    man, paths, out = encode(tmp_path, b"")
    assert man.stripe_count == 1 and man.pad_length == man.B == 18
    codec = build_codec("nmbr", 4, 2, 3, 2, 4)
    for p in paths:
        raw = p.read_bytes()
        assert len(raw) == HEADER.size + byte_length(codec.alpha, 2)
        assert not any(raw[HEADER.size:])
    data = cmd_reconstruct(manifest_path(out), [1, 2], out, tmp_path / "r.bin")
    assert data == b""


def test_file_of_exactly_one_stripe(tmp_path):
    # B = 18 symbols: pick q = 3 so one byte is one symbol
    man, _, _ = encode(tmp_path, bytes([1, 2, 0] * 6), q=3)
    assert man.B == 18 and man.stripe_count == 1 and man.pad_length == 0


def test_manifest_fields_and_share_header(tmp_path):
    data = b"hello regenerating world"
    man, paths, out = encode(tmp_path, data)
    doc = json.loads(manifest_path(out).read_text())
    assert list(doc) == ["format_version", "code_kind", "q", "n", "k", "d", "b", "primitive_polynomial",
                         "node_exponents", "original_length", "pad_length", "B", "stripe_count",
                         "content_digest"]
    assert doc["primitive_polynomial"] == [1, 1, 1]
    assert doc["node_exponents"] == [0, 1, 2, 3]
    assert doc["content_digest"] == hashlib.sha256(data).hexdigest()
    raw = share_path(out, 3).read_bytes()
    digest, node = HEADER.unpack_from(raw)
    assert digest == man.digest() and node == 3
    assert raw[32:36] == (3).to_bytes(4, "little")
    assert Manifest.from_json(manifest_path(out).read_text()) == man


@pytest.mark.parametrize("kind,n,k,d,q,b", [
    ("nmbr", 4, 2, 3, 2, 4), ("nmbr-sys", 4, 2, 3, 2, 6), ("nmsr", 6, 3, None, 2, 18),
    ("nmsr-punct", 5, 2, None, 2, 18), ("nmbr", 4, 2, 2, 257, 2),
])
def test_round_trip_every_subset(tmp_path, kind, n, k, d, q, b):
    rng = np.random.default_rng(0)
    if q == 257:
        data = bytes(x for v in range(0, 256, 3) for x in (v, 0))  # each pair below 257
    else:
        data = rng.integers(0, 256, 1024 if kind.startswith("nmbr") else 120, dtype=np.uint8).tobytes()
    man, _, out = encode(tmp_path, data, kind=kind, n=n, k=k, d=d, q=q, b=b)
    subsets = list(combinations(range(1, n + 1), k))
    for nodes in subsets[:6]:
        assert cmd_reconstruct(manifest_path(out), list(nodes), out, tmp_path / "r.bin") == data


def test_repair_is_byte_identical(tmp_path):
    data = np.random.default_rng(1).integers(0, 256, 1024, dtype=np.uint8).tobytes()
    man, paths, out = encode(tmp_path, data)
    codec = build_codec("nmbr", 4, 2, 3, 2, 4)
    for failed in range(1, 5):
        original = paths[failed - 1].read_bytes()
        helpers = [j for j in range(1, 5) if j != failed]
        ledger = BandwidthLedger()
        path, entry = cmd_repair(manifest_path(out), failed, helpers, out, tmp_path / "rep", ledger)
        assert hashlib.sha256(path.read_bytes()).digest() == hashlib.sha256(original).digest()
        assert entry.symbols == man.stripe_count * codec.d * codec.beta
        assert ledger.total("repair") == entry.symbols


def test_repair_errors(tmp_path):
    man, paths, out = encode(tmp_path, b"abc")
    mp = manifest_path(out)
    with pytest.raises(ParameterError):
        cmd_repair(mp, 1, [1, 2, 3], out)
    with pytest.raises(ParameterError):
        cmd_repair(mp, 1, [2, 3], out)
    paths[1].unlink()
    with pytest.raises(FileNotFoundError):
        cmd_repair(mp, 1, [2, 3, 4], out)


def test_reconstruct_errors_and_tampering(tmp_path):
    data = bytes(range(256)) * 2
    man, paths, out = encode(tmp_path, data)
    mp = manifest_path(out)
    with pytest.raises(ParameterError):
        cmd_reconstruct(mp, [1], out, tmp_path / "r.bin")
    raw = bytearray(paths[0].read_bytes())
    raw[HEADER.size] ^= 0x80  # one flipped symbol
    paths[0].write_bytes(bytes(raw))
    with pytest.raises(CorruptionError, match="digest"):
        cmd_reconstruct(mp, [1, 2], out, tmp_path / "r.bin")
    assert not (tmp_path / "r.bin").exists()
    assert cmd_reconstruct(mp, [2, 3], out, tmp_path / "r.bin") == data


def test_share_from_other_manifest_rejected(tmp_path):
    _, _, out_a = encode(tmp_path / "a", b"first file")
    _, _, out_b = encode(tmp_path / "b", b"second file")
    share_path(out_b, 2).write_bytes(share_path(out_a, 2).read_bytes())
    with pytest.raises(CorruptionError, match="different manifest"):
        cmd_reconstruct(manifest_path(out_b), [1, 2], out_b, tmp_path / "r.bin")


def test_manifest_determinism_check(tmp_path):
    _, _, out = encode(tmp_path, b"xyz")
    mp = manifest_path(out)
    doc = json.loads(mp.read_text())
    doc["node_exponents"] = [0, 1, 3, 2]
    mp.write_text(json.dumps(doc))
    with pytest.raises(CorruptionError):
        cmd_reconstruct(mp, [1, 2], out, tmp_path / "r.bin")


def test_stripe_independence(tmp_path):
    data = np.random.default_rng(2).integers(0, 256, 200, dtype=np.uint8).tobytes()
    man, paths, out = encode(tmp_path, data)
    codec = build_codec("nmbr", 4, 2, 3, 2, 4)
    from regen.storage.files import load_shares
    good = [load_shares(man, codec, j, out) for j in (1, 2)]
    raw = bytearray(paths[0].read_bytes())
    s = 5
    raw[HEADER.size + s * codec.alpha // 8] ^= 0x01  # alpha = 12 bits, stripe 5 starts at bit 60
    paths[0].write_bytes(bytes(raw))
    bad = load_shares(man, codec, 1, out)
    diffs = [t for t in range(man.stripe_count) if bad[t].payload != good[0][t].payload]
    assert diffs == [s]
    for t in range(man.stripe_count):
        same = np.array_equal(codec.reconstruct([bad[t], good[1][t]]), codec.reconstruct([good[0][t], good[1][t]]))
        assert same == (t != s)


def test_encode_is_deterministic(tmp_path):
    data = b"determinism" * 50
    _, p1, o1 = encode(tmp_path / "one", data)
    _, p2, o2 = encode(tmp_path / "two", data)
    assert manifest_path(o1).read_bytes() == manifest_path(o2).read_bytes()
    assert [p.read_bytes() for p in p1] == [p.read_bytes() for p in p2]


def test_parameter_errors_surface_condition(tmp_path):
    with pytest.raises(ParameterError) as ei:
        encode(tmp_path, b"x", n=5, d=4)
    assert ei.value.condition == "A1"
    with pytest.raises(ValueError, match="pre-map"):
        encode(tmp_path, b"\x09", q=3)
