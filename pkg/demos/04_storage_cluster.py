# Files on disk, a simulated cluster, and the comparison tables.

import tempfile
from pathlib import Path

import numpy as np

from regen.storage import build_codec, cmd_encode, cmd_reconstruct, cmd_repair, cmd_simulate, cmd_tables
from regen.storage import random_script
from regen.storage.files import BandwidthLedger
from regen.storage.manifest import manifest_path, share_path

work = Path(tempfile.mkdtemp())
src = work / "photo.bin"
src.write_bytes(np.random.default_rng(5).integers(0, 256, 4096, dtype=np.uint8).tobytes())

man, paths = cmd_encode(src, "nmbr", 4, 2, 3, 2, 4, work / "shares")
print(man.stripe_count, "stripes of", man.B, "bits; pad", man.pad_length)

lost = share_path(work / "shares", 3)
before = lost.read_bytes()
lost.unlink()
ledger = BandwidthLedger()
cmd_repair(manifest_path(work / "shares"), 3, [1, 2, 4], work / "shares", ledger=ledger)
print("repaired share identical:", lost.read_bytes() == before, "-", ledger.total(), "bits moved")

out = cmd_reconstruct(manifest_path(work / "shares"), [3, 4], work / "shares", work / "back.bin")
print("file restored:", out == src.read_bytes())

codec = build_codec("nmsr", 6, 3, None, 2, 18)
report = cmd_simulate(codec, random_script(6, 3, 4, 20, seed=1), stripes=2, seed=1)
for r in report.results[:6]:
    print(r)
print(report.as_dict()["repair_symbols"], "repair bits,", report.as_dict()["reconstruct_symbols"], "read bits")

print(cmd_tables("table2"))
print(cmd_tables("table4", fmt="csv"))
