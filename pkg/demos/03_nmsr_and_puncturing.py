# Minimum-storage code with n=6, k=3, d=4 over GF(2) and its punctured
# (5, 2, 3) child.

import time
from itertools import combinations

import numpy as np

from regen import nmsr
from regen.errors import CosetCollision

p = nmsr.validate_params(6, 3, 2, 18)
print(p)
print(nmsr.metrics(p))

code = nmsr.NmsrCode(p)
data = np.random.default_rng(3).integers(0, 2, p.B)
shares = code.encode(data)

t0 = time.perf_counter()
ok = all(np.array_equal(code.reconstruct([shares[j - 1] for j in s]), data)
         for s in combinations(range(1, 7), 3))
print("all 20 reconstructions:", ok, f"{time.perf_counter() - t0:.2f}s")

packets = [code.repair_helper(shares[h - 1], 1) for h in (2, 3, 5, 6)]
print("repair of node 1:", code.repair_assemble(packets).payload == shares[0].payload)

# two indices in one cyclotomic coset: the Stein system turns singular
bad = nmsr.NmsrParams(6, 3, 2, 18, (0, 1, 2, 5, 7, 9))
bad_code = nmsr.NmsrCode(bad, strict=False)
bs = bad_code.encode(data)
try:
    bad_code.reconstruct(bs[:3])
except CosetCollision as exc:
    print("collision:", exc)

child = nmsr.puncture(p)
print("punctured: n=%d k=%d d=%d B=%d, zero-forced parent node %d"
      % (child.n, child.k, child.d, child.B, child.removed))
print(child.metrics())
f = np.random.default_rng(4).integers(0, 2, child.B)
cs = child.encode(f)
print("child reconstruct from 2,5:", np.array_equal(child.reconstruct([cs[1], cs[4]]), f))
