# Extension fields built from companion matrices over GF(2).
#
# Every element of GF(2^m) becomes an m x m binary matrix; multiplying the
# elements is multiplying the matrices.

import numpy as np

from regen.extfield import ExtFieldRep, coset_partition, find_primitive_poly

poly = find_primitive_poly(2, 3)     # ascending coefficients: 1 + x + x^3
rep = ExtFieldRep(2, 3)
print("primitive polynomial", poly)
print("companion matrix P\n", rep.P.array)

# P runs through all 7 nonzero elements before returning to I
for e in range(8):
    print(e, rep.power(e).array.ravel())

# element arithmetic and its matrix image agree
a, b = (1, 1, 0), (0, 1, 1)
ab = rep.mul(a, b)
print("a*b =", ab, rep.theta(ab) == rep.theta(a) @ rep.theta(b))

# q-cyclotomic cosets mod 63: node indices for the NMSR codes come one per coset
table = coset_partition(2, 63)
print(len(table.cosets), "cosets; representatives", table.representatives)
print("coset of 5:", table.coset_of(5))

rng = np.random.default_rng(0)
big = ExtFieldRep(2, 6)
x = tuple(int(v) for v in rng.integers(0, 2, 6))
print("x * x^-1 =", big.mul(x, big.inv(x)))
