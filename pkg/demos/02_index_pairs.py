"""
Classes of large boxes on the dyadic grid
=========================================

A box of volume above 2^-m is summarized by the grid points it contains on
each axis: a run of s points starting at p. Only a few such classes exist,
and a point set has dispersion at most 2^-m exactly when it meets the grid
cells of all of them.
"""

from dispgen import count_index_pairs, core_box, core_cell, enumerate_index_pairs

for m, d in [(2, 1), (2, 2), (2, 3), (2, 8), (3, 2), (3, 8)]:
    print(f"m={m} d={d}: {count_index_pairs(m, d)} classes")

# the 27 classes for m=2, d=2; every one keeps at least 2 of the 9 grid points
pairs = enumerate_index_pairs(2, 2)
for pair in pairs[:5]:
    print("s =", pair.s, "p =", "(" + ", ".join(map(str, pair.p)) + ")", "->", core_box(pair), "cell size", core_cell(pair).size)
print("smallest cell:", min(core_cell(p).size for p in pairs), "of 9")
