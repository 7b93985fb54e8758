"""
Universal sets
==============

A word set is (n, k, b)-universal when every choice of k positions shows all
b^k patterns. Greedy derandomization builds them far below the size of the
full cube, and two alphabet tricks turn one universal set into another.
"""

from dispgen import UniversalSpec, build_universal, is_universal
from dispgen.universal import group_digits, reduce_alphabet

spec = UniversalSpec(n=10, k=3, b=2)
t = build_universal(spec)
print(f"(10,3,2)-universal with {len(t)} words instead of {2**10}")

# the composed route solves on k^2 positions and stretches with a splitter
t2 = build_universal(UniversalSpec(20, 2, 3), strategy="splitter_composed")
print("(20,2,3) via splitter:", len(t2), "words, universal:", is_universal(t2, UniversalSpec(20, 2, 3)))

# dropping the top symbol keeps universality over the smaller alphabet
r = reduce_alphabet(t2)
print("after reduce_alphabet:", r.b, "symbols, universal:", is_universal(r, UniversalSpec(20, 2, 2)))

# reading bit pairs as base-4 digits
g = group_digits(build_universal(UniversalSpec(8, 4, 2)), 2)
print("grouped:", g.n, "positions over", g.b, "symbols, universal:", is_universal(g, UniversalSpec(4, 2, 4)))
