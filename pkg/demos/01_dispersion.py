"""
Measuring dispersion exactly
============================

The dispersion of a point set is the volume of the largest open box that
contains none of the points. Coordinates here are exact dyadic rationals.
"""

from fractions import Fraction
import itertools

import numpy as np

from dispgen import GridPointSet, UnitPointSet, VerifyMode, dispersion_lower_bound, exact_dispersion

# one point in the middle of the square leaves half of it empty
mid = UnitPointSet.from_rationals([("1/2", "1/2")])
res = exact_dispersion(mid)
print("midpoint:", res.volume, "witness", res.witness)

# the full 3x3 grid of quarters: every empty box has volume at most 1/4
grid = GridPointSet(list(itertools.product(range(1, 4), repeat=2)), m=2)
print("3x3 grid:", exact_dispersion(grid).volume)

# in higher dimension the exact search gets expensive; the randomized
# lower bound always returns a genuinely empty box
rng = np.random.default_rng(0)
cloud = GridPointSet(rng.integers(1, 8, size=(40, 5)), m=3)
lb = dispersion_lower_bound(cloud, VerifyMode("sampled", seed=0, sample_count=200))
print("40 random points in 5d: dispersion >=", lb.volume, "=", float(lb.volume))
print("exact (5d, allowed explicitly):", exact_dispersion(cloud, max_dim=5).volume)
assert lb.volume <= exact_dispersion(cloud, max_dim=5).volume
print("ratio to 1/4:", lb.volume / Fraction(1, 4))
