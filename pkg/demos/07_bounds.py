"""
Known size bounds
=================

How many points are needed for dispersion at most epsilon, and how the
constructions compare.
"""

from dispgen import run_algorithm2, theoretical_bounds

for eps, d in [("1/4", 2), ("1/4", 16), ("1/8", 16), ("1/4", 1000)]:
    rep = theoretical_bounds(eps, d)
    print(f"eps={eps} d={d}: lower {rep.lower_bound}, upper {rep.uv_upper}, sparse grid {rep.sparse_grid}")

rep = theoretical_bounds("1/4", 8)
print("shape of the condition-S' size:", rep.thm44_upper_shape)
print("constructed at d=8:", len(run_algorithm2("1/4", 8).points), "points")
