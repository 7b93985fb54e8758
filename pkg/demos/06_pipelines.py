"""
Building certified low-dispersion point sets
============================================

The condition-S route asks every a_m coordinates to show every grid pattern.
The condition-S' route only asks the set to meet each class of large boxes,
which is a much weaker demand and gives much smaller sets.
"""

from dispgen import PipelineOptions, exact_dispersion, random_baseline, run_algorithm1, run_algorithm2
from dispgen.errors import InfeasibleInstance

for d in (2, 3, 5):
    a = run_algorithm1("1/4", d)
    b = run_algorithm2("1/4", d)
    print(f"d={d}: condition S {len(a.points)} points, condition S' {len(b.points)} points")

run = run_algorithm2("1/4", 8)
print("d=8:", len(run.points), "points, certificate", run.certificate, run.details)
print("exact dispersion:", exact_dispersion(run.points, max_dim=8).volume)

# a random set of comparable reach needs thousands of points and no certificate
print("random baseline at d=8:", len(random_baseline("1/4", 8, seed=0)), "points")

# large d with a reduced arity exercises the splitter route; the output is not certified
big = run_algorithm2("1/4", 1000, PipelineOptions(k_override=2))
print("d=1000 with k=2:", len(big.points), "points,", big.certificate, big.details["route"])

# epsilon 1/5 needs grid order 3, whose class system is out of reach
try:
    run_algorithm2("1/5", 3)
except InfeasibleInstance as exc:
    print("refused:", exc)
