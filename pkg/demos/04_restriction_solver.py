"""
Solving k-restriction problems
==============================

Each demand set lists acceptable patterns on k positions. A solution is a
list of words such that for every k positions and every demand set some word
shows an acceptable pattern there. The greedy solver fixes one symbol at a
time by conditional expectations and never exceeds the union-bound size.
"""

import itertools

from dispgen import RestrictionProblem, RestrictionSet, solve_greedy, union_bound_size, verify_solution

# demand: on every pair of positions, see two equal symbols and two different ones
b, k, n = 3, 2, 12
equal = RestrictionSet.from_predicate(k, b, lambda x: x[0] == x[1])
unequal = RestrictionSet.from_predicate(k, b, lambda x: x[0] != x[1])
problem = RestrictionProblem(b, k, n, [equal, unequal])
print(problem, "permutation invariant:", problem.is_permutation_invariant())

sol = solve_greedy(problem)
print("greedy:", len(sol), "words; union bound:", union_bound_size(problem))
print("uncovered constraints after each word:", sol.history)
print("verified:", verify_solution(sol.words, problem))
for w in sol.words:
    print("  ", "".join(map(str, w)))

# boxes are stored implicitly, so large alphabets stay cheap
boxes = [RestrictionSet.box(lo, hi, 5) for lo, hi in [((0, 0), (1, 1)), ((3, 3), (4, 4)), ((0, 3), (1, 4))]]
boxes += [cs.permuted((1, 0)) for cs in boxes]
p2 = RestrictionProblem(5, 2, 30, boxes)
print("box system on 30 positions:", len(solve_greedy(p2)), "words")
