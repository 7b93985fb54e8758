"""
Splitters from Reed-Solomon codes
=================================

A family of maps from n positions to k^2 buckets is a splitter when every
k-subset of positions lands injectively under at least one map. Codewords of
a Reed-Solomon code with few symbols give small families, and composing a
short solution with a splitter solves the same problem on many positions.
"""

from dispgen import build_rs_splitter, compose, is_splitter, singleton_problem, solve_greedy, verify_solution

for n, k in [(9, 2), (16, 2), (27, 3), (64, 3), (1000, 2)]:
    fam = build_rs_splitter(n, k, certify=n <= 100)
    print(f"n={n} k={k}: {len(fam)} maps, q={fam.code.q}, message length {fam.code.message_length}")

fam = build_rs_splitter(64, 3)
print("(64,3) family splits every 3-subset:", is_splitter(fam))

# a (9,3,2)-universal set pulled back to 64 positions
core = solve_greedy(singleton_problem(9, 3, 2)).words
big = compose(core, fam)
print(f"{len(core)} words x {len(fam)} maps -> {len(big)} words on 64 positions")
print("universal on 64 positions:", verify_solution(big, singleton_problem(64, 3, 2)))
