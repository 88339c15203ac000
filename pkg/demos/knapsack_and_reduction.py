"""
Counting and hardness through the zonotope
==========================================

Two linear optimizations count knapsack solutions, and a shift turns
3-uniform questions into plain degree-sequence questions.
"""
from itertools import product

from degseq import count_knapsack, is_realizable, is_realizable_3uniform, reduce_3uniform

a, beta = (3, 5, 2, 7), 9
res = count_knapsack(a, beta)
brute = sum(1 for x in product((0, 1), repeat=len(a)) if sum(ai * xi for ai, xi in zip(a, x)) < beta)
print("knapsack count:", res.N, "brute force:", brute)

b = (3, 3, 3, 3)  # the four triples on four vertices
red = reduce_3uniform(b)
print("reduced point:", red.point)
print("3-uniform:", is_realizable_3uniform(b) is not None)
print("reduced realizable:", is_realizable(red.point) is not None)
