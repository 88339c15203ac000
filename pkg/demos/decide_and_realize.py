"""
Deciding small degree sequences
===============================

Build a hypergraph, read off its degrees, then ask the library to find a
hypergraph with those degrees from scratch.
"""
from degseq import EdgeSet, degree_sequence, is_realizable, membership, realize

# vertices are 1..d; each edge is a nonempty vertex set
H = EdgeSet.from_vertex_lists(4, [{1, 2}, {2, 3, 4}, {1, 2, 3, 4}, {4}])
b = degree_sequence(H)
print("degrees:", b)

# the constructive route: LP decomposition, then moves that round it
out = realize(b, fallback=True)
print("status:", out.status)
print("witness degrees:", degree_sequence(out.witness))

# a point outside the polytope comes back with a separating direction
res = membership([8, 0, 0, 0])
print("inside?", res.inside, "certificate:", res.certificate.to_dict())

# the exact DP agrees on both
print("dp:", is_realizable(b) is not None, is_realizable([8, 0, 0, 0]) is not None)
