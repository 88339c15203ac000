"""
A lattice point of the polytope that is not a degree sequence
=============================================================

Columns of weight 2 and 4 over 8 rows give a face whose only 0/1 points are
the rows themselves, and no subset of rows hits the half-sum point.
"""
from degseq import build_spec, emit_certificate

spec = build_spec(8, (2, 4))
print("columns:", spec.d)

cert = emit_certificate(spec)
print("span lemma holds:", cert.span_lemma.holds, "from", cert.span_lemma.candidates, "candidates")
print("survivors:", cert.span_lemma.survivors)
print("no subset hits b:", cert.face_nonrealizable, "of", cert.subsets)
print("rank:", cert.rank)
print("conclusion:", cert.conclusion)
