"""
How often does the constructive route give up?
==============================================

Sample lattice points near the center of the polytope and count how many
inside points the moves fail to round.  Small counts keep this quick.
"""
from degseq.experiments import RunConfig, public, sample_report

for d in (8, 10):
    rep = public(sample_report(d, 40, RunConfig(seed=1)))
    c = rep["counts"]
    print(d, "realized", c["realized"], "undecided", c["undecided"], "outside", c["outside"],
          "share", rep["undecided_among_inside_float"], "reference", rep["reference_float"])
