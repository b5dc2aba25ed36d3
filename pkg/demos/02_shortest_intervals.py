"""
Shortest intervals cannot be elicited
=====================================

Two piecewise-uniform laws have shortest 80% intervals [0, 1] and [0, 2].
Every proper mixture of them has shortest interval [0, 2], so the level sets
of the functional are not convex and no scoring function is strictly
consistent for it. The interval score, tailored to equal-tailed intervals,
prefers a different report.
"""
import numpy as np

from ivscore import Interval, Winkler, mix, si
from ivscore.lab import (
    Functional,
    condition1_instance,
    consistency_check,
    cxls_check,
    fixture_example_discrete,
    fixture_example_uniform,
    prop2_witness_check,
    dilated_pair,
)

alpha = 0.2
F0, F1 = fixture_example_uniform(alpha)
print("SI(F0) =", si(F0, alpha).intervals()[0].to_list(), " SI(F1) =", si(F1, alpha).intervals()[0].to_list())
for lam in (0.01, 0.5, 0.99):
    print(f"  lambda={lam}: SI(F_lambda) =", si(mix([F0, F1], [1 - lam, lam]), alpha).intervals()[0].to_list())

T = Functional("si", alpha)
rep = prop2_witness_check(T, F0, F1, Interval(0, 1), Interval(0, 2))
print("witness conditions on 99 mixture weights:", rep.verdict)

cons = consistency_check(T, Winkler(alpha), [("F0", F0), ("F1", F1)])
print("is the interval score consistent for SI?", cons.verdict)
for w in cons.witnesses:
    print(f"  {w['distribution']}: {w['report']} misses the minimum by {w['gap']:.3f}")

# the same failure from a law with a gap right of its shortest interval, and a dilation of it
inst = condition1_instance(alpha, b=1.0, eps=0.5)
G0, G1, t0, t1 = dilated_pair(inst)
print("gap construction:", prop2_witness_check(T, G0, G1, t0, t1).verdict,
      "with t0 =", t0.to_list(), "t1 =", t1.to_list())

# discrete laws: level sets stay convex but the stronger property fails
D0, D1 = fixture_example_discrete()
r = cxls_check(Functional("si", 0.25), D0, D1)
print("discrete pair: CxLS", r.details["cxls"], "/ CxLS*", r.details["cxls_star"])
for t in r.lambda_trace[9::10]:
    print(f"  lambda={t['lambda']:.2f}: {t['solution']}")
print("modes of the two laws:", int(D0.support[np.argmax(D0.probs)]), int(D1.support[np.argmax(D1.probs)]))
