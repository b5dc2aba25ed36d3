"""
Modal intervals and zero-one losses
===================================

The modal interval of half-length c maximizes coverage among windows of
length 2c. For count data it is encoded by its lower endpoint and elicited
by the k-zero-one loss; for continuous data by its midpoint and the
c-zero-one loss.
"""
from ivscore import DiscreteDist, PiecewiseUniformDist, mi, mi_lower_discrete, mi_mid_continuous
from ivscore.lab import Functional, consistency_check, random_discrete_laws, random_pw_uniform_laws
from ivscore.scoring import CZeroOne, KZeroOne

G = DiscreteDist([0, 1, 2, 3], [0.1, 0.4, 0.4, 0.1])
for k in (0, 1, 2):
    print(f"lower endpoints of most probable windows of width {k}:", mi_lower_discrete(G, k))

pyramid = PiecewiseUniformDist([0, 0.5, 0.75, 1.25, 1.5, 2], [0.1, 0.15, 0.5, 0.15, 0.1])
for c in (0.1, 0.25, 0.5):
    print(f"c={c}: midpoints {[m.to_list() for m in mi_mid_continuous(pyramid, c)]}, coverage {mi(pyramid, c).coverage:.3f}")

print("k-zero-one vs lower endpoint:",
      consistency_check(Functional("lower", 1), KZeroOne(1), random_discrete_laws(100, seed=1)).verdict)
print("c-zero-one vs midpoint:",
      consistency_check(Functional("midpoint", 0.25), CZeroOne(0.25), random_pw_uniform_laws(20, seed=1)).verdict)
