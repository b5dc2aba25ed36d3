"""
Symmetric scores as mixtures of elementary scores
=================================================

A symmetric score for equal-tailed intervals built from step functions
equals a weighted sum of elementary symmetric interval scores. The weights
come from the jumps of the lower-endpoint function. We also check which
scores are translation invariant, positively homogeneous and symmetric.
"""
import numpy as np

from ivscore import EtiFamily, StepFunction, Winkler
from ivscore.lab import cubic_eti_score, score_property_check
from ivscore.scoring import eti_score, induced_measure, mixture_eti_score, symmetric_partner

alpha = 0.2
g1 = StepFunction((0.0, 0.5, 1.25), (1.0, 0.5, 2.0))
g2 = symmetric_partner(2.0, g1, 1.0)
score = EtiFamily(alpha, 2.0, 1.0, g1, g2)
mu = induced_measure(2.0, g1)
print("mixing measure atoms:", mu.atoms)

v = np.linspace(-3, 3, 31)
a, b, y = np.meshgrid(v, v, v, indexing="ij")
keep = a < b
err = np.abs(eti_score(score, (a[keep], b[keep]), y[keep]) - mixture_eti_score(mu, alpha, (a[keep], b[keep]), y[keep]))
print(f"max |score - mixture| on the grid: {err.max():.1e}")

# jumps at negative locations need the signed measure
g1n = StepFunction((-1.0, 0.5), (1.0, 1.0))
s_neg = EtiFamily(alpha, 1.0, 1.0, g1n, symmetric_partner(1.0, g1n, 1.0))
for fold in (True, False):
    m = induced_measure(1.0, g1n, fold=fold)
    e = np.abs(eti_score(s_neg, (a[keep], b[keep]), y[keep]) - mixture_eti_score(m, alpha, (a[keep], b[keep]), y[keep]))
    print(f"negative jumps, {'folded' if fold else 'signed'} measure: max error {e.max():.2f}")

for name, s in (("interval score", Winkler(alpha)), ("cubic g", cubic_eti_score(alpha))):
    verdicts = {p: score_property_check(s, p, trials=10_000, seed=0).verdict for p in ("translation", "homogeneity", "symmetry")}
    print(f"{name}: {verdicts}")
