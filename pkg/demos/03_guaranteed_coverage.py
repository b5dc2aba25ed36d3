"""
Guaranteed coverage intervals along a mixture path
==================================================

F0 is uniform on [0, 1]; F1 keeps 80% of its mass on [0, 0.8] and moves the
rest to [2, 3]. Both have [0, 0.8] as a guaranteed coverage interval. The
window [0.1, 1] over-covers under F0 and under-covers under F1, so its
coverage is exactly 0.8 for the half-half mixture, where it becomes a
guaranteed coverage interval that neither endpoint law has.
"""
from ivscore import coverage, gci, mix
from ivscore.lab import Functional, cxls_check, fixture_gci_cxls

alpha = 0.2
fx = fixture_gci_cxls(alpha)
print("shared member:", fx.shared.to_list(),
      gci(fx.F0, alpha).contains(fx.shared), gci(fx.F1, alpha).contains(fx.shared))
for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
    F = mix([fx.F0, fx.F1], [1 - lam, lam]) if 0 < lam < 1 else (fx.F0 if lam == 0 else fx.F1)
    print(f"lambda={lam:.2f}: coverage of {fx.witness.to_list()} = {coverage(F, fx.witness):.3f}",
          "member" if gci(F, alpha).contains(fx.witness) else "")

r = cxls_check(Functional("gci", alpha), fx.F0, fx.F1, probes=[fx.witness])
print("CxLS*:", r.details["cxls_star"])
print("violation at the crossing:", [w for w in r.witnesses if w["lambda"] == 0.5 and w["report"] == fx.witness.to_list()])
