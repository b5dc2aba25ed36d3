"""
Equal-tailed intervals of a discrete law
========================================

A four-atom law on {0, 1, 2, 3} has non-unique tail quantiles, so four
intervals qualify as equal-tailed at level 0.2. All four have the same
expected interval score, and brute-force minimization recovers exactly them.
"""
from ivscore import DiscreteDist, Interval, Winkler, coverage, eti, expected_score
from ivscore.lab import ReportGrid, brute_force_minimizers

G = DiscreteDist([0, 1, 2, 3], [0.1, 0.4, 0.4, 0.1])
alpha = 0.2

members = eti(G, alpha).intervals()
print("equal-tailed intervals:", [iv.to_list() for iv in members])

print(f"{'interval':>10} {'coverage':>9} {'E[IS]':>6} {'length':>7}")
for iv in members:
    print(f"{str(iv.to_list()):>10} {coverage(G, iv):>9.2f} {expected_score(G, Winkler(alpha), iv):>6.2f} {iv.length:>7.0f}")

# the interval score cannot tell them apart: every member is a minimizer
grid = ReportGrid.integer_intervals(0, 3)
best = brute_force_minimizers(G, Winkler(alpha), grid)
print("brute-force minimizers:", sorted(iv.to_list() for iv in best))
assert sorted(best) == members

# an interval outside the set scores worse
print("expected interval score of [1, 2] vs [0, 1]:",
      expected_score(G, Winkler(alpha), Interval(1, 2)), expected_score(G, Winkler(alpha), Interval(0, 1)))
