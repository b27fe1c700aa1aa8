"""How the variance of the LCS length grows with the word length.

Replicated scans over a length grid, followed by the log-log power-law
fit.  At production scale (lengths up to a few million, 10^4 replicates)
the fitted exponents for uniform and biased binary letters approach 1,
i.e. the variance grows about linearly; this demo uses a desk-scale grid.
"""

import lcsim as L

GRID = [2000, 4000, 8000, 16_000]
REPS = 400

for probs in [(0.5, 0.5), (0.1, 0.9)]:
    rows = L.variance_scan(GRID, L.DistributionSpec(probs), REPS, L.RngHandle(7))
    print(f"letter probabilities {probs}:")
    print("      n      mean     variance   stderr")
    for n, stats in rows:
        print(f"  {n:6d}  {stats.mean:9.1f}  {stats.variance:9.2f}  {stats.std_error_mean:.3f}")
    fit = L.fit_power_law([(n, s.variance) for n, s in rows])
    print(" ", fit.summary())
    print()
