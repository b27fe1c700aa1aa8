"""Upper bounds on the limiting LCS rate for m random words.

The count F(n, l, k) of words containing a fixed length-l word collapses,
via Stirling asymptotics, to a rate function H_k whose unique root on
[1/k, 1) bounds lim E[LC_n]/n from above.  Everything below is exact
integer counting plus a bisection root-find; no simulation.
"""

import lcsim as L

# Exact counts behind the bound, at toy size: F, its closed-form
# majorant, the aggregate G, and the exhaustive tuple count g.
n, ell, k, m = 6, 3, 2, 2
F = L.count_containing(n, ell, k)
print(f"F({n},{ell},{k})  = {F} words contain a fixed 3-letter word")
print(f"majorant    = {L.count_upper(n, ell, k)} (must dominate F)")
print(f"G           = {L.g_upper_G(n, ell, k, m)} (k^l * F^m)")
print(f"g (exact)   = {L.brute_g(n, ell, k, m)} tuples with LC >= {ell}")

# The rate function and its root for two binary words: the classic
# two-sequence upper bound 0.8666 falls out of the same machinery.
root = L.solve_vk(2, 2)
print(f"\nV_2 (m=2)   = {root.v_k:.6f} "
      f"(residual {root.residual:.1e}, {root.iterations} bisections)")

print("\nbinary alphabet, m = 2..10 (upper computed, lower published):")
for m, upper, lower in L.bounds_table(2, 2, 10):
    print(f"  m={m:2d}  upper={upper:.6f}  lower={lower:.6f}")

print("\nlarger alphabets, three words:")
for k in (3, 4, 8, 20):
    print(f"  k={k:2d}  V_k={L.solve_vk(k, 3).v_k:.6f}")
