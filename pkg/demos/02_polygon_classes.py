"""The integrable limit: invariant polygons and their arithmetic.

The limiting flow conserves H(x,y) = P(x) + P(y), with P the piecewise-
affine square.  Level sets are convex polygons; those through lattice
points (levels that are sums of two squares, the "critical numbers") cut
the plane into polygon classes, each with a vertex list and a lattice
constant q(e) that governs the perturbed return dynamics.
"""

from fractions import Fraction

import lattice_rotor as lr

print("critical numbers up to 40:", lr.critical_numbers_up_to(40))
print("count up to 10^4:", lr.count_E(10**4), "(thins like x/sqrt(log x))\n")

for e in (9, 10, 49, 52):
    cls = lr.vertex_list(e)
    print(f"class e={e:3d}: vertex list {cls.vertex_list}, q(e) = {cls.q}, "
          f"coprimality {'ok' if cls.coprimality_ok else 'VIOLATED'}")
print()

alpha = Fraction(19, 2)
poly = lr.trace_polygon(alpha)
print(f"level {alpha}: {poly.side_count} sides; first vertices:")
for v in poly.vertices[:5]:
    print(f"   ({float(v[0]):.3f}, {float(v[1]):.3f})")
print("every vertex satisfies H = level exactly:",
      all(lr.eval_hamiltonian(*v) == alpha for v in poly.vertices))

print("\nflow period: closed formula == traversal of the traced polygon")
print(f"  T({alpha}) = {lr.period_T(alpha)} == {lr.traversal_period(alpha)}")
print(f"  T -> pi at infinity: T(10^6 + 0.5) = {lr.period_T_float(1e6 + 0.5):.8f}")

print("\ntwist of the conjugate cylinder map (the square/non-square dichotomy):")
for e in (40000, 40309):
    print(f"  K({e}) = {float(lr.twist_K(e)):+.4f}")
