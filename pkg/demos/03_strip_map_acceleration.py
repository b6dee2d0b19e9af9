"""The strip map: leaping from vertex to vertex in O(1) arithmetic.

Between transition points the fourth iterate is a fixed translation, so
whole polygon sides can be crossed with ceiling arithmetic.  The first
return to the symmetry strip composes one map step with 2k-1 strip hops,
bit-identical to bare iteration and orders of magnitude faster.
"""

import time

import lattice_rotor as lr

lam = lr.RotationParameter(1, 2000)
z = (6365, 6365)
e = lr.class_of_point(z, lam)
print(f"seed {z}, lam = {lam}: class e = {e}")

fast = lr.phi_point(z, lam)
slow = lr.phi_direct(z, lam)
print(f"accelerated return: {fast}")
print(f"direct iteration:   {slow}   (bit-identical: {fast == slow})\n")

orb = lr.return_map_Phi(z, lam)
print(f"return time tau = {orb.tau} (= 1 mod 4), "
      f"{len(orb.vertices) - 1} transition points per quarter turn")
print(f"orbit code sigma = {orb.sigma}")
print(f"fixed point: {orb.is_fixed}, symmetric fixed: {orb.is_symmetric_fixed}\n")

lam20 = lr.RotationParameter(1, 2**20)
anchor = lr.return_map.find_density_anchor(1, lam20)
t0 = time.perf_counter(); fast = lr.phi_point(anchor, lam20, 1); t_fast = time.perf_counter() - t0
t0 = time.perf_counter(); slow = lr.phi_direct(anchor, lam20, d_cap=20); t_slow = time.perf_counter() - t0
print(f"at lam = 1/2^20 the return takes tau = {fast[1]} map steps:")
print(f"  direct walk  {t_slow:8.3f} s")
print(f"  strip hops   {t_fast*1e3:8.3f} ms   (speedup ~{t_slow/max(t_fast,1e-9):,.0f}x, same point: {fast == slow})")
