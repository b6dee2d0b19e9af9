"""Symmetric fixed points of the return map: exact densities per class.

Within a polygon class the return map commutes with a lattice of index
q(e); symmetric fixed points fill an exact fraction
1/((2*v1+1)(2*vk+1)) of the congruence classes whenever an odd
coprimality condition on the vertex list holds.
"""

import lattice_rotor as lr

lam = lr.RotationParameter(1, 2000)

rep = lr.density_delta(9, lam)
print(f"class e=9 at lam={lam}:")
print(f"  {rep.classes} congruence classes, {rep.symmetric_fixed} symmetric fixed,"
      f" {rep.fixed} fixed")
print(f"  delta = {rep.delta} (formula {rep.formula}, exact match: "
      f"{rep.matches_formula}), eta = {rep.eta}\n")

print("densities across the small classes (parameter auto-discovered):")
print("   e   lambda      delta      eta        formula    coprime")
for e in lr.critical_numbers_up_to(20):
    for s in range(6, 16):
        try:
            r = lr.density_delta(e, lr.RotationParameter(1, 2**s))
            break
        except (lr.EscapeError, lr.IrregularOrbit, lr.GuardViolation):
            continue
    print(f"  {e:3d}  {str(r.lam):9s}  {str(r.delta):9s}  {str(r.eta):9s}"
          f"  {str(r.formula):9s}  {'yes' if r.coprimality_ok else 'NO'}")

print("\nfirst coprimality violation:",
      next(e for e in lr.critical_numbers_up_to(100)
           if not lr.vertex_list(e).coprimality_ok))

eq = lr.check_equivariance(9, lam, sample_count=64)
print(f"\nlattice equivariance of the return map on e=9: "
      f"{eq.pairs_checked} congruent pairs checked, ok = {eq.ok}")
