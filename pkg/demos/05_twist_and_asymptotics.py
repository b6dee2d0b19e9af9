"""The flow period at infinity and the twist dichotomy.

Rescaled by the class size, the period's deviation from pi approaches
(1/3)(2b+1)^(3/2) - sqrt(2b) - eps(b), with b the fractional part of the
square root of the level.  The derivative is singular at b = 0: the twist
of the conjugate cylinder map survives only on perfect-square classes.
"""

import math

import lattice_rotor as lr

v_k = 100
print(f"rescaled period deviation at v_k = {v_k} (sampled):")
print("    b     measured   limiting-eps")
worst = 0.0
for j in range(0, 100, 10):
    b = j / 100
    lhs = v_k**1.5 * (lr.period_T_float((v_k + b)**2) - math.pi) / 4
    rhs = lr.asymptotic_form(b) - lr.epsilon_b(b, v_k)
    worst = max(worst, abs(lhs - rhs))
    print(f"  {b:5.2f}  {lhs:+9.5f}  {rhs:+9.5f}")
print(f"max gap over the full grid: {worst:.4f}\n")

print("defect term inside its proven envelope:")
for b in (0.0, 0.25, 0.5, 0.75):
    lo, hi = lr.epsilon_bounds(b)
    print(f"  eps({b}, 2000) = {lr.epsilon_b(b, 2000):.5f} in [{lo:.5f}, {hi:.5f}]")

print("\ntwist along square classes (survives, -> 4) vs off-square (dies):")
for v in (20, 50, 100, 200, 400):
    print(f"  K({v}^2)     = {float(lr.twist_K(v*v)):+.4f}")
for v in (100, 200, 400):
    e = lr.class_of((v + 0.5)**2)
    print(f"  K(e({v}+.5)) = {float(lr.twist_K(e)):+.4f}   (e = {e})")

print("\ntranslation length rho_bar = 1/K spikes where the twist changes sign"
      " (near b = 0.3):")
for j in range(0, 100, 10):
    b = j / 100
    e = lr.class_of((100 + b) ** 2) if j else 10000
    try:
        rb = float(lr.rho_bar(e))
    except ZeroDivisionError:
        rb = math.inf
    print(f"  b={b:4.2f}: rho_bar = {rb:+10.3f}")
