"""
Depth-one optimum
=================

At p=1 the optimal mixing angle is a root of a single trigonometric equation
and the phase is pi - 2 beta.  We compare the root with the multistart
optimizer and with the simple law beta = pi / (n + 4).
"""

import math

from qaoa_lab import ProblemSize, multistart_maximize
from qaoa_lab.analytic import p1_asymptotic, p1_closed_approx, p1_root

print(" n    root beta     optimizer beta   pi/(n+4)      series        2^n F*")
for n in (4, 6, 10, 20, 50, 100, 200):
    root = p1_root(n)
    best = multistart_maximize(ProblemSize(n, 1))
    print(f"{n:3d}  {root.beta:.10f}  {best.params.betas[0]:.10f}  "
          f"{p1_closed_approx(n).betas[0]:.10f}  {p1_asymptotic(n).betas[0]:.10f}  "
          f"{best.overlap.scaled:.6f}")

# n^2 (beta - pi/n) creeps toward -4 pi
for n in (100, 1000, 10000):
    print(n, n**2 * (p1_root(n).beta - math.pi / n), -4 * math.pi)
