"""
Train small, run large
======================

Optimize at w qubits, slide the angles along beta = pi / (n + const), and
finish with a short local search at n.
"""

from qaoa_lab.concentration import transfer_experiment

for w, n, p in [(10, 100, 1), (10, 60, 2), (29, 30, 1)]:
    rep = transfer_experiment(w, n, p)
    print(f"w={w:3d} -> n={n:3d}, p={p}: warm {rep.warm_iters} iterations, "
          f"cold {rep.cold_iters} ({rep.cold_iters_per_restart:.1f} per restart), "
          f"overlap gap {rep.overlap_gap:.1e}")
