"""
Per-layer fits at depth five
============================

Each layer's optimum is well described by beta = pi / (a1 n + a2) and
gamma = b1 pi - b2 beta.  The constants depend on the n window, so it is
passed explicitly.
"""

from pathlib import Path

from qaoa_lab.concentration import fit_layer_curves, sweep
from qaoa_lab.optimizer import OptimizerConfig
from qaoa_lab.plots import emit_plot

records = sweep(4, 17, 5, OptimizerConfig(restarts=64))
for layer in range(1, 6):
    fit = fit_layer_curves(records, layer, 6, 17)
    print(f"layer {layer}: a1={fit.a1:.3f} a2={fit.a2:.3f} b1={fit.b1:.3f} b2={fit.b2:.3f}")

Path("demo_output").mkdir(exist_ok=True)
emit_plot(records, "branches", "demo_output/branches_p5.svg")
emit_plot(records, "angles", "demo_output/angles_p5.svg", layer=5)
