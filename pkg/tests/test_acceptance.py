"""Acceptance criteria, one pass/fail line each (see the terminal summary)."""

import math
import time

import numpy as np

from qaoa_lab.amplitude import OverlapValue, ProblemSize
from qaoa_lab.analytic import p1_closed_approx, p1_root
from qaoa_lab.cli import run_cli
from qaoa_lab.concentration import (
    SweepRecord,
    concentration_distance,
    concentration_points,
    fit_layer_curves,
    fit_scaling,
    transfer_experiment,
)
from qaoa_lab.optimizer import OptimizationResult, multistart_maximize
from qaoa_lab.verify import gradient_error, oracle_deviation

from conftest import timed

REFERENCE_CONSTANTS = {
    1: (1.04, 0.92, 1.06, 2.07),
    2: (0.98, 1.23, 1.05, 2.04),
    3: (0.94, 1.58, 1.05, 1.96),
    4: (0.88, 2.32, 1.03, 1.83),
    5: (1.09, 5.25, 1.0, 2.0),
}


def test_c01_oracle_equivalence(report):
    run = timed(oracle_deviation, 12, 4, 200, 0)
    ok = run.value < 1e-10 and run.seconds < 30
    report("C1 oracle equivalence", ok,
           f"max |closed - statevector| = {run.value:.2e} (< 1e-10), {run.seconds:.1f} s (< 30 s)")


def test_c02_gradient(report):
    run = timed(gradient_error, range(2, 13), 5, 100, 0)
    report("C2 gradient vs central differences", run.value < 1e-6,
           f"max relative error {run.value:.2e} (< 1e-6) over 100 interior points, p <= 5, "
           f"{run.seconds:.1f} s")


def test_c03_depth_one_exactness(p1_optima, report):
    worst_beta = worst_gamma = 0.0
    for n, res in p1_optima.value.items():
        beta, gamma = res.params.betas[0], res.params.gammas[0]
        worst_beta = max(worst_beta, abs(beta - p1_root(n).beta))
        worst_gamma = max(worst_gamma, abs(gamma - (math.pi - 2 * beta)))
    ok = worst_beta < 1e-6 and worst_gamma < 2e-6 and p1_optima.seconds < 60
    report("C3 p=1 exactness, n in [4, 200]", ok,
           f"max |beta - root| = {worst_beta:.2e} (< 1e-6), "
           f"max |gamma - (pi - 2 beta)| = {worst_gamma:.2e} (< 2e-6), "
           f"{p1_optima.seconds:.1f} s (< 60 s)")


def test_c04_asymptotic_coefficient(p1_optima, report):
    n = np.arange(50, 201, dtype=float)
    dev = np.array([p1_optima.value[int(k)].params.betas[0] - math.pi / k for k in n])
    # one-parameter least squares of dev against c / n**2
    c = float(np.sum(dev / n**2) / np.sum(n**-4.0))
    target = -4 * math.pi
    rel = abs(c - target) / abs(target)
    report("C4 asymptotic coefficient", rel < 0.10 and p1_optima.seconds < 60,
           f"c = {c:.4f} vs -4 pi = {target:.4f}, relative deviation {rel:.3f} (< 0.10)")


def test_c05a_concentration_exponent_depth_one(p1_sweep, report):
    pts = [pt for pt in concentration_points(p1_sweep.value) if 10 <= pt.n <= 100]
    fit = fit_scaling(pts)
    ok = -4.3 <= fit.exponent <= -3.7
    report("C5a concentration exponent p=1, n in [10, 100]", ok,
           f"slope {fit.exponent:.4f} (band [-4.3, -3.7]), r^2 = {fit.r_squared:.6f}, "
           f"{fit.num_points} points, sweep {p1_sweep.seconds:.1f} s")


def test_c05b_concentration_exponent_depth_two(p2_sweep, report):
    pts = [pt for pt in concentration_points(p2_sweep.value) if 10 <= pt.n <= 60]
    fit = fit_scaling(pts)
    ok = -4.5 <= fit.exponent <= -3.5
    report("C5b concentration exponent p=2, n in [10, 60]", ok,
           f"slope {fit.exponent:.4f} (band [-4.5, -3.5]), r^2 = {fit.r_squared:.6f}, "
           f"{fit.num_points} points, sweep {p2_sweep.seconds:.1f} s")


def _bare(n, params):
    return SweepRecord(n, params.p, OptimizationResult(n, params, OverlapValue(0.0, n), 0.0, 0))


def test_c06_closed_distance_identity(report):
    start = time.perf_counter()
    worst = 0.0
    for n in range(4, 101):
        got = concentration_distance(_bare(n, p1_closed_approx(n)),
                                     _bare(n + 1, p1_closed_approx(n + 1))).delta_sq
        want = 5 * math.pi**2 / ((n + 4) ** 2 * (n + 5) ** 2)
        worst = max(worst, abs(got - want))
    seconds = time.perf_counter() - start
    report("C6 closed-form distance identity", worst < 1e-12 and seconds < 1,
           f"max |delta^2 - 5 pi^2/((n+4)^2 (n+5)^2)| = {worst:.2e} (< 1e-12), {seconds:.3f} s")


def test_c07_depth_two_structure(report):
    n = 100
    run = timed(multistart_maximize, ProblemSize(n, 2))
    (g1, g2), (b1, b2) = run.value.params.gammas, run.value.params.betas
    checks = {
        "|beta2 - pi/(n+4)|": (abs(b2 - math.pi / (n + 4)), 1e-3),
        "|gamma2 - pi(n+2)/(n+4)|": (abs(g2 - math.pi * (n + 2) / (n + 4)), 1e-3),
        "|n beta1 - pi|": (abs(n * b1 - math.pi), 0.05 * math.pi),
        "|gamma1 - pi|": (abs(g1 - math.pi), 0.1),
    }
    ok = all(v < tol for v, tol in checks.values()) and run.seconds < 60
    detail = ", ".join(f"{k} = {v:.2e} (< {tol:.3g})" for k, (v, tol) in checks.items())
    report("C7 p=2 structure at n=100", ok, f"{detail}, {run.seconds:.1f} s")


def test_c08_deep_fit_constants(p5_sweep, report):
    lines, ok = [], p5_sweep.seconds < 15 * 60
    for layer, (a1, a2, b1, b2) in REFERENCE_CONSTANTS.items():
        fit = fit_layer_curves(p5_sweep.value, layer, 6, 17)
        row_ok = (abs(fit.a2 - a2) <= 0.5 and abs(fit.a1 - a1) <= 0.25 * a1
                  and abs(fit.b1 - b1) <= 0.25 * b1 and abs(fit.b2 - b2) <= 0.25 * b2)
        ok = ok and row_ok
        lines.append(f"layer {layer}: ({fit.a1:.3f}, {fit.a2:.3f}, {fit.b1:.3f}, {fit.b2:.3f}) "
                     f"vs ({a1}, {a2}, {b1}, {b2}) {'ok' if row_ok else 'OUT'}")
    report("C8 p=5 fit constants, n in [6, 17]", ok,
           "; ".join(lines) + f"; sweep {p5_sweep.seconds:.0f} s (< 900 s)")


def test_c09_scaled_optimum_limit(p1_optima, report):
    ns = range(50, 201)
    values = np.array([p1_optima.value[n].overlap.scaled for n in ns])
    increasing = bool(np.all(np.diff(values) > 0))
    below = [n for n, v in zip(ns, values) if not 8.0 <= v <= 9.0]
    ok = increasing and not below and p1_optima.seconds < 60
    report("C9 scaled optimum 2^n F* in [8, 9], n in [50, 200]", ok,
           f"increasing={increasing}, range [{values.min():.4f}, {values.max():.4f}], "
           f"outside band at n={below}")


def test_c10_transfer_benefit(report):
    run = timed(transfer_experiment, 10, 100, 1)
    rep = run.value
    ok = (rep.warm_iters < 0.1 * rep.cold_iters
          and rep.warm_iters < 0.1 * rep.cold_iters_per_restart
          and rep.overlap_gap < 1e-10)
    report("C10 transfer 10 -> 100 qubits", ok,
           f"warm {rep.warm_iters} iterations vs cold {rep.cold_iters} total "
           f"({rep.cold_iters_per_restart:.1f} per restart), 10% limit; "
           f"overlap gap {rep.overlap_gap:.1e} (< 1e-10), {run.seconds:.1f} s")


COMMANDS = [
    ("solve", ["solve", "--n", "12", "--p", "2", "--seed", "5"], "json"),
    ("sweep", ["sweep", "--n-min", "8", "--n-max", "16", "--p", "1", "--restarts", "4",
               "--seed", "5"], "csv"),
    ("analyze", ["analyze", "--in", "{sweep}"], "json"),
    ("fit", ["fit", "--in", "{sweep}", "--layer", "1", "--n-min", "8", "--n-max", "16"], "json"),
    ("transfer", ["transfer", "--w", "6", "--n", "20", "--p", "1", "--restarts", "4"], "json"),
    ("verify", ["verify", "--n-max", "6", "--p-max", "2", "--samples", "10"], "json"),
    ("plot", ["plot", "--in", "{sweep}", "--kind", "angles"], "svg"),
]


def _strip_stamp(text):
    return [line for line in text.splitlines() if "timestamp" not in line]


def test_c11_determinism(tmp_path, report):
    start = time.perf_counter()
    differing = []
    sweep_file = tmp_path / "sweep.csv"
    for name, argv, ext in COMMANDS:
        out = sweep_file if name == "sweep" else tmp_path / f"{name}.{ext}"
        args = [a.format(sweep=sweep_file) for a in argv] + ["--out", str(out)]
        texts = []
        for _ in range(2):
            code = run_cli(args)
            assert code == 0, f"{name} exited {code}"
            texts.append(out.read_text())
        if _strip_stamp(texts[0]) != _strip_stamp(texts[1]):
            differing.append(name)
    seconds = time.perf_counter() - start
    report("C11 determinism of every subcommand", not differing,
           f"{len(COMMANDS)} subcommands rerun, differing: {differing or 'none'}, {seconds:.1f} s")

