"""Sweeps over qubit count, concentration distances and scaling fits."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import least_squares

from .amplitude import LayerParameters, ProblemSize, symmetry_image
from .errors import ConvergenceError, FitError, ParameterMismatchError
from .optimizer import (
    TIE_TOL,
    OptimizationResult,
    OptimizerConfig,
    multistart_maximize,
    warm_start_maximize,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepRecord:
    n: int
    p: int
    result: OptimizationResult
    wall_time: float = 0.0
    seed: int = 0

    @property
    def params(self) -> LayerParameters:
        return self.result.params


@dataclass(frozen=True)
class ConcentrationPoint:
    n: int
    delta_sq: float


@dataclass(frozen=True)
class ScalingFit:
    exponent: float
    prefactor: float
    r_squared: float
    n_range: tuple[int, int]
    num_points: int = 0


@dataclass(frozen=True)
class FitConstants:
    layer: int
    a1: float
    a2: float
    b1: float
    b2: float
    n_range: tuple[int, int]
    beta_residual: float = 0.0
    gamma_residual: float = 0.0

    def beta(self, n):
        return math.pi / (self.a1 * np.asarray(n, dtype=float) + self.a2)

    def gamma(self, n):
        return self.b1 * math.pi - self.b2 * self.beta(n)


def sweep(n_min: int, n_max: int, p: int,
          config: OptimizerConfig = OptimizerConfig()) -> list[SweepRecord]:
    """One converged optimum per n in ``[n_min, n_max]``.

    Each n is warm-started from the previous optimum and also solved by a
    fresh multistart; the better of the two is kept, preferring the warm
    chain on ties so the tracked optimum stays on one branch.
    """
    if n_min < 2 or n_max < n_min:
        raise ParameterMismatchError(f"need 2 <= n_min <= n_max, got {n_min}..{n_max}")
    records: list[SweepRecord] = []
    previous: LayerParameters | None = None
    for n in range(n_min, n_max + 1):
        size = ProblemSize(n, p)
        start = time.perf_counter()
        try:
            best = multistart_maximize(size, config)
        except ConvergenceError as exc:
            raise ConvergenceError(f"sweep failed at n={n}: {exc}", best=exc.best) from exc
        if previous is not None:
            try:
                warm = warm_start_maximize(size, previous, config)
            except ConvergenceError as exc:
                log.info("warm start failed at n=%d: %s", n, exc)
            else:
                if warm.overlap.scaled >= best.overlap.scaled - TIE_TOL:
                    best = warm
        records.append(SweepRecord(n, p, best, time.perf_counter() - start, config.rng_seed))
        previous = best.params
    return records


def parameter_distance_sq(a: LayerParameters, b: LayerParameters) -> float:
    """Squared distance from ``a`` to the closer of ``b`` and its mirror image."""
    if a.p != b.p:
        raise ParameterMismatchError(f"depth mismatch: {a.p} vs {b.p}")
    va = a.as_vector()
    return min(float(np.sum((va - c.as_vector()) ** 2)) for c in (b, symmetry_image(b)))


def concentration_distance(rec_a: SweepRecord, rec_b: SweepRecord) -> ConcentrationPoint:
    if rec_a.p != rec_b.p:
        raise ParameterMismatchError(f"depth mismatch: {rec_a.p} vs {rec_b.p}")
    if rec_b.n != rec_a.n + 1:
        raise ParameterMismatchError(f"records must be consecutive, got n={rec_a.n}, {rec_b.n}")
    return ConcentrationPoint(rec_a.n, parameter_distance_sq(rec_a.params, rec_b.params))


def concentration_points(records: Sequence[SweepRecord]) -> list[ConcentrationPoint]:
    """Distances between every consecutive pair in a sweep (sorted by n)."""
    ordered = sorted(records, key=lambda r: r.n)
    return [concentration_distance(a, b) for a, b in zip(ordered, ordered[1:]) if b.n == a.n + 1]


def fit_scaling(points: Iterable[ConcentrationPoint]) -> ScalingFit:
    """Least-squares line through ``(log n, log delta_sq)``; the slope is ``-l``."""
    points = list(points)
    if len(points) < 5:
        raise FitError(f"need at least 5 points, got {len(points)}")
    n = np.array([pt.n for pt in points], dtype=float)
    d = np.array([pt.delta_sq for pt in points], dtype=float)
    if not np.all(np.isfinite(d)) or np.any(d <= 0):
        raise FitError("distances must be finite and positive")
    x, y = np.log(n), np.log(d)
    slope, intercept = np.polyfit(x, y, 1)
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(float(slope), float(math.exp(intercept)), min(1.0, max(0.0, r_squared)),
                      (int(n.min()), int(n.max())), len(points))


def fit_layer_curves(records: Sequence[SweepRecord], layer_index: int,
                     n_min: int | None = None, n_max: int | None = None) -> FitConstants:
    """Fit ``beta_k = pi / (a1 n + a2)`` and then ``gamma_k = b1 pi - b2 beta_k``.

    ``layer_index`` is 1-based.  The n range actually used is recorded in the
    result because the constants depend on it.
    """
    chosen = [r for r in records
              if (n_min is None or r.n >= n_min) and (n_max is None or r.n <= n_max)]
    if len(chosen) < 6:
        raise FitError(f"need at least 6 records in range, got {len(chosen)}")
    if not 1 <= layer_index <= chosen[0].p:
        raise ParameterMismatchError(f"layer {layer_index} outside 1..{chosen[0].p}")
    k = layer_index - 1
    n = np.array([r.n for r in chosen], dtype=float)
    beta = np.array([r.params.betas[k] for r in chosen])
    gamma = np.array([r.params.gammas[k] for r in chosen])

    # linearized fit of pi / beta gives the starting point
    a1_0, a2_0 = np.polyfit(n, math.pi / beta, 1)
    fit = least_squares(lambda a: math.pi / (a[0] * n + a[1]) - beta, [a1_0, a2_0],
                        xtol=1e-15, ftol=1e-15, gtol=1e-15)
    if not fit.success:
        raise FitError(f"beta curve fit did not converge: {fit.message}")
    a1, a2 = fit.x

    design = np.column_stack([np.full_like(beta, math.pi), -beta])
    (b1, b2), *_ = np.linalg.lstsq(design, gamma, rcond=None)
    gamma_res = float(np.linalg.norm(design @ np.array([b1, b2]) - gamma))
    return FitConstants(layer_index, float(a1), float(a2), float(b1), float(b2),
                        (int(n.min()), int(n.max())), float(np.linalg.norm(fit.fun)), gamma_res)


def transfer_parameters(params: LayerParameters, w: int, n: int) -> LayerParameters:
    """Map an optimum at ``w`` qubits to a starting point at ``n`` qubits.

    Each layer keeps its offset in ``beta = pi / (n + a2)`` and its slope
    ``d gamma / d beta = -2``, i.e. it slides along the concentration law.
    Layers on the mirrored side (``beta > pi/2``) are mapped through their
    mirror image.
    """
    gammas, betas = [], []
    for gamma, beta in zip(params.gammas, params.betas):
        mirrored = beta > math.pi / 2
        if mirrored:
            gamma, beta = 2 * math.pi - gamma, math.pi - beta
        if beta > 0:
            new_beta = math.pi / (n + math.pi / beta - w)
            if not 0 < new_beta < math.pi / 2:
                new_beta = beta * w / n
        else:
            new_beta = beta
        new_gamma = gamma + 2 * (beta - new_beta)
        if mirrored:
            new_gamma, new_beta = 2 * math.pi - new_gamma, math.pi - new_beta
        gammas.append(new_gamma)
        betas.append(new_beta)
    return LayerParameters(tuple(gammas), tuple(betas))


@dataclass(frozen=True)
class TransferReport:
    w: int
    n: int
    p: int
    cold_iters: int
    warm_iters: int
    overlap_gap: float
    cold: OptimizationResult = field(repr=False)
    warm: OptimizationResult = field(repr=False)
    trained: OptimizationResult = field(repr=False)

    @property
    def cold_iters_per_restart(self) -> float:
        runs = self.cold.diagnostics.get("restart_iterations") or [self.cold_iters]
        return self.cold_iters / len(runs)


def transfer_experiment(w: int, n: int, p: int,
                        config: OptimizerConfig = OptimizerConfig()) -> TransferReport:
    """Train at ``w`` qubits, warm-start at ``n``, and compare with a cold multistart.

    ``cold_iters`` counts local-search iterations over all cold restarts,
    i.e. the cost of training at n from scratch.
    """
    if not 2 <= w < n:
        raise ParameterMismatchError(f"need 2 <= w < n, got w={w}, n={n}")
    trained = multistart_maximize(ProblemSize(w, p), config)
    init = transfer_parameters(trained.params, w, n)
    warm = warm_start_maximize(ProblemSize(n, p), init, config)
    cold = multistart_maximize(ProblemSize(n, p), config)
    return TransferReport(
        w=w, n=n, p=p,
        cold_iters=cold.iterations,
        warm_iters=warm.iterations,
        overlap_gap=abs(warm.overlap.scaled - cold.overlap.scaled),
        cold=cold, warm=warm, trained=trained,
    )
