"""Self-checks of the closed form against brute force."""

from __future__ import annotations

import math

import numpy as np

from .amplitude import LayerParameters, ProblemSize, overlap, scaled_overlap_and_gradient, \
    scaled_overlap_value
from .statevector import oracle_overlap

ORACLE_TOL = 1e-10
GRADIENT_TOL = 1e-6
FD_STEP = 1e-6


def random_params(rng: np.random.Generator, p: int) -> LayerParameters:
    return LayerParameters(tuple(rng.uniform(0.0, 2 * math.pi, p)),
                           tuple(rng.uniform(0.0, math.pi, p)))


def interior_point(rng: np.random.Generator, p: int) -> np.ndarray:
    """A point away from the plateaus where cos(beta)**n is negligible."""
    gammas = rng.uniform(0.1, 2 * math.pi - 0.1, p)
    betas = rng.uniform(0.05, 1.0, p) / p
    return np.concatenate([gammas, betas])


def central_difference(n: int, x, step: float = FD_STEP) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        grad[i] = (scaled_overlap_value(n, x + e) - scaled_overlap_value(n, x - e)) / (2 * step)
    return grad


def oracle_deviation(n_max: int = 12, p_max: int = 4, samples: int = 200,
                     seed: int = 0) -> float:
    """Largest |closed form - statevector| of the scaled overlap over random draws."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in range(1, n_max + 1):
        for p in range(1, p_max + 1):
            size = ProblemSize(n, p)
            for _ in range(samples):
                params = random_params(rng, p)
                target = int(rng.integers(1 << n))
                closed = overlap(size, params).scaled
                brute = oracle_overlap(n, p, target, params).scaled
                worst = max(worst, abs(closed - brute))
    return worst


def gradient_error(n_values=range(2, 13), p_max: int = 5, points: int = 100,
                   seed: int = 0) -> float:
    """Largest relative error of the analytic gradient vs central differences."""
    rng = np.random.default_rng(seed)
    n_values = list(n_values)
    worst = 0.0
    for i in range(points):
        n = n_values[i % len(n_values)]
        p = 1 + i % p_max
        x = interior_point(rng, p)
        _, analytic = scaled_overlap_and_gradient(n, x)
        numeric = central_difference(n, x)
        worst = max(worst, float(np.linalg.norm(analytic - numeric) / np.linalg.norm(analytic)))
    return worst


def run_verification(n_max: int = 12, p_max: int = 4, samples: int = 200,
                     seed: int = 0) -> dict:
    dev = oracle_deviation(n_max, p_max, samples, seed)
    grad = gradient_error(range(2, n_max + 1), p_max + 1, 100, seed)
    return {
        "n_max": n_max, "p_max": p_max, "samples": samples, "seed": seed,
        "max_oracle_deviation": dev, "oracle_tol": ORACLE_TOL,
        "max_gradient_rel_error": grad, "gradient_tol": GRADIENT_TOL,
        "passed": bool(dev < ORACLE_TOL and grad < GRADIENT_TOL),
    }
