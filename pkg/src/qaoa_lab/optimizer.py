"""Multistart local maximization of the scaled overlap.

The local method is BFGS ascent with an Armijo backtracking line search.  The
inverse-curvature model starts from the exact Hessian (finite differences of
the analytic gradient) when that is negative definite, so a start already in
the basin converges like Newton's method.  When the line search stalls, the
model is rebuilt once; after that a short Nelder-Mead burst is tried before
giving up.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np
from scipy.optimize import minimize

from .amplitude import (
    TWO_PI,
    LayerParameters,
    OverlapValue,
    ProblemSize,
    canonicalize,
    is_mirrored,
    scaled_overlap_and_gradient,
    scaled_overlap_value,
)
from .errors import ConvergenceError, ParameterMismatchError

log = logging.getLogger(__name__)

Seeding = Literal["asymptotic-seeded", "uniform-random", "hybrid"]
SEEDINGS = ("asymptotic-seeded", "uniform-random", "hybrid")

TIE_TOL = 1e-12
HESSIAN_STEP = 1e-5
_ARMIJO = 1e-4
_MAX_STEP = math.pi
_STALL_WINDOW = 200
_NOISE = 64 * np.finfo(float).eps


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iter: int = 10000
    grad_tol: float = 1e-10
    rng_seed: int = 0
    seeding: Seeding = "hybrid"
    workers: int | None = None  # None: QAOA_LAB_THREADS, else 1

    def __post_init__(self):
        if self.restarts < 1 or self.max_iter < 1:
            raise ValueError("restarts and max_iter must be positive")
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be positive")
        if self.seeding not in SEEDINGS:
            raise ValueError(f"seeding must be one of {SEEDINGS}, got {self.seeding!r}")

    def resolved_workers(self) -> int:
        if self.workers is not None:
            return max(1, int(self.workers))
        env = os.environ.get("QAOA_LAB_THREADS")
        return max(1, int(env)) if env else 1


@dataclass(frozen=True)
class OptimizationResult:
    n: int
    params: LayerParameters
    overlap: OverlapValue
    grad_norm: float
    iterations: int
    restarts_used: int = 1
    branch: str = "canonical"
    diagnostics: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def p(self) -> int:
        return self.params.p


def asymptotic_seed(size: ProblemSize) -> LayerParameters:
    """Large-n pattern ``n beta_k -> pi``, ``gamma_k -> pi`` for every layer."""
    return LayerParameters((math.pi,) * size.p, (math.pi / size.n,) * size.p)


def numerical_hessian(n: int, x, step: float = HESSIAN_STEP) -> np.ndarray:
    """Hessian of the scaled overlap by central differences of the analytic gradient."""
    x = np.asarray(x, dtype=float)
    dim = x.size
    hess = np.empty((dim, dim))
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = step
        hess[:, i] = (scaled_overlap_and_gradient(n, x + e)[1]
                      - scaled_overlap_and_gradient(n, x - e)[1]) / (2 * step)
    return 0.5 * (hess + hess.T)


def _curvature_model(n: int, x, g) -> np.ndarray:
    """Inverse of -Hessian if it is positive definite, else a scaled identity."""
    neg_hess = -numerical_hessian(n, x)
    try:
        np.linalg.cholesky(neg_hess)
        return np.linalg.inv(neg_hess)
    except np.linalg.LinAlgError:
        gnorm = float(np.linalg.norm(g))
        return np.eye(len(x)) * min(1.0, 0.1 / gnorm) if gnorm > 0 else np.eye(len(x))


def _line_search(n, x, f, g, d):
    """Backtracking Armijo search along ascent direction ``d``.

    The scaled overlap is only known to ~1e-14 relative, so a gain at rounding
    level does not count as progress.  A step is accepted on a real Armijo
    gain, or when it shrinks the gradient norm without lowering the overlap by
    more than the rounding level.
    """
    slope = float(g @ d)
    noise = _NOISE * max(1.0, abs(f))
    gnorm = float(np.linalg.norm(g))
    t = 1.0
    for _ in range(60):
        x_new = x + t * d
        f_new, g_new = scaled_overlap_and_gradient(n, x_new)
        if f_new - f > noise and f_new >= f + _ARMIJO * t * slope:
            return t, x_new, f_new, g_new
        if f_new >= f - noise and np.linalg.norm(g_new) < gnorm:
            return t, x_new, f_new, g_new
        t *= 0.5
    return None


def _nelder_mead_burst(n, x, max_iter):
    res = minimize(lambda z: -scaled_overlap_value(n, z), x, method="Nelder-Mead",
                   options={"maxiter": max_iter, "xatol": 1e-12, "fatol": 1e-15})
    return np.asarray(res.x), int(res.nit)


def _simplex_escape(n, x, f, g):
    x_nm, nit = _nelder_mead_burst(n, x, 2000)
    f_nm, g_nm = scaled_overlap_and_gradient(n, x_nm)
    if f_nm >= f:
        return x_nm, f_nm, g_nm, nit
    return x, f, g, nit


def _ascend(n: int, x0, grad_tol: float, max_iter: int):
    """Core local ascent on a flat vector. Returns (x, f, g, iterations, history)."""
    x = np.array(x0, dtype=float)
    f, g = scaled_overlap_and_gradient(n, x)
    history = [f]
    iterations = 0
    hinv = None
    fresh_model = False
    used_simplex = False
    since = 0
    while np.linalg.norm(g) > grad_tol:
        if iterations >= max_iter:
            return x, f, g, iterations, history, False
        if hinv is None:
            hinv = _curvature_model(n, x, g)
            fresh_model = True
        d = hinv @ g
        if g @ d <= 0:
            hinv = np.eye(x.size) * min(1.0, 0.1 / np.linalg.norm(g))
            d = hinv @ g
        dnorm = np.linalg.norm(d)
        if dnorm > _MAX_STEP:
            d *= _MAX_STEP / dnorm
        step = _line_search(n, x, f, g, d)
        if step is None:
            if not fresh_model:
                hinv = None
                continue
            if used_simplex:
                return x, f, g, iterations, history, False
            used_simplex = True
            x, f, g, nit = _simplex_escape(n, x, f, g)
            iterations += nit
            history.append(f)
            since = len(history)
            hinv = None
            continue
        t, x_new, f_new, g_new = step
        s = x_new - x
        y = g - g_new  # gradient change of -f
        sy = float(s @ y)
        if sy > 1e-14 * np.linalg.norm(s) * np.linalg.norm(y):
            rho = 1.0 / sy
            eye = np.eye(x.size)
            hinv = (eye - rho * np.outer(s, y)) @ hinv @ (eye - rho * np.outer(y, s)) \
                + rho * np.outer(s, s)
        x, f, g = x_new, f_new, g_new
        history.append(f)
        iterations += 1
        fresh_model = False
        # creeping across a near-flat plateau (e.g. beta -> pi/2, where
        # cos(beta)**n is tiny): one simplex burst to escape, then give up
        if (len(history) - since > _STALL_WINDOW
                and f - history[-_STALL_WINDOW] < 1e-9 * max(1.0, abs(f))):
            if used_simplex:
                return x, f, g, iterations, history, False
            used_simplex = True
            x, f, g, nit = _simplex_escape(n, x, f, g)
            iterations += nit
            history.append(f)
            since = len(history)
            hinv = None
    return x, f, g, iterations, history, True


def _result_from(size: ProblemSize, x, f, g, iterations, **diag) -> OptimizationResult:
    raw = LayerParameters.from_vector(x)
    return OptimizationResult(
        n=size.n,
        params=canonicalize(raw),
        overlap=OverlapValue(f, size.n),
        grad_norm=float(np.linalg.norm(g)),
        iterations=iterations,
        branch="mirrored" if is_mirrored(raw) else "canonical",
        diagnostics=diag,
    )


def local_maximize(size: ProblemSize, start: LayerParameters,
                   config: OptimizerConfig = OptimizerConfig()) -> OptimizationResult:
    """Climb from ``start`` to a stationary point of the scaled overlap.

    Raises ConvergenceError (with ``.best``) if ``config.max_iter`` accepted
    steps do not bring the gradient norm below ``config.grad_tol``.
    """
    if start.p != size.p:
        raise ParameterMismatchError(f"start has depth {start.p}, problem has depth {size.p}")
    x0 = start.as_vector()
    if not np.all(np.isfinite(x0)):
        raise ParameterMismatchError("start parameters must be finite")
    x, f, g, iterations, history, ok = _ascend(size.n, x0, config.grad_tol, config.max_iter)
    result = _result_from(size, x, f, g, iterations, history=history)
    if not ok:
        raise ConvergenceError(
            f"no stationary point within {config.max_iter} iterations "
            f"(n={size.n}, p={size.p}, |grad|={result.grad_norm:.3g})",
            best=result,
        )
    return result


def warm_start_maximize(size: ProblemSize, init: LayerParameters,
                        config: OptimizerConfig = OptimizerConfig()) -> OptimizationResult:
    """Local ascent from ``init``; a shallower ``init`` is padded with identity layers."""
    if init.p > size.p:
        raise ParameterMismatchError(f"init depth {init.p} exceeds target depth {size.p}")
    return local_maximize(size, init.padded(size.p), config)


def start_points(size: ProblemSize, config: OptimizerConfig) -> list[LayerParameters]:
    """Deterministic starting points, one per restart."""
    seed = asymptotic_seed(size)
    children = np.random.SeedSequence(config.rng_seed).spawn(config.restarts)
    starts = []
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        if config.seeding != "uniform-random" and i == 0:
            starts.append(seed)
        elif config.seeding == "asymptotic-seeded":
            jitter = rng.normal(size=2 * size.p)
            x = seed.as_vector()
            x[: size.p] += 0.1 * jitter[: size.p]
            x[size.p :] *= np.exp(0.1 * jitter[size.p :])
            starts.append(LayerParameters.from_vector(x))
        else:
            gammas = rng.uniform(0.0, TWO_PI, size.p)
            betas = rng.uniform(0.0, math.pi, size.p)
            betas[0] *= 0.5
            starts.append(LayerParameters(tuple(gammas), tuple(betas)))
    return starts


def _run_restart(args):
    size, start, config, index = args
    try:
        return index, local_maximize(size, start, config), None
    except ConvergenceError as exc:
        return index, exc.best, str(exc)


def _distance_to_seed(result: OptimizationResult, seed: np.ndarray) -> float:
    return float(np.linalg.norm(result.params.as_vector() - seed))


def select_best(results: list[OptimizationResult], seed: LayerParameters) -> OptimizationResult:
    """Highest overlap; near-ties go to the point closest to ``seed``, then
    to the lowest index."""
    top = max(r.overlap.scaled for r in results)
    ref = seed.as_vector()
    contenders = [(i, r) for i, r in enumerate(results) if r.overlap.scaled >= top - TIE_TOL]
    return min(contenders, key=lambda ir: (_distance_to_seed(ir[1], ref), ir[0]))[1]


def multistart_maximize(size: ProblemSize,
                        config: OptimizerConfig = OptimizerConfig()) -> OptimizationResult:
    """Best canonicalized stationary point over ``config.restarts`` local runs.

    Deterministic for a given ``config.rng_seed``, independent of worker count.
    """
    starts = start_points(size, config)
    jobs = [(size, s, config, i) for i, s in enumerate(starts)]
    workers = config.resolved_workers()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_restart, jobs))
    else:
        outcomes = [_run_restart(job) for job in jobs]

    converged, failures = [], []
    for index, result, error in outcomes:
        if error is None:
            converged.append(result)
        else:
            log.info("restart %d skipped: %s", index, error)
            failures.append((index, error))
    if not converged:
        best = max((r for _, r, _ in outcomes if r is not None),
                   key=lambda r: r.overlap.scaled, default=None)
        raise ConvergenceError(
            f"all {len(jobs)} restarts failed for n={size.n}, p={size.p}", best=best
        )

    best = select_best(converged, asymptotic_seed(size))
    return replace(
        best,
        iterations=sum(r.iterations for r in converged),
        restarts_used=len(jobs),
        diagnostics={
            "restart_overlaps": [r.overlap.scaled for r in converged],
            "restart_iterations": [r.iterations for r in converged],
            "best_iterations": best.iterations,
            "failures": failures,
        },
    )
