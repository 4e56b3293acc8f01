"""Exact and asymptotic optimal angles.

At depth one, the two stationarity conditions collapse to a single
transcendental equation in beta,

    cos(beta)**n * sin(2 beta) - sin((n + 2) beta) = 0,

with the optimal phase tied to it by ``gamma = pi - 2 beta``.  Its relevant
root sits just below ``pi / n``; for large n it behaves like
``pi/n - 4 pi/n**2``, and ``pi / (n + 4)`` is already a good approximation at
small n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .amplitude import (
    LayerParameters,
    ProblemSize,
    powi,
    scaled_overlap_and_gradient,
    scaled_overlap_value,
)
from .errors import ParameterMismatchError, RootNotFoundError, SaddlePointError
from .optimizer import numerical_hessian

_BISECT_TOL = 1e-6
_RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class P1Solution:
    n: int
    beta: float
    gamma: float
    residual: float

    def as_params(self) -> LayerParameters:
        return LayerParameters((self.gamma,), (self.beta,))


@dataclass(frozen=True)
class AsymptoticSeries:
    """``value = constant + leading * pi / n + correction * pi / n**2``."""

    constant: float
    leading: float
    correction: float

    def __call__(self, n: float) -> float:
        return self.constant + self.leading * math.pi / n + self.correction * math.pi / n**2


# depth-one large-n series
BETA_SERIES = AsymptoticSeries(0.0, 1.0, -4.0)
GAMMA_SERIES = AsymptoticSeries(math.pi, -2.0, 8.0)


@dataclass(frozen=True)
class StationarityResiduals:
    r_gamma: float
    r_beta: float


def root_equation(beta: float, n: int) -> float:
    return powi(math.cos(beta), n) * math.sin(2 * beta) - math.sin((n + 2) * beta)


def _root_equation_derivative(beta: float, n: int) -> float:
    c, s = math.cos(beta), math.sin(beta)
    cn1 = powi(c, n - 1)
    return (-n * cn1 * s * math.sin(2 * beta) + 2 * cn1 * c * math.cos(2 * beta)
            - (n + 2) * math.cos((n + 2) * beta))


def _refine(lo: float, hi: float, n: int) -> float:
    """Bisection down to ``_BISECT_TOL``, then safeguarded Newton."""
    f_lo = root_equation(lo, n)
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        f_mid = root_equation(mid, n)
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    beta = 0.5 * (lo + hi)
    for _ in range(50):
        value = root_equation(beta, n)
        if abs(value) < _RESIDUAL_TOL:
            break
        step = value / _root_equation_derivative(beta, n)
        candidate = beta - step
        if not lo - _BISECT_TOL <= candidate <= hi + _BISECT_TOL:
            break
        beta = candidate
        if abs(step) < 1e-17:
            break
    return beta


def p1_root(n: int) -> P1Solution:
    """Depth-one optimum from the root equation.

    Scans ``(0, min(pi/2, 2 pi/n)]`` in steps of ``pi / (50 n)`` for sign
    changes and returns the root with the largest overlap.  For n >= 5 that is
    also the root closest to ``pi / n``; for n <= 4 it is not.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2:
        raise ParameterMismatchError(f"p1_root needs an integer n >= 2, got {n!r}")
    n = int(n)
    step = math.pi / (50 * n)
    upper = min(math.pi / 2, 2 * math.pi / n)
    grid = [k * step for k in range(1, int(upper / step) + 1)]
    values = [root_equation(b, n) for b in grid]
    candidates = []
    for lo, hi, f_lo, f_hi in zip(grid, grid[1:], values, values[1:]):
        if f_lo == 0.0:
            candidates.append(lo)
        elif (f_lo < 0) != (f_hi < 0):
            candidates.append(_refine(lo, hi, n))
    if not candidates:
        raise RootNotFoundError(
            f"no sign change of the root equation on (0, {upper:.6g}] for n={n}",
            diagnostics={"grid": grid, "values": values},
        )
    beta = max(candidates, key=lambda b: scaled_overlap_value(n, [math.pi - 2 * b, b]))
    residual = root_equation(beta, n)
    if abs(residual) >= _RESIDUAL_TOL:
        raise RootNotFoundError(
            f"root refinement stalled at residual {residual:.3g} for n={n}",
            diagnostics={"beta": beta, "candidates": candidates},
        )
    return P1Solution(n, beta, math.pi - 2 * beta, residual)


def p1_asymptotic(n: int) -> LayerParameters:
    """Second-order large-n series for the depth-one optimum."""
    if n < 2:
        raise ParameterMismatchError(f"n must be >= 2, got {n}")
    return LayerParameters((GAMMA_SERIES(n),), (BETA_SERIES(n),))


def p1_closed_approx(n: int) -> LayerParameters:
    """``beta = pi / (n + 4)``, ``gamma = pi - 2 beta``; accurate even at small n."""
    if n < 1:
        raise ParameterMismatchError(f"n must be >= 1, got {n}")
    beta = math.pi / (n + 4)
    return LayerParameters((math.pi * (n + 2) / (n + 4),), (beta,))


def p2_asymptotic(n: int) -> LayerParameters:
    """Depth-two large-n optimum: the last layer follows the depth-one law,
    the first sits at ``(pi, pi / n)``."""
    if n < 2:
        raise ParameterMismatchError(f"n must be >= 2, got {n}")
    last = p1_closed_approx(n)
    return LayerParameters((math.pi, last.gammas[0]), (math.pi / n, last.betas[0]))


def stationarity_residuals(n: int, params: LayerParameters) -> StationarityResiduals:
    """Pole-free forms of the two depth-one zero-gradient conditions.

    ``r_gamma`` clears the denominator of
    ``tan(gamma) = sin(n b) / (cos(n b) - cos(b)**n)`` and ``r_beta`` that of
    ``tan(gamma/2) = cos((n+1) b) / (2 cos(b)**n sin(b) - sin((n+1) b))``.
    """
    if params.p != 1:
        raise ParameterMismatchError("stationarity residuals are defined for p = 1 only")
    gamma, beta = params.gammas[0], params.betas[0]
    cn = powi(math.cos(beta), n)
    r_gamma = math.sin(gamma) * (math.cos(n * beta) - cn) - math.cos(gamma) * math.sin(n * beta)
    r_beta = (math.sin(gamma / 2) * (2 * cn * math.sin(beta) - math.sin((n + 1) * beta))
              - math.cos(gamma / 2) * math.cos((n + 1) * beta))
    return StationarityResiduals(r_gamma, r_beta)


def quadratic_correction(size: ProblemSize, seed: LayerParameters) -> LayerParameters:
    """Maximize the second-order Taylor model of the scaled overlap at ``seed``.

    One Newton step ``seed - H^-1 g``; the Hessian must be negative definite.
    """
    if seed.p != size.p:
        raise ParameterMismatchError(f"seed has depth {seed.p}, problem has depth {size.p}")
    x = seed.as_vector()
    _, grad = scaled_overlap_and_gradient(size.n, x)
    hess = numerical_hessian(size.n, x)
    try:
        np.linalg.cholesky(-hess)
    except np.linalg.LinAlgError:
        eig = np.linalg.eigvalsh(hess)
        raise SaddlePointError(
            f"Hessian at seed is not negative definite (largest eigenvalue {eig[-1]:.3g})"
        ) from None
    return LayerParameters.from_vector(x - np.linalg.solve(hess, grad))
