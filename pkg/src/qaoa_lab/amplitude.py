"""Closed-form amplitude, overlap and gradient of the state-preparation ansatz.

The ansatz alternates a target phase ``exp(-i gamma_k |t><t|)`` with the
transverse-field mixer ``exp(-i beta_k sum_i X_i)`` on ``|+>^n``.  Because the
phase layer is a rank-one update and ``<t| exp(-i b H_x) |t> = cos(b)**n``,
the amplitude ``<t|psi>`` never needs the 2**n state.  With ``beta_0 = 0``
and ``A(0, b) = exp(-i n b)``,

    A(k, b) = A(k-1, beta_{k-1} + b)
              + A(k-1, beta_{k-1}) * cos(b)**n * (exp(-i gamma_k) - 1)

and the depth-p amplitude is ``A(p, beta_p)``.  Everything here is reported
in scaled units (``2**(n/2) <t|psi>`` and ``2**n F``), which stay O(1) near
the optimum for any n.

Unrolling the recursion gives one term per subset of "phase" layers; the
terms share prefix structure, so we sum them with a dynamic program over the
last chosen layer in O(p**2) (O(p**3) with the gradient).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NumericError, ParameterMismatchError

TWO_PI = 2.0 * math.pi

__all__ = [
    "ProblemSize",
    "LayerParameters",
    "OverlapValue",
    "scaled_amplitude",
    "overlap",
    "overlap_gradient",
    "scaled_overlap_and_gradient",
    "scaled_overlap_value",
    "canonicalize",
    "symmetry_image",
    "is_mirrored",
    "powi",
]

_MAX_N = 2**63 - 1


@dataclass(frozen=True)
class ProblemSize:
    """Qubit count ``n`` and circuit depth ``p``."""

    n: int
    p: int

    def __post_init__(self):
        for name in ("n", "p"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ParameterMismatchError(f"{name} must be an integer, got {value!r}")
            if value < 1:
                raise ParameterMismatchError(f"{name} must be >= 1, got {value}")
        if self.n > _MAX_N:
            raise ParameterMismatchError("n must fit in 64 bits")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "p", int(self.p))


@dataclass(frozen=True)
class LayerParameters:
    """The 2p ansatz angles, layer 1 first."""

    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        gammas = tuple(float(g) for g in self.gammas)
        betas = tuple(float(b) for b in self.betas)
        if len(gammas) != len(betas):
            raise ParameterMismatchError(
                f"got {len(gammas)} gammas but {len(betas)} betas"
            )
        if not gammas:
            raise ParameterMismatchError("at least one layer is required")
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "betas", betas)

    @property
    def p(self) -> int:
        return len(self.gammas)

    def as_vector(self) -> np.ndarray:
        """Flat vector ``(gamma_1..gamma_p, beta_1..beta_p)``."""
        return np.array(self.gammas + self.betas, dtype=float)

    @classmethod
    def from_vector(cls, x) -> "LayerParameters":
        x = np.asarray(x, dtype=float).ravel()
        if x.size % 2:
            raise ParameterMismatchError("parameter vector must have even length")
        p = x.size // 2
        return cls(tuple(x[:p]), tuple(x[p:]))

    def padded(self, p: int) -> "LayerParameters":
        """Append zero layers up to depth ``p``; zero layers act as identity."""
        if p < self.p:
            raise ParameterMismatchError(f"cannot pad depth {self.p} down to {p}")
        extra = (0.0,) * (p - self.p)
        return LayerParameters(self.gammas + extra, self.betas + extra)


@dataclass(frozen=True)
class OverlapValue:
    """Overlap ``F = |<t|psi>|**2`` with its scaled form ``2**n F``.

    ``scaled`` is authoritative; ``f`` underflows to 0 for n beyond ~1000.
    """

    scaled: float
    n: int

    @property
    def f(self) -> float:
        return math.ldexp(self.scaled, -self.n)

    @property
    def objective(self) -> float:
        """Energy ``<psi|1 - |t><t||psi> = 1 - F``."""
        return 1.0 - self.f


def powi(x: float, n: int) -> float:
    """``x**n`` for a non-negative integer ``n`` by repeated squaring.

    Keeps the sign of a negative base exact even when ``n`` is too large to be
    represented exactly as a float.
    """
    result = 1.0
    base = float(x)
    while n:
        if n & 1:
            result *= base
        n >>= 1
        if n:
            base *= base
    return result


def _check(size: ProblemSize, params: LayerParameters) -> None:
    if params.p != size.p:
        raise ParameterMismatchError(
            f"parameters have depth {params.p}, problem has depth {size.p}"
        )


def _amplitude(n: int, gammas: Sequence[float], betas: Sequence[float]) -> complex:
    p = len(gammas)
    weights: list[complex] = []
    for k in range(p):
        acc = cmath.exp(-1j * (n * math.fsum(betas[:k])))
        for j in range(k):
            acc += weights[j] * powi(math.cos(math.fsum(betas[j:k])), n)
        weights.append((cmath.exp(-1j * gammas[k]) - 1.0) * acc)
    amp = cmath.exp(-1j * (n * math.fsum(betas)))
    for k in range(p):
        amp += weights[k] * powi(math.cos(math.fsum(betas[k:])), n)
    return amp


def _amplitude_and_gradient(n: int, gammas, betas) -> tuple[complex, np.ndarray]:
    """Amplitude and its derivative w.r.t. ``(gamma_1..gamma_p, beta_1..beta_p)``."""
    p = len(gammas)
    dim = 2 * p

    def phase(k):
        # exp(-i n sum(beta[:k])) and its gradient
        val = cmath.exp(-1j * (n * math.fsum(betas[:k])))
        grad = np.zeros(dim, dtype=complex)
        grad[p : p + k] = -1j * n * val
        return val, grad

    def cos_power(j, k):
        # cos(sum(beta[j:k]))**n and its gradient
        s = math.fsum(betas[j:k])
        c, sn = math.cos(s), math.sin(s)
        cn1 = powi(c, n - 1)
        grad = np.zeros(dim)
        grad[p + j : p + k] = -n * cn1 * sn
        return cn1 * c, grad

    w_val: list[complex] = []
    w_grad: list[np.ndarray] = []
    for k in range(p):
        acc, dacc = phase(k)
        for j in range(k):
            cv, cg = cos_power(j, k)
            acc += w_val[j] * cv
            dacc = dacc + w_grad[j] * cv + w_val[j] * cg
        e = cmath.exp(-1j * gammas[k])
        phi = e - 1.0
        dw = phi * dacc
        dw[k] += -1j * e * acc
        w_val.append(phi * acc)
        w_grad.append(dw)

    amp, damp = phase(p)
    for k in range(p):
        cv, cg = cos_power(k, p)
        amp += w_val[k] * cv
        damp = damp + w_grad[k] * cv + w_val[k] * cg
    return amp, damp


def scaled_amplitude(size: ProblemSize, params: LayerParameters) -> complex:
    """``2**(n/2) <t|psi(gamma, beta)>``.

    >>> scaled_amplitude(ProblemSize(4, 1), LayerParameters((1.1,), (0.0,)))
    (0.45359612142557726-0.8912073600614354j)
    """
    _check(size, params)
    return _amplitude(size.n, params.gammas, params.betas)


def overlap(size: ProblemSize, params: LayerParameters) -> OverlapValue:
    amp = scaled_amplitude(size, params)
    return OverlapValue(amp.real * amp.real + amp.imag * amp.imag, size.n)


def scaled_overlap_and_gradient(n: int, x) -> tuple[float, np.ndarray]:
    """Scaled overlap and its gradient at the flat parameter vector ``x``.

    This is the hot path used by the optimizers; no validation beyond shape.
    """
    x = np.asarray(x, dtype=float)
    p = x.size // 2
    amp, damp = _amplitude_and_gradient(n, x[:p].tolist(), x[p:].tolist())
    value = amp.real * amp.real + amp.imag * amp.imag
    grad = 2.0 * (amp.real * damp.real + amp.imag * damp.imag)
    return value, grad


def scaled_overlap_value(n: int, x) -> float:
    x = np.asarray(x, dtype=float)
    p = x.size // 2
    amp = _amplitude(n, x[:p].tolist(), x[p:].tolist())
    return amp.real * amp.real + amp.imag * amp.imag


def overlap_gradient(size: ProblemSize, params: LayerParameters) -> np.ndarray:
    """Gradient of the scaled overlap, ordered ``(d/dgamma_1.., d/dbeta_1..)``.

    The gradient of F itself is this times ``2**-n``; both vanish together.
    """
    _check(size, params)
    return scaled_overlap_and_gradient(size.n, params.as_vector())[1]


def _wrap(x: float, period: float) -> float:
    r = math.fmod(x, period)
    if r < 0.0:
        r += period
    if r >= period:
        r = 0.0
    return r


def _require_finite(params: LayerParameters) -> None:
    if not all(math.isfinite(v) for v in params.gammas + params.betas):
        raise NumericError(f"non-finite angle in {params}")


def symmetry_image(params: LayerParameters) -> LayerParameters:
    """Mirror every layer: ``beta -> pi - beta``, ``gamma -> 2 pi - gamma``.

    The overlap is invariant because the image is the complex conjugate
    amplitude up to a global phase.
    """
    _require_finite(params)
    return LayerParameters(
        tuple(_wrap(TWO_PI - g, TWO_PI) for g in params.gammas),
        tuple(_wrap(math.pi - b, math.pi) for b in params.betas),
    )


def _wrapped(params: LayerParameters) -> LayerParameters:
    return LayerParameters(
        tuple(_wrap(g, TWO_PI) for g in params.gammas),
        tuple(_wrap(b, math.pi) for b in params.betas),
    )


def is_mirrored(params: LayerParameters) -> bool:
    """True when the wrapped point sits on the branch with ``beta_1 > pi/2``."""
    _require_finite(params)
    return _wrapped(params).betas[0] > math.pi / 2


def canonicalize(params: LayerParameters) -> LayerParameters:
    """Wrap angles into ``gamma in [0, 2pi)``, ``beta in [0, pi)`` and pick the
    branch with ``beta_1 <= pi/2``."""
    _require_finite(params)
    wrapped = _wrapped(params)
    if wrapped.betas[0] > math.pi / 2:
        return symmetry_image(wrapped)
    return wrapped
