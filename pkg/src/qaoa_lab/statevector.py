"""Brute-force statevector simulation of the ansatz, used as ground truth.

Qubit ``i`` is bit ``i`` of the basis index.  The mixer is applied as one
butterfly pass per qubit, so a layer costs O(n 2**n) and nothing dense is
ever built.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .amplitude import LayerParameters, OverlapValue
from .errors import CapacityError, ParameterMismatchError

DEFAULT_MAX_QUBITS = 22
HARD_MAX_QUBITS = 24


def _check_capacity(n: int, max_qubits: int) -> None:
    limit = min(max_qubits, HARD_MAX_QUBITS)
    if not 1 <= n <= limit:
        raise CapacityError(f"statevector oracle supports 1 <= n <= {limit}, got n={n}")


def _num_qubits(state: np.ndarray) -> int:
    size = state.shape[0]
    n = size.bit_length() - 1
    if state.ndim != 1 or size != 1 << n or n < 1:
        raise ParameterMismatchError(f"state length {size} is not a power of two")
    return n


def target_index(bits: Sequence[bool] | int, n: int) -> int:
    """Basis index of ``|t>``; ``bits[i]`` is the value of qubit ``i``."""
    if isinstance(bits, (int, np.integer)):
        index = int(bits)
    else:
        if len(bits) != n:
            raise ParameterMismatchError(f"target has {len(bits)} bits, expected {n}")
        index = sum(1 << i for i, b in enumerate(bits) if b)
    if not 0 <= index < 1 << n:
        raise ParameterMismatchError(f"target index {index} out of range for n={n}")
    return index


def prepare_plus(n: int, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    _check_capacity(n, max_qubits)
    dim = 1 << n
    return np.full(dim, 1.0 / math.sqrt(dim), dtype=complex)


def apply_phase_layer(state: np.ndarray, target, gamma: float) -> np.ndarray:
    """Return ``exp(-i gamma |t><t|) state``."""
    n = _num_qubits(state)
    out = state.copy()
    out[target_index(target, n)] *= np.exp(-1j * gamma)
    return out


def apply_mixer_layer(state: np.ndarray, beta: float) -> np.ndarray:
    """Return ``exp(-i beta sum_i X_i) state``."""
    n = _num_qubits(state)
    c, s = math.cos(beta), -1j * math.sin(beta)
    out = state.copy()
    for q in range(n):
        # axis 1 of the view selects bit q
        view = out.reshape(-1, 2, 1 << q)
        lo = view[:, 0, :].copy()
        hi = view[:, 1, :]
        view[:, 0, :] = c * lo + s * hi
        view[:, 1, :] = s * lo + c * hi
    return out


def simulate(n: int, target, params: LayerParameters,
             max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    state = prepare_plus(n, max_qubits)
    for gamma, beta in zip(params.gammas, params.betas):
        state = apply_phase_layer(state, target, gamma)
        state = apply_mixer_layer(state, beta)
    return state


def oracle_amplitude(n: int, target, params: LayerParameters,
                     max_qubits: int = DEFAULT_MAX_QUBITS) -> complex:
    """Scaled amplitude ``2**(n/2) <t|psi>`` from the full statevector."""
    state = simulate(n, target, params, max_qubits)
    return complex(state[target_index(target, n)]) * math.sqrt(2.0**n)


def oracle_overlap(n: int, p: int, target, params: LayerParameters,
                   max_qubits: int = DEFAULT_MAX_QUBITS) -> OverlapValue:
    if params.p != p:
        raise ParameterMismatchError(f"parameters have depth {params.p}, expected {p}")
    amp = oracle_amplitude(n, target, params, max_qubits)
    return OverlapValue(abs(amp) ** 2, n)
