"""Closed forms for the transverse kicked Ising chain at ``tau = pi/4``.

With ``hx = 1, hy = hz = 0`` and an open chain, the Schmidt spectrum of
``U**n`` is flat with rank ``2**n`` for ``1 <= n <= L``, the entropies are
mirrored about ``n = L`` and ``U**(2L)`` is local across the half cut.

The nonlocal part of ``U**n`` is a product of commuting Pauli-string
rotations ``V_i = (I - i P_i) / sqrt(2)``. Sites are relabelled outward from
the cut: ``A_j`` is site ``L/2 + 1 - j`` and ``B_j`` is site ``L/2 + j``
(1-based), so ``A_1, B_1`` straddle the cut.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .floquet import SIGMA_X, SIGMA_Y, SIGMA_Z
from .tensor_core import kron

_PAULI = {"I": np.eye(2, dtype=complex), "x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


@dataclass(frozen=True)
class ExactMeasures:
    n: int
    E_l: float
    E_vN: float
    E_l_US: float
    ep_l: float


def _check_L(L: int) -> int:
    if L < 2 or L % 2:
        raise ValueError(f"L must be an even integer >= 2, got {L}")
    return L // 2


def reduced_time(L: int, n: int) -> int:
    """Map ``n`` onto ``[0, L]`` using period ``2L`` and the mirror at ``L``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    m = n % (2 * L)
    return 2 * L - m if m > L else m


def exact_measures(L: int, n: int) -> ExactMeasures:
    """Operator entropies and linear entangling power of ``U**n``."""
    half = _check_L(L)
    m = reduced_time(L, n)
    if m == 0:
        return ExactMeasures(n, 0.0, 0.0, 1.0 - 2.0 ** -L, 0.0)
    el = 1.0 - 2.0 ** -m
    el_us = 1.0 - 2.0 ** (m - 1 - L)
    ep = (1 + 2 ** L - 2 ** (L - m) - 2 ** (m - 1)) / (1 + 2 ** half) ** 2
    return ExactMeasures(n, el, float(m), el_us, ep)


def pauli_string(L: int, ops: dict[int, str]) -> np.ndarray:
    """Dense Pauli string; ``ops`` maps 1-based site index to ``'x'|'y'|'z'``."""
    return kron(*(_PAULI[ops.get(site, "I")] for site in range(1, L + 1)))


def _a_site(L: int, j: int) -> int:
    return L // 2 + 1 - j


def _b_site(L: int, j: int) -> int:
    return L // 2 + j


def factor_string(L: int, i: int) -> dict[int, str]:
    """Pauli string ``P_i`` of ``V_i = (I - i P_i)/sqrt(2)`` for ``1 <= i <= L``."""
    half = _check_L(L)
    if not 1 <= i <= L:
        raise ValueError(f"factor index must be in 1..{L}, got {i}")
    if i <= half:
        head, tail = i, "y"
        string_len = i - 1
    else:
        k = i - half
        head, tail = half - k + 1, "z"
        string_len = half - k
    ops = {_a_site(L, head): tail, _b_site(L, head): tail}
    for j in range(1, string_len + 1):
        ops[_a_site(L, j)] = "x"
        ops[_b_site(L, j)] = "x"
    return ops


def nonlocal_factor(L: int, i: int) -> np.ndarray:
    """Single factor ``V_i``; indices beyond ``L`` wrap with period ``L``."""
    i = (i - 1) % L + 1
    p = pauli_string(L, factor_string(L, i))
    return (np.eye(2 ** L) - 1j * p) / np.sqrt(2)


def build_nonlocal_factor(L: int, n: int) -> np.ndarray:
    """Ordered product ``V_n ... V_1`` (the nonlocal part of ``U**n``)."""
    _check_L(L)
    if not 1 <= n <= 2 * L:
        raise ValueError(f"n must be in 1..{2 * L}, got {n}")
    out = np.eye(2 ** L, dtype=complex)
    for i in range(1, n + 1):
        out = nonlocal_factor(L, i) @ out
    return out
