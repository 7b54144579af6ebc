"""Random matrix reference model.

The hybrid model keeps the single Ising bond across the cut,
``U_AB(tau) = exp(-i tau Z_{L/2} Z_{L/2+1})``, and replaces the block
dynamics by Haar-random unitaries:

    W_n = (u_A^n (x) u_B^n) U_AB ... (u_A^1 (x) u_B^1) U_AB

Besides sampling, this module provides the closed-form growth laws and an
exact second-moment recursion for the averaged linear entropies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .op_entanglement import format_csv, operator_entropies, swap_linear_entropy, zanardi_ep_l
from .tensor_core import Bipartition

MODES = ("fresh", "shared", "frozen")


def sample_cue(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Ginibre matrix."""
    if n < 1:
        raise ValueError("dimension must be positive")
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))[None, :]


def sample_coe(n: int, rng: np.random.Generator) -> np.ndarray:
    """Circular orthogonal ensemble member ``W^T W`` with ``W`` from the CUE."""
    w = sample_cue(n, rng)
    return w.T @ w


def ep_l_bar(n: int) -> float:
    """Haar average of the linear entangling power on ``C^n (x) C^n``."""
    return (n - 1) ** 2 / (n ** 2 + 1)


def el_bar(n: int) -> float:
    """Haar average of the operator linear entropy."""
    return (n ** 2 - 1) / (n ** 2 + 1)


def evn_bar(n: int) -> float:
    """Approximate Haar average of the operator von Neumann entropy (bits)."""
    return 2 * math.log2(n) - 1 / (2 * math.log(2))


def ep_vn_bar(n: int) -> float:
    """Page value for a random pure state on ``C^n (x) C^n`` (bits).

    This is the reference level the von Neumann entangling power saturates
    close to; no exact Haar average is known.
    """
    return math.log2(n) - 1 / (2 * math.log(2))


def growth_constant(n: int) -> float:
    return n ** 2 * (n ** 2 + 1) / (n ** 2 - 1) ** 2


@dataclass(frozen=True)
class RmtPrediction:
    n: int
    ep_l_pred: float
    el_pred: float
    ep_l_bar: float
    el_bar: float
    evn_bar: float


def rmt_predictions(tau: float, N: int, n: int) -> RmtPrediction:
    """Closed-form averages after ``n`` steps for local dimension ``N``."""
    if N <= 1:
        raise ValueError("local dimension must exceed 1")
    s2 = math.sin(2 * tau) ** 2
    epb = ep_l_bar(N)
    ep = epb * (1 - (1 - growth_constant(N) / 2 * s2) ** n)
    el = 1 - (1 - s2 / 2) ** n
    return RmtPrediction(n, ep, el, epb, el_bar(N), evn_bar(N))


def bond_linear_entropies(tau: float, N: int) -> tuple[float, float]:
    """``(E_l(U_AB), E_l(U_AB S))`` for the single crossing bond."""
    return 0.5 * math.sin(2 * tau) ** 2, swap_linear_entropy(N)


def exact_linear_averages(tau: float, N: int, n_max: int,
                          bond: tuple[float, float] | None = None) -> dict[str, np.ndarray]:
    """Exact ``<E_l(W_n)>``, ``<E_l(W_n S)>`` and ``<ep_l(W_n)>`` for fresh locals.

    Operator purities are quadratic in ``W``, so the Haar average over one
    pair of locals is a two-copy twirl. In terms of ``a = 1 - E_l(W)`` and
    ``b = 1 - E_l(WS)`` a step is an affine map whose coefficients follow
    from the U(N) Weingarten function and the bond entropies. ``bond`` may
    override the closed-form bond entropies.
    """
    if N <= 1:
        raise ValueError("local dimension must exceed 1")
    e_bond, e_bond_s = bond if bond is not None else bond_linear_entropies(tau, N)
    a0, b0 = 1.0 - e_bond, 1.0 - e_bond_s
    w1 = 1.0 / (N ** 2 - 1)
    w2 = -1.0 / (N * (N ** 2 - 1))
    wg = np.array([[w1, w2], [w2, w1]])
    # rows: A-copy permutation (I, F); columns: B-copy permutation (I, F)
    g_direct = np.array([[1 / N, b0], [a0, 1 / N]])
    g_swapped = np.array([[1 / N, a0], [b0, 1 / N]])
    a, b = 1.0, 1.0 / N ** 2
    el = [0.0]
    el_us = [1.0 - b]
    for _ in range(n_max):
        traces = np.array([[N ** 3, N ** 4 * b], [N ** 4 * a, N ** 3]])
        coeff = wg @ traces @ wg
        a, b = float(np.sum(coeff * g_direct)), float(np.sum(coeff * g_swapped))
        el.append(1.0 - a)
        el_us.append(1.0 - b)
    el, el_us = np.array(el), np.array(el_us)
    return {"E_l": el, "E_l_US": el_us, "ep_l": zanardi_ep_l(el, el_us, N)}


def bond_diagonal(L: int) -> np.ndarray:
    """Diagonal of ``Z_{L/2} Z_{L/2+1}`` on the ``2**L`` dimensional chain."""
    if L < 2 or L % 2:
        raise ValueError("L must be even")
    n = 2 ** (L // 2)
    idx = np.arange(n)
    z_a = 1 - 2 * (idx & 1)  # last site of A is its least significant bit
    z_b = 1 - 2 * ((idx >> (L // 2 - 1)) & 1)  # first site of B is its most significant
    return np.kron(z_a, z_b).astype(float)


@dataclass
class RmtSeries:
    """Ensemble means and standard errors of the measures for ``n = 0..n_max``."""

    n: np.ndarray
    mean: dict[str, np.ndarray]
    stderr: dict[str, np.ndarray]
    tau: float
    L: int
    realizations: int
    seed: int
    mode: str = "fresh"
    samples: np.ndarray | None = field(default=None, repr=False)

    @property
    def N(self) -> int:
        return 2 ** (self.L // 2)

    def predictions(self) -> dict[str, np.ndarray]:
        preds = [rmt_predictions(self.tau, self.N, int(k)) for k in self.n]
        exact = exact_linear_averages(self.tau, self.N, int(self.n[-1]))
        return {
            "pred_ep_l": np.array([p.ep_l_pred for p in preds]),
            "pred_E_l": np.array([p.el_pred for p in preds]),
            "pred_E_l_exact": exact["E_l"],
            "pred_E_l_US_exact": exact["E_l_US"],
        }

    def to_csv(self, header_comment: str | None = None) -> str:
        nan = np.full(len(self.n), np.nan)
        cols = {
            "n": self.n,
            "E_l": self.mean["E_l"],
            "E_vN": self.mean["E_vN"],
            "E_l_US": self.mean["E_l_US"],
            "ep_l": self.mean["ep_l"],
            "ep_vN": nan,
            "ep_vN_stderr": nan,
        }
        for k in ("E_l", "E_vN", "E_l_US", "ep_l"):
            cols[f"{k}_stderr"] = self.stderr[k]
        cols.update(self.predictions())
        return format_csv(cols, header_comment)


def _trajectory(tau: float, L: int, n_max: int, rng: np.random.Generator, mode: str) -> np.ndarray:
    n = 2 ** (L // 2)
    cut = Bipartition(n, n)
    bond = np.exp(-1j * tau * bond_diagonal(L))
    w = np.eye(n * n, dtype=complex)
    out = np.zeros((n_max + 1, 4))
    out[0] = (0.0, 0.0, swap_linear_entropy(n), 0.0)
    frozen = None
    for k in range(1, n_max + 1):
        if mode == "frozen":
            if frozen is None:
                frozen = np.kron(sample_cue(n, rng), sample_cue(n, rng))
            local = frozen
        elif mode == "shared":
            ua = sample_cue(n, rng)
            local = np.kron(ua, ua)
        else:
            local = np.kron(sample_cue(n, rng), sample_cue(n, rng))
        w = local @ (bond[:, None] * w)
        el, evn, el_us = operator_entropies(w, cut)
        out[k] = (el, evn, el_us, zanardi_ep_l(el, el_us, n))
    return out


def rmt_trajectory(tau: float, L: int, n_max: int, realizations: int = 50,
                   seed: int = 0, mode: str = "fresh") -> RmtSeries:
    """Ensemble-averaged measures of the hybrid random-local model.

    ``mode`` selects the local unitaries: ``"fresh"`` (independent u_A, u_B
    each step), ``"shared"`` (u_A = u_B, fresh each step) or ``"frozen"``
    (one pair reused for all steps). Realization ``r`` is seeded from child
    ``r`` of ``SeedSequence(seed)``.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if L < 2 or L % 2:
        raise ValueError("L must be even")
    if realizations < 2:
        raise ValueError("need at least two realizations for a standard error")
    children = np.random.SeedSequence(seed).spawn(realizations)
    data = np.stack([_trajectory(tau, L, n_max, np.random.default_rng(c), mode) for c in children])
    keys = ("E_l", "E_vN", "E_l_US", "ep_l")
    mean = {k: data[:, :, i].mean(axis=0) for i, k in enumerate(keys)}
    stderr = {k: data[:, :, i].std(axis=0, ddof=1) / math.sqrt(realizations)
              for i, k in enumerate(keys)}
    return RmtSeries(np.arange(n_max + 1), mean, stderr, tau, L, realizations, seed, mode, data)
