"""Entangling power: exact linear version and Monte Carlo estimates.

The Monte Carlo average runs over Haar-random product states. Sample ``i``
is drawn from a Philox stream whose counter is offset by ``i``, so every
sample is reproducible on its own and the estimate does not depend on the
order (or chunking) in which samples are processed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .floquet import FieldConfig, build_floquet, floquet_powers
from .op_entanglement import (
    MeasureSeries,
    operator_entropies,
    swap_linear_entropy,
    zanardi_ep_l,
)
from .tensor_core import ZERO_CUTOFF, Bipartition, _resolve_cut

DEFAULT_SAMPLES = 2000
MIN_SAMPLES = 100
_CHUNK = 512
_U64 = 2 ** 64


@dataclass(frozen=True)
class EpEstimate:
    ep_l_exact: float
    ep_l_mc: float
    ep_vN_mc: float
    stderr_l: float
    stderr_vN: float
    samples: int
    seed: int


def ep_linear_exact(u: np.ndarray, cut: Bipartition | None = None) -> float:
    """Linear entangling power from operator entropies of ``U`` and ``US``."""
    cut = _resolve_cut(np.asarray(u).shape[0], cut)
    el, _, el_us = operator_entropies(u, cut)
    return float(zanardi_ep_l(el, el_us, cut.dim_a))


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample ``index`` of the stream keyed by ``seed``."""
    if not (0 <= seed < _U64):
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, index, 0, 0]))


def haar_state(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state on ``C^n`` (normalized complex Gaussian vector)."""
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z / np.linalg.norm(z)


def sample_haar_product_state(n: int, rng: np.random.Generator) -> np.ndarray:
    """``|psi_A> (x) |psi_B>`` with independent Haar factors on ``C^n``."""
    a = haar_state(n, rng)
    b = haar_state(n, rng)
    return np.kron(a, b)


def product_states(n: int, samples: int, seed: int, start: int = 0) -> np.ndarray:
    """Columns ``start..start+samples-1`` of the product-state stream."""
    out = np.empty((n * n, samples), dtype=complex)
    for k in range(samples):
        out[:, k] = sample_haar_product_state(n, sample_rng(seed, start + k))
    return out


def state_entropies(states: np.ndarray, cut: Bipartition) -> tuple[np.ndarray, np.ndarray]:
    """Linear and von Neumann (bits) entropies of ``rho_A`` for every column."""
    m = states.T.reshape(-1, cut.dim_a, cut.dim_b)
    p = np.linalg.svd(m, compute_uv=False) ** 2
    p = p / p.sum(axis=1, keepdims=True)
    lin = 1.0 - np.sum(p * p, axis=1)
    safe = np.where(p > ZERO_CUTOFF, p, 1.0)
    vn = -np.sum(np.where(p > ZERO_CUTOFF, p * np.log2(safe), 0.0), axis=1)
    return lin, vn + 0.0


def _mc_samples(u: np.ndarray, cut: Bipartition, states: np.ndarray):
    lin, vn = [], []
    for start in range(0, states.shape[1], _CHUNK):
        block = u @ states[:, start:start + _CHUNK]
        a, b = state_entropies(block, cut)
        lin.append(a)
        vn.append(b)
    return np.concatenate(lin), np.concatenate(vn)


def _mean_stderr(x: np.ndarray) -> tuple[float, float]:
    # np.mean on a contiguous 1-D array uses pairwise summation
    x = np.ascontiguousarray(x)
    mean = float(np.mean(x))
    err = float(np.std(x, ddof=1) / np.sqrt(x.size))
    return mean, err


def ep_monte_carlo(u: np.ndarray, cut: Bipartition | None = None,
                   samples: int = DEFAULT_SAMPLES, seed: int = 0,
                   states: np.ndarray | None = None) -> EpEstimate:
    """Average state entanglement of ``U |psi_A psi_B>`` over Haar product states.

    ``states`` may carry a precomputed sample matrix from
    :func:`product_states` (one column per sample) to reuse across operators.
    """
    u = np.asarray(u)
    cut = _resolve_cut(u.shape[0], cut)
    if cut.dim_a != cut.dim_b:
        raise ValueError("entangling power is defined here for equal halves")
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    if states is None:
        states = product_states(cut.dim_a, samples, seed)
    elif states.shape != (u.shape[0], samples):
        raise ValueError("precomputed states do not match operator/sample count")
    lin, vn = _mc_samples(u, cut, states)
    ep_l, err_l = _mean_stderr(lin)
    ep_vn, err_vn = _mean_stderr(vn)
    return EpEstimate(ep_linear_exact(u, cut), ep_l, ep_vn, err_l, err_vn, samples, seed)


def entangling_power_series(cfg: FieldConfig, n_max: int, samples: int = DEFAULT_SAMPLES,
                            seed: int = 0, n_min_mc: int = 0) -> MeasureSeries:
    """Full measure series with exact ``ep_l`` and Monte Carlo ``ep_vN``.

    The same product-state sample set is used for every ``n``. Rows with
    ``n < n_min_mc`` skip the Monte Carlo step and keep NaN in the ``ep_vN``
    columns.
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    u = build_floquet(cfg)
    cut = cfg.cut
    states = product_states(cut.dim_a, samples, seed)
    rows = []
    ep_vn = np.full(n_max + 1, np.nan)
    ep_err = np.full(n_max + 1, np.nan)
    for n, w in floquet_powers(u, n_max):
        rows.append(operator_entropies(w, cut))
        if n >= n_min_mc:
            _, vn = _mc_samples(w, cut, states)
            ep_vn[n], ep_err[n] = _mean_stderr(vn)
    rows = np.array(rows)
    return MeasureSeries(
        np.arange(n_max + 1), rows[:, 0], rows[:, 1], rows[:, 2],
        ep_l=zanardi_ep_l(rows[:, 0], rows[:, 2], cut.dim_a),
        ep_vN=ep_vn, ep_vN_stderr=ep_err,
    )


__all__ = [
    "EpEstimate",
    "ep_linear_exact",
    "ep_monte_carlo",
    "entangling_power_series",
    "haar_state",
    "product_states",
    "sample_haar_product_state",
    "sample_rng",
    "state_entropies",
    "swap_linear_entropy",
]
