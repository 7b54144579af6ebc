"""Operator Schmidt spectra and operator entanglement entropies."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .floquet import FieldConfig, build_floquet, floquet_powers
from .tensor_core import ZERO_CUTOFF, Bipartition, _resolve_cut, realign, svd_singular_values

SERIES_COLUMNS = ("n", "E_l", "E_vN", "E_l_US", "ep_l", "ep_vN", "ep_vN_stderr")


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Normalized operator Schmidt weights, largest first.

    ``operators`` is only populated by ``operator_schmidt_spectrum(..., full=True)``
    and holds ``(A, B)`` stacks with ``U = N * sum_i sqrt(w_i) A_i (x) B_i``
    (A_i, B_i orthonormal in the Hilbert-Schmidt inner product).
    """

    weights: np.ndarray
    cut: Bipartition
    operators: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.weights > ZERO_CUTOFF))


def operator_schmidt_spectrum(u: np.ndarray, cut: Bipartition | None = None,
                              full: bool = False) -> SchmidtSpectrum:
    u = np.asarray(u)
    cut = _resolve_cut(u.shape[0], cut)
    r = realign(u, cut)
    if full:
        left, s, right = np.linalg.svd(r, full_matrices=False)
    else:
        s = svd_singular_values(r)
    s = np.where(s < ZERO_CUTOFF, 0.0, s)
    s2 = s * s
    weights = s2 / s2.sum()
    ops = None
    if full:
        na, nb = cut.dim_a, cut.dim_b
        ops = (left.T.reshape(-1, na, na), right.reshape(-1, nb, nb))
    return SchmidtSpectrum(weights, cut, ops)


def linear_entropy(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float)
    return float(1.0 - np.sum(p * p))


def von_neumann_entropy(p: np.ndarray) -> float:
    """Shannon entropy of a probability vector, in bits."""
    p = np.asarray(p, dtype=float)
    p = p[p > ZERO_CUTOFF]
    return float(-np.sum(p * np.log2(p))) + 0.0


def entanglement_entropies(spectrum: SchmidtSpectrum) -> tuple[float, float]:
    """Return ``(E_l, E_vN)``; E_vN in bits."""
    w = spectrum.weights
    w = w[w > ZERO_CUTOFF]
    return linear_entropy(w), von_neumann_entropy(w)


def swap_permutation(n: int) -> np.ndarray:
    """Index map ``perm`` with ``S e_j = e_{perm[j]}`` for the swap on C^n (x) C^n."""
    idx = np.arange(n * n)
    a, b = np.divmod(idx, n)
    return b * n + a


def swap_operator(n: int) -> np.ndarray:
    """Swap ``S|a>|b> = |b>|a>`` on ``C^n (x) C^n``."""
    if n < 2:
        raise ValueError("swap needs local dimension >= 2")
    s = np.zeros((n * n, n * n), dtype=complex)
    s[swap_permutation(n), np.arange(n * n)] = 1.0
    return s


def times_swap(u: np.ndarray, cut: Bipartition | None = None) -> np.ndarray:
    """``u @ S`` computed as a column permutation."""
    cut = _resolve_cut(u.shape[0], cut)
    if cut.dim_a != cut.dim_b:
        raise ValueError("swap requires equal halves")
    return u[:, swap_permutation(cut.dim_a)]


def swap_linear_entropy(n: int) -> float:
    """Operator linear entropy of the swap on ``C^n (x) C^n``."""
    return 1.0 - 1.0 / n ** 2


def operator_entropies(u: np.ndarray, cut: Bipartition | None = None) -> tuple[float, float, float]:
    """``(E_l(U), E_vN(U), E_l(US))`` for one operator."""
    cut = _resolve_cut(u.shape[0], cut)
    el, evn = entanglement_entropies(operator_schmidt_spectrum(u, cut))
    el_us, _ = entanglement_entropies(operator_schmidt_spectrum(times_swap(u, cut), cut))
    return el, evn, el_us


@dataclass
class MeasureSeries:
    """Per-kick entanglement records. Missing entangling-power data is NaN."""

    n: np.ndarray
    E_l: np.ndarray
    E_vN: np.ndarray
    E_l_US: np.ndarray
    ep_l: np.ndarray = None
    ep_vN: np.ndarray = None
    ep_vN_stderr: np.ndarray = None

    def __post_init__(self):
        size = len(self.n)
        for name in ("ep_l", "ep_vN", "ep_vN_stderr"):
            if getattr(self, name) is None:
                setattr(self, name, np.full(size, np.nan))

    def columns(self) -> dict[str, np.ndarray]:
        return {c: np.asarray(getattr(self, c)) for c in SERIES_COLUMNS}

    def to_csv(self, header_comment: str | None = None, extra: dict | None = None) -> str:
        cols = self.columns()
        if extra:
            cols.update(extra)
        return format_csv(cols, header_comment)


def format_float(x) -> str:
    """Round-trip exact representation (17 significant digits); NaN is empty."""
    x = float(x)
    if np.isnan(x):
        return ""
    return f"{x:.17g}"


def format_csv(columns: dict[str, np.ndarray], header_comment: str | None = None) -> str:
    buf = io.StringIO()
    if header_comment:
        buf.write(f"# {header_comment}\n")
    names = list(columns)
    buf.write(",".join(names) + "\n")
    rows = zip(*(np.asarray(columns[k]) for k in names))
    for row in rows:
        cells = [str(int(v)) if k == "n" else format_float(v) for k, v in zip(names, row)]
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def measure_series(cfg: FieldConfig, n_max: int, with_ep_l: bool = True) -> MeasureSeries:
    """Operator entanglement of ``U**n`` and ``U**n S`` for ``n = 0..n_max``.

    When ``with_ep_l`` is set, the linear entangling power is filled in from
    the two linear entropies (no extra decompositions needed).
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    u = build_floquet(cfg)
    cut = cfg.cut
    rows = np.array([operator_entropies(w, cut) for _, w in floquet_powers(u, n_max)])
    n = np.arange(n_max + 1)
    series = MeasureSeries(n, rows[:, 0], rows[:, 1], rows[:, 2])
    if with_ep_l:
        series.ep_l = zanardi_ep_l(series.E_l, series.E_l_US, cut.dim_a)
    return series


def zanardi_ep_l(el, el_us, n: int):
    """Linear entangling power from ``E_l(U)`` and ``E_l(US)``."""
    return n ** 2 / (n + 1) ** 2 * (np.asarray(el) + np.asarray(el_us) - swap_linear_entropy(n))
