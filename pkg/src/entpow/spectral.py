"""Eigenphase statistics of Floquet operators.

Reflection parity (site ``j <-> L+1-j``, i.e. bit reversal of the basis
index) is used to desymmetrize the spectrum. Floquet eigenphases have a
uniform mean density, so unfolding is a plain rescaling by ``d / 2pi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .floquet import FieldConfig, build_floquet, ising_energies, kick_operator, z_eigenvalues
from .tensor_core import eigenphases_unitary

MIN_PHASES = 50
DEFAULT_ORIGINS = 512
# fractional offset of the window origins; keeps origins off lattice points
_ORIGIN_OFFSET = (math.sqrt(5) - 1) / 2


class SymmetryError(ValueError):
    """Operator does not commute with the requested symmetry."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass
class SpectralReport:
    sector_label: str
    phases: np.ndarray
    spacings: np.ndarray
    ratios: np.ndarray
    mean_ratio: float
    sigma2: list[tuple[float, float]] = field(default_factory=list)


def reflection_permutation(L: int) -> np.ndarray:
    """Bit-reversal map ``x -> R(x)`` on ``2**L`` basis indices."""
    x = np.arange(2 ** L)
    rx = np.zeros_like(x)
    for j in range(L):
        rx |= ((x >> j) & 1) << (L - 1 - j)
    return rx


def parity_basis(L: int):
    """Representatives of reflection orbits.

    Returns ``(reps, mirrors, palindromic)``: the even sector is spanned by
    ``(|x> + |R x>)/sqrt(2)`` (or ``|x>`` for palindromes) and the odd sector
    by ``(|x> - |R x>)/sqrt(2)`` over non-palindromic representatives.
    """
    rx = reflection_permutation(L)
    x = np.arange(2 ** L)
    reps = x[x <= rx]
    mirrors = rx[reps]
    return reps, mirrors, mirrors == reps


def _project(u: np.ndarray, reps, mirrors, weights) -> np.ndarray:
    # columns then rows of P^T U P with P having entries at reps and mirrors
    cols = u[:, reps] * weights[0][None, :] + u[:, mirrors] * weights[1][None, :]
    return weights[0][:, None] * cols[reps, :] + weights[1][:, None] * cols[mirrors, :]


def parity_sectors(u: np.ndarray, cfg: FieldConfig | None = None, L: int | None = None,
                   atol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Restrict ``u`` to the even and odd reflection sectors."""
    u = np.asarray(u)
    if L is None:
        if cfg is None:
            L = int(round(math.log2(u.shape[0])))
        else:
            L = cfg.L
    if u.shape != (2 ** L, 2 ** L):
        raise ValueError(f"operator shape {u.shape} does not match L={L}")
    if cfg is not None and not cfg.is_reflection_symmetric:
        raise SymmetryError("fields are not reflection symmetric", float("nan"))
    rx = reflection_permutation(L)
    residual = float(np.abs(u[np.ix_(rx, rx)] - u).max())
    if not residual < atol:
        raise SymmetryError(f"operator breaks reflection symmetry: |RUR - U|_max = {residual:.3e}",
                            residual)
    reps, mirrors, pal = parity_basis(L)
    s = 1 / math.sqrt(2)
    w_even = np.where(pal, 0.5, s), np.where(pal, 0.5, s)
    u_even = _project(u, reps, mirrors, w_even)
    odd_reps, odd_mirrors = reps[~pal], mirrors[~pal]
    ones = np.full(odd_reps.size, s)
    u_odd = _project(u, odd_reps, odd_mirrors, (ones, -ones))
    return u_even, u_odd


def sector_dimensions(L: int) -> tuple[int, int]:
    even = (2 ** L + 2 ** ((L + 1) // 2)) // 2
    return even, 2 ** L - even


def unfold(phases: np.ndarray) -> np.ndarray:
    """Positions on a circle of circumference ``len(phases)``."""
    phases = np.sort(np.mod(np.asarray(phases, dtype=float), 2 * np.pi))
    return phases * phases.size / (2 * np.pi)


def spacing_statistics(phases, sector_label: str = "full") -> SpectralReport:
    """Unfolded nearest-neighbour spacings (cyclic) and consecutive-gap ratios."""
    phases = np.sort(np.mod(np.asarray(phases, dtype=float), 2 * np.pi))
    d = phases.size
    if d < MIN_PHASES:
        raise ValueError(f"need at least {MIN_PHASES} phases, got {d}")
    gaps = np.diff(np.append(phases, phases[0] + 2 * np.pi))
    spacings = gaps * d / (2 * np.pi)
    nxt = np.roll(spacings, -1)
    hi = np.maximum(spacings, nxt)
    lo = np.minimum(spacings, nxt)
    ratios = np.divide(lo, hi, out=np.ones_like(hi), where=hi > 0)
    return SpectralReport(sector_label, phases, spacings, ratios, float(np.mean(ratios)))


def number_variance(phases, r_values, n_origins: int = DEFAULT_ORIGINS) -> list[tuple[float, float]]:
    """Number variance ``Sigma^2(r)`` of the unfolded eigenphases.

    For each window length ``r`` (in mean spacings) the level count is taken
    over ``n_origins`` equally spaced window starts around the circle, with
    cyclic wrap-around.
    """
    x = unfold(phases)
    d = x.size
    ext = np.concatenate([x, x + d])
    origins = (np.arange(n_origins) + _ORIGIN_OFFSET) * d / n_origins
    lo = np.searchsorted(ext, origins, side="left")
    out = []
    for r in np.atleast_1d(np.asarray(r_values, dtype=float)):
        if not 0 < r <= d:
            raise ValueError(f"window {r} outside (0, {d}]")
        counts = np.searchsorted(ext, origins + r, side="left") - lo
        out.append((float(r), float(np.mean((counts - r) ** 2))))
    return out


def spectral_report(u: np.ndarray, sector_label: str = "full", r_values=None) -> SpectralReport:
    phases = eigenphases_unitary(u)
    report = spacing_statistics(phases, sector_label)
    if r_values is not None:
        report.sigma2 = number_variance(phases, r_values)
    return report


def analyze_floquet(cfg: FieldConfig, sector: str = "even", r_values=None) -> SpectralReport:
    """Build ``U(cfg)``, optionally desymmetrize, and collect statistics."""
    u = build_floquet(cfg)
    if sector in ("even", "odd"):
        u_even, u_odd = parity_sectors(u, cfg)
        u = u_even if sector == "even" else u_odd
    elif sector != "full":
        raise ValueError("sector must be 'even', 'odd' or 'full'")
    return spectral_report(u, sector, r_values)


def field_first_floquet(cfg: FieldConfig) -> np.ndarray:
    """``exp(-i H0 tau) exp(-i V tau)``, the half-period shifted Floquet operator.

    It equals ``K^dag U K`` with ``K = exp(-i V tau)``, so it shares the
    spectrum of :func:`build_floquet`.
    """
    phases = np.exp(-1j * cfg.tau * ising_energies(cfg))
    return phases[:, None] * kick_operator(cfg)


def false_trs_diagonal(cfg: FieldConfig, symmetry: str = "full") -> np.ndarray:
    """Diagonal of the unitary ``G`` in the antiunitary symmetry ``T = G K``.

    ``"ising"`` is ``exp(-i tau H0)`` alone; ``"full"`` adds the z rotations
    ``exp(-i theta_j Z_j)`` with ``theta_j = atan2(hy_j, hx_j)`` that map
    ``hx X - hy Y`` onto ``hx X + hy Y``; ``"identity"`` is the negative control.
    """
    d = cfg.dim
    if symmetry == "identity":
        return np.ones(d, dtype=complex)
    g = np.exp(-1j * cfg.tau * ising_energies(cfg))
    if symmetry == "ising":
        return g
    if symmetry != "full":
        raise ValueError("symmetry must be 'full', 'ising' or 'identity'")
    theta = np.arctan2(cfg.hy, cfg.hx)
    return np.exp(-1j * (z_eigenvalues(cfg.L) @ theta)) * g


def check_false_trs(cfg: FieldConfig, symmetry: str = "full") -> float:
    """``|G U* G^-1 - U^dag|_max`` for the field-first Floquet operator.

    A residual at round-off level certifies a time-reversal-like symmetry
    (orthogonal class) even when the kick contains ``Y`` terms.
    """
    u = field_first_floquet(cfg)
    g = false_trs_diagonal(cfg, symmetry)
    lhs = g[:, None] * u.conj() * g.conj()[None, :]
    return float(np.abs(lhs - u.conj().T).max())


def floquet_trs_operator(cfg: FieldConfig, symmetry: str = "full") -> np.ndarray:
    """Symmetry ``G`` transported to :func:`build_floquet`'s ordering: ``K G_s K^T``."""
    k = kick_operator(cfg)
    g = false_trs_diagonal(cfg, symmetry)
    return (k * g[None, :]) @ k.T
