"""Dense complex linear algebra over bipartite spaces.

All routines take and return plain ``numpy.ndarray`` objects. A bipartite
operator of dimension ``N**2`` is indexed as ``U[(a, b), (a2, b2)]`` with the
A index most significant, i.e. flat index ``a * N + b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy import linalg

#: default tolerance for the unitarity check on construction
UNITARY_ATOL = 1e-10
#: singular values (and Schmidt weights) below this are treated as zero
ZERO_CUTOFF = 1e-12


@dataclass(frozen=True)
class Bipartition:
    """Split of a space into two factors of dimension ``dim_a`` and ``dim_b``."""

    dim_a: int
    dim_b: int

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValueError("bipartition factors must be positive")

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    @classmethod
    def halves(cls, dim: int) -> "Bipartition":
        """Equal cut of a space of dimension ``dim`` (must be a perfect square)."""
        n = int(round(np.sqrt(dim)))
        if n * n != dim:
            raise ValueError(f"dimension {dim} is not a perfect square")
        return cls(n, n)

    @classmethod
    def half_chain(cls, n_sites: int) -> "Bipartition":
        if n_sites % 2:
            raise ValueError("half-chain cut needs an even number of sites")
        n = 2 ** (n_sites // 2)
        return cls(n, n)


def _resolve_cut(dim: int, cut: Bipartition | None) -> Bipartition:
    if cut is None:
        return Bipartition.halves(dim)
    if cut.dim != dim:
        raise ValueError(f"cut {cut.dim_a}x{cut.dim_b} does not match dimension {dim}")
    return cut


def unitarity_residual(u: np.ndarray) -> float:
    """Max-norm of ``U^dagger U - I``."""
    u = np.asarray(u)
    return float(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max())


def is_unitary(u: np.ndarray, atol: float = UNITARY_ATOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return unitarity_residual(u) < atol


def check_unitary(u: np.ndarray, atol: float = UNITARY_ATOL) -> np.ndarray:
    """Return ``u`` unchanged, raising ``ValueError`` if it is not unitary."""
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    res = unitarity_residual(u)
    if not res < atol:
        raise ValueError(f"matrix is not unitary: |U^dag U - I|_max = {res:.3e}")
    return u


def kron(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left factor most significant."""
    if not factors:
        raise ValueError("kron needs at least one factor")
    return reduce(np.kron, factors)


def realign(u: np.ndarray, cut: Bipartition | None = None) -> np.ndarray:
    """Reshuffle ``U[(a,b),(a2,b2)]`` into ``R[(a,a2),(b,b2)]``.

    The singular values of the result are the operator Schmidt coefficients
    of ``u`` across ``cut``. Applying ``realign`` twice returns ``u`` when the
    two factors have equal dimension.
    """
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    cut = _resolve_cut(u.shape[0], cut)
    na, nb = cut.dim_a, cut.dim_b
    return u.reshape(na, nb, na, nb).transpose(0, 2, 1, 3).reshape(na * na, nb * nb)


def svd_singular_values(m: np.ndarray) -> np.ndarray:
    """Singular values of ``m`` in nonincreasing order."""
    m = np.asarray(m)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return linalg.svdvals(m, check_finite=False)


def partial_trace_b(psi: np.ndarray, cut: Bipartition | None = None,
                    atol: float = 1e-8) -> np.ndarray:
    """Reduced density matrix of subsystem A for the pure state ``psi``."""
    psi = np.asarray(psi).reshape(-1)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > atol:
        raise ValueError(f"state is not normalized (|psi| = {norm:.12g})")
    cut = _resolve_cut(psi.size, cut)
    m = psi.reshape(cut.dim_a, cut.dim_b)
    rho = m @ m.conj().T
    return 0.5 * (rho + rho.conj().T)


def eigenphases_unitary(u: np.ndarray, atol: float = 1e-9) -> np.ndarray:
    """Sorted eigenphases of a unitary matrix, in ``[0, 2*pi)``.

    Uses the general complex eigensolver (Hessenberg/Schur reduction).
    """
    u = check_unitary(u, atol=atol)
    theta = np.angle(linalg.eigvals(u, check_finite=False))
    theta = np.where(theta < 0, theta + 2 * np.pi, theta)
    theta[theta >= 2 * np.pi] = 0.0
    return np.sort(theta)
