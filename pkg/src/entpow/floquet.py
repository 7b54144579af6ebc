"""Kicked Ising Floquet operators.

The Floquet operator is ``U = exp(-i V tau) exp(-i H0 tau)`` with

* ``H0 = sum_bonds Z_j Z_{j+1} + sum_j hz_j Z_j`` (diagonal in the z basis),
* ``V = sum_j (hx_j X_j + hy_j Y_j)``.

Site 1 is the most significant qubit of the computational basis index, and
the half-chain cut puts sites ``1..L/2`` in subsystem A.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .tensor_core import Bipartition, kron

PRESETS = {
    "set-i": (1.0, 0.0, 0.0),
    "set-ni": (0.9045, 0.3457, 0.8090),
    "set-x": (1.0, 0.0, 1.0),
}
BOUNDARIES = ("open", "periodic")

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _as_fields(value, n_sites: int, name: str) -> tuple[float, ...]:
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.size == 1:
        arr = np.full(n_sites, float(arr[0]))
    if arr.shape != (n_sites,):
        raise ValueError(f"{name} must have length L={n_sites}, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return tuple(float(x) for x in arr)


@dataclass(frozen=True)
class FieldConfig:
    """Chain length, per-site fields, kick period and boundary condition.

    Scalar fields are broadcast to every site. ``preset`` is informational
    once the fields have been resolved; use :meth:`from_preset` to build one.
    """

    L: int
    tau: float
    hx: tuple[float, ...]
    hy: tuple[float, ...]
    hz: tuple[float, ...]
    boundary: str = "open"
    preset: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if not isinstance(self.L, (int, np.integer)) or self.L < 2 or self.L % 2:
            raise ValueError(f"L must be an even integer >= 2, got {self.L!r}")
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ValueError(f"tau must be positive, got {self.tau!r}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        for name in ("hx", "hy", "hz"):
            object.__setattr__(self, name, _as_fields(getattr(self, name), self.L, name))
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "tau", float(self.tau))

    @classmethod
    def from_preset(cls, name: str, L: int, tau: float, boundary: str = "open") -> "FieldConfig":
        key = name.lower()
        if key not in PRESETS:
            raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        hx, hy, hz = PRESETS[key]
        return cls(L, tau, hx, hy, hz, boundary=boundary, preset=key)

    @property
    def dim(self) -> int:
        return 2 ** self.L

    @property
    def cut(self) -> Bipartition:
        return Bipartition.half_chain(self.L)

    @property
    def is_reflection_symmetric(self) -> bool:
        return all(tuple(reversed(h)) == h for h in (self.hx, self.hy, self.hz))

    def bonds(self) -> list[tuple[int, int]]:
        """Zero-based site pairs coupled by the Ising term."""
        pairs = [(j, j + 1) for j in range(self.L - 1)]
        if self.boundary == "periodic" and self.L > 2:
            pairs.append((self.L - 1, 0))
        return pairs

    def to_dict(self) -> dict:
        d = {
            "L": self.L,
            "tau": self.tau,
            "hx": list(self.hx),
            "hy": list(self.hy),
            "hz": list(self.hz),
            "boundary": self.boundary,
        }
        if self.preset is not None:
            d["preset"] = self.preset
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FieldConfig":
        """Inverse of :meth:`to_dict`; a ``preset`` key overrides the field arrays."""
        boundary = d.get("boundary", "open")
        if d.get("preset"):
            return cls.from_preset(d["preset"], int(d["L"]), float(d["tau"]), boundary)
        return cls(int(d["L"]), float(d["tau"]), d["hx"], d["hy"], d["hz"], boundary=boundary)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "FieldConfig":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path: str | Path) -> "FieldConfig":
        return cls.from_json(Path(path).read_text())


def z_eigenvalues(n_sites: int) -> np.ndarray:
    """``Z_j`` eigenvalue (+1/-1) of every basis state, shape ``(2**L, L)``."""
    idx = np.arange(2 ** n_sites)[:, None]
    bits = (idx >> (n_sites - 1 - np.arange(n_sites))[None, :]) & 1
    return 1 - 2 * bits


def ising_energies(cfg: FieldConfig) -> np.ndarray:
    """Diagonal of ``H0`` in the computational basis."""
    z = z_eigenvalues(cfg.L)
    energy = z @ np.asarray(cfg.hz)
    for a, b in cfg.bonds():
        energy = energy + z[:, a] * z[:, b]
    return energy.astype(float)


def single_site_kick(hx: float, hy: float, tau: float) -> np.ndarray:
    """``exp(-i tau (hx X + hy Y))`` in closed form."""
    h = math.hypot(hx, hy)
    if h == 0.0:
        return np.eye(2, dtype=complex)
    return (math.cos(h * tau) * np.eye(2)
            - 1j * math.sin(h * tau) * (hx * SIGMA_X + hy * SIGMA_Y) / h)


def kick_operator(cfg: FieldConfig) -> np.ndarray:
    """``exp(-i V tau)`` as a Kronecker product of single-site rotations."""
    return kron(*(single_site_kick(x, y, cfg.tau) for x, y in zip(cfg.hx, cfg.hy)))


def build_floquet(cfg: FieldConfig) -> np.ndarray:
    """Floquet operator ``exp(-i V tau) exp(-i H0 tau)`` as a dense matrix."""
    phases = np.exp(-1j * cfg.tau * ising_energies(cfg))
    return kick_operator(cfg) * phases[None, :]


def floquet_power(u: np.ndarray, n: int) -> np.ndarray:
    """``u**n`` by binary powering; ``n = 0`` gives the identity."""
    if n < 0:
        raise ValueError("power must be nonnegative")
    return np.linalg.matrix_power(np.asarray(u), int(n))


def floquet_powers(u: np.ndarray, n_max: int):
    """Yield ``(n, u**n)`` for ``n = 0..n_max`` by repeated multiplication."""
    w = np.eye(u.shape[0], dtype=complex)
    yield 0, w
    for n in range(1, n_max + 1):
        w = u @ w
        yield n, w
