import math

import numpy as np
import pytest

from entpow.rmt import sample_cue

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)


def haar(n, seed):
    return sample_cue(n, np.random.default_rng(seed))


def expm_hermitian(h, t=1.0):
    """``exp(-i t h)`` through the eigendecomposition of a Hermitian ``h``."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * t * w)[None, :]) @ v.conj().T


def brute_realign(u, n):
    """Loop-based realignment ``R[(a,a2),(b,b2)] = U[(a,b),(a2,b2)]``."""
    r = np.zeros((n * n, n * n), dtype=complex)
    for a in range(n):
        for b in range(n):
            for a2 in range(n):
                for b2 in range(n):
                    r[a * n + a2, b * n + b2] = u[a * n + b, a2 * n + b2]
    return r


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


PI4 = math.pi / 4


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    """Record one ``PASS``/``FAIL`` line per acceptance criterion, then assert."""

    def record(label, ok, detail=""):
        line = f"{label}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
