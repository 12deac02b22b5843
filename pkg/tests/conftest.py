from __future__ import annotations

import sys

import numpy as np
import pytest


def loop_form(A, x) -> float:
    """sum_ij a_ij conj(x_i) x_j by explicit loops."""
    n = len(x)
    total = 0j
    for i in range(n):
        for j in range(n):
            total += A[i][j] * np.conj(x[i]) * x[j]
    return total.real


def loop_tilde(x, complex_: bool) -> list[float]:
    """Tilde coordinates written out slot by slot, block by block."""
    n = len(x)
    out = []
    for i in range(n):
        out.append(abs(x[i]) ** 2)
        for j in range(i + 1, n):
            z = np.conj(x[i]) * x[j]
            if complex_:
                out += [z.real, z.imag]
            else:
                out.append(z.real)
    return out


def rand_hermitian(rng, n, complex_: bool) -> np.ndarray:
    G = rng.standard_normal((n, n))
    if complex_:
        G = G + 1j * rng.standard_normal((n, n))
    return (G + G.conj().T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(acc.RESULTS):
        terminalreporter.write_line(acc.RESULTS[k])
