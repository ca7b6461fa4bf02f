"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the package's own kernels: Pauli strings
are realized with ``np.kron`` of 2x2 matrices and exponentials with a
Taylor scaling-and-squaring loop.
"""
from functools import reduce

import numpy as np
import pytest

PAULI_2X2 = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_label(label):
    """Dense matrix of a Pauli label, site 0 leftmost."""
    return reduce(np.kron, [PAULI_2X2[c] for c in label])


def kron_sites(n, ops):
    return kron_label("".join(ops.get(k, "I") for k in range(n)))


def expm_taylor(a, terms=30):
    """``exp(a)`` by scaling and squaring with a truncated Taylor series."""
    norm = np.linalg.norm(a, 1)
    s = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0 else 0
    b = a / 2**s
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ b / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def loglog_slope(x, y):
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def random_hermitian(rng, d, scale=1.0):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * (a + a.conj().T) / 2


def random_unitary(rng, d):
    q, r = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def dense_mfi(n, J=1.0, hz=1.1, hx=1.07, periodic=False):
    """Hand-assembled MFI blocks from Kronecker products."""
    d = 2**n
    h1 = np.zeros((d, d), dtype=complex)
    h2 = np.zeros((d, d), dtype=complex)
    bonds = [(i, i + 1) for i in range(n - 1)] + ([(n - 1, 0)] if periodic else [])
    for i, j in bonds:
        h1 += J * kron_sites(n, {i: "Z", j: "Z"})
    for i in range(n):
        h1 += hz * kron_sites(n, {i: "Z"})
        h2 += hx * kron_sites(n, {i: "X"})
    return h1, h2


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def acceptance_report(request):
    log = request.config.__dict__.setdefault("_acceptance_lines", [])

    def report(criterion, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
        log.append(line)
        print(line)

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
