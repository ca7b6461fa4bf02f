"""Dense kernels: Hermitian eigensystems, exponentials, norms, unitary powers."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg


class NotHermitianError(ValueError):
    pass


class NotUnitaryError(ValueError):
    pass


@dataclass(frozen=True)
class DegeneracyPolicy:
    """Gap thresholds used to decide when two eigenvalues coincide.

    Consecutive sorted eigenvalues closer than
    ``max(atol, rtol * spectral_range)`` belong to the same block; blocks are
    the transitive closure of that relation.
    """

    atol: float = 1e-10
    rtol: float = 1e-12

    def __post_init__(self):
        if self.atol < 0 or self.rtol < 0:
            raise ValueError("tolerances must be nonnegative")

    def threshold(self, values: np.ndarray) -> float:
        spread = float(values[-1] - values[0]) if len(values) else 0.0
        return max(self.atol, self.rtol * spread)


DEFAULT_POLICY = DegeneracyPolicy()


def group_labels(values: np.ndarray, policy: DegeneracyPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Block label per (ascending) eigenvalue."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return np.zeros(0, dtype=int)
    breaks = np.diff(values) > policy.threshold(values)
    return np.concatenate([[0], np.cumsum(breaks)]).astype(int)


@dataclass(frozen=True, eq=False)
class Eigensystem:
    """Eigenvalues (ascending) and column eigenvectors of a Hermitian matrix."""

    values: np.ndarray
    vectors: np.ndarray
    policy: DegeneracyPolicy = DEFAULT_POLICY
    labels: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", group_labels(self.values, self.policy))

    @property
    def dim(self) -> int:
        return len(self.values)

    @property
    def degeneracy_groups(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.labels == b) for b in range(int(self.labels[-1]) + 1)]

    def labels_for(self, policy: DegeneracyPolicy | None) -> np.ndarray:
        if policy is None or policy == self.policy:
            return self.labels
        return group_labels(self.values, policy)

    def to_eigenbasis(self, op: np.ndarray) -> np.ndarray:
        v = self.vectors
        return v.conj().T @ op @ v

    def from_eigenbasis(self, op: np.ndarray) -> np.ndarray:
        v = self.vectors
        return v @ op @ v.conj().T

    def matrix(self) -> np.ndarray:
        return self.from_eigenbasis(np.diag(self.values).astype(complex))


def hermitian_eig(h: np.ndarray, policy: DegeneracyPolicy = DEFAULT_POLICY) -> Eigensystem:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    scale = np.linalg.norm(h)
    if np.linalg.norm(h - h.conj().T) > 1e-10 * max(scale, 1.0):
        raise NotHermitianError("matrix is not Hermitian")
    try:
        w, v = scipy.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise RuntimeError("eigensolver did not converge") from exc
    return Eigensystem(w, v.astype(complex, copy=False), policy)


def evolve(es: Eigensystem, t: float) -> np.ndarray:
    """``exp(-i H t)`` from the eigensystem of ``H``."""
    phases = np.exp(-1j * es.values * t)
    return (es.vectors * phases) @ es.vectors.conj().T


def spectral_norm(a: np.ndarray) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(scipy.linalg.svdvals(a)[0])


def frobenius_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))


def unitary_power(u: np.ndarray, r: int) -> np.ndarray:
    """``u**r`` by repeated squaring, refusing to return a drifted result."""
    if r < 0:
        raise ValueError("power must be nonnegative")
    d = u.shape[0]
    if unitarity_defect(u) > 1e-10 * np.sqrt(d):
        raise NotUnitaryError("input is not unitary to 1e-10")
    out = np.linalg.matrix_power(u, r)
    if unitarity_defect(out) > 1e-8 * np.sqrt(d):
        raise NotUnitaryError(f"unitarity drift exceeded after power {r}")
    return out
