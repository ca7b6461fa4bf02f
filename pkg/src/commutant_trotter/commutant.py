"""Commutant decomposition relative to a Hermitian ``H``.

Every operator splits uniquely as ``O = O_par + O_perp`` where ``O_par``
commutes with ``H`` and ``O_perp`` is Hilbert-Schmidt orthogonal to the
commutant. In the eigenbasis of ``H`` the split is a mask: entries whose row
and column fall in the same degeneracy block go to ``O_par``. Because the
mask acts blockwise it equals ``sum_b P_b O P_b`` and does not depend on how
eigenvectors are chosen inside a degenerate block.

On ``O_perp`` the superoperator ``ad_H = [H, .]`` is diagonal with entries
``lambda_i - lambda_j`` and therefore invertible, which is what makes the
rotated part of the accumulated Trotter error sum to something bounded.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DegeneracyPolicy, Eigensystem

__all__ = [
    "DegeneracyPolicy",
    "CommutantSplit",
    "CommutantComponentError",
    "decompose",
    "ad_apply",
    "ad_inverse",
    "rotate",
    "geometric_sum_apply",
    "direct_geometric_sum",
    "accumulated_error_approx",
    "inv_one_minus_exp",
    "inv_one_minus_exp_series",
]

RESONANCE_FLOOR = 1e-8


class CommutantComponentError(ValueError):
    """Operator has a component in the commutant where none is allowed."""


@dataclass(frozen=True, eq=False)
class CommutantSplit:
    o_par: np.ndarray
    o_perp: np.ndarray
    eigensystem: Eigensystem


def _check_dim(es: Eigensystem, o: np.ndarray):
    if o.shape != (es.dim, es.dim):
        raise ValueError(f"operator shape {o.shape} does not match dimension {es.dim}")


def _same_block(es: Eigensystem, policy: DegeneracyPolicy | None) -> np.ndarray:
    labels = es.labels_for(policy)
    return labels[:, None] == labels[None, :]


def decompose(
    es: Eigensystem, o: np.ndarray, policy: DegeneracyPolicy | None = None
) -> CommutantSplit:
    o = np.asarray(o, dtype=complex)
    _check_dim(es, o)
    o_eig = es.to_eigenbasis(o)
    o_par = es.from_eigenbasis(np.where(_same_block(es, policy), o_eig, 0.0))
    return CommutantSplit(o_par, o - o_par, es)


def ad_apply(h: np.ndarray, o: np.ndarray) -> np.ndarray:
    """``[H, O]``."""
    if h.shape != o.shape:
        raise ValueError(f"shape mismatch {h.shape} vs {o.shape}")
    return h @ o - o @ h


def ad_inverse(
    es: Eigensystem, o_perp: np.ndarray, policy: DegeneracyPolicy | None = None, atol: float = 1e-9
) -> np.ndarray:
    """Inverse of ``[H, .]`` on the orthogonal complement of the commutant.

    Entries inside a degeneracy block are set to zero, never divided.
    """
    o_perp = np.asarray(o_perp, dtype=complex)
    _check_dim(es, o_perp)
    o_eig = es.to_eigenbasis(o_perp)
    same = _same_block(es, policy)
    inside = np.linalg.norm(o_eig[same])
    if inside > atol * max(1.0, np.linalg.norm(o_eig)):
        raise CommutantComponentError(
            f"input has commutant component of norm {inside:.3e}; decompose it first"
        )
    gaps = es.values[:, None] - es.values[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(same, 0.0, o_eig / np.where(same, 1.0, gaps))
    return es.from_eigenbasis(out)


def rotate(es: Eigensystem, o: np.ndarray, t: float) -> np.ndarray:
    """``exp(-iHt) O exp(iHt)``."""
    o_eig = es.to_eigenbasis(np.asarray(o, dtype=complex))
    phase = np.exp(-1j * es.values * t)
    return es.from_eigenbasis(phase[:, None] * o_eig * phase.conj()[None, :])


def _geometric_factors(
    es: Eigensystem, tau: float, r: int, policy: DegeneracyPolicy | None
) -> np.ndarray:
    """Entrywise ``sum_{k<r} exp(-i k tau (lambda_i - lambda_j))``."""
    gaps = es.values[:, None] - es.values[None, :]
    theta = gaps * tau
    # shift by multiples of 2 pi so expm1 keeps full relative precision
    theta = theta - 2 * np.pi * np.rint(theta / (2 * np.pi))
    denom = -np.expm1(-1j * theta)
    same = _same_block(es, policy)
    near = ~same & (np.abs(denom) < RESONANCE_FLOOR)
    fac = -np.expm1(-1j * theta * r) / np.where(same | near, 1.0, denom)
    fac[same] = r
    if np.any(near):
        z = np.exp(-1j * theta[near])
        fac[near] = sum(z**k for k in range(r))
    return fac


def geometric_sum_apply(
    es: Eigensystem, delta: np.ndarray, tau: float, r: int, policy: DegeneracyPolicy | None = None
) -> np.ndarray:
    """Accumulated error ``sum_{k=0}^{r-1} U^k delta U^-k`` with ``U = exp(-iH tau)``.

    The commutant part is multiplied by ``r``; every other eigenbasis entry
    gets the closed-form geometric factor. Gaps that resonate with the step
    (``gap * tau`` a nonzero multiple of ``2 pi``) are summed explicitly.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    delta = np.asarray(delta, dtype=complex)
    _check_dim(es, delta)
    d_eig = es.to_eigenbasis(delta)
    return es.from_eigenbasis(_geometric_factors(es, tau, r, policy) * d_eig)


def direct_geometric_sum(u: np.ndarray, delta: np.ndarray, r: int) -> np.ndarray:
    """Reference loop ``sum_k U^k delta U^-k`` for a unitary ``U``."""
    total = np.zeros_like(delta, dtype=complex)
    term = np.asarray(delta, dtype=complex)
    for _ in range(r):
        total += term
        term = u @ term @ u.conj().T
    return total


def accumulated_error_approx(
    es: Eigensystem, delta: np.ndarray, tau: float, t: float, policy: DegeneracyPolicy | None = None
) -> np.ndarray:
    """Small-step form of the accumulated error.

    ``r delta_par + (i/tau) [exp(-iHt) A exp(iHt) - A]`` with
    ``A = ad_H^{-1}(delta_perp)`` and ``r = t / tau``.
    """
    r = t / tau
    if abs(r - round(r)) > 1e-9 * max(1.0, abs(r)):
        raise ValueError(f"t={t} is not a multiple of tau={tau}")
    split = decompose(es, delta, policy)
    a = ad_inverse(es, split.o_perp, policy)
    return round(r) * split.o_par + (1j / tau) * (rotate(es, a, t) - a)


def inv_one_minus_exp(x: float, tau: float) -> complex:
    """Exact ``1 / (1 - exp(-i tau x))``."""
    denom = -np.expm1(-1j * tau * x)
    if abs(denom) < RESONANCE_FLOOR:
        raise ValueError(f"tau*x = {tau * x} is resonant (multiple of 2 pi)")
    return complex(1.0 / denom)


def inv_one_minus_exp_series(x: float, tau: float) -> complex:
    """Three-term small-``tau`` expansion of ``1 / (1 - exp(-i tau x))``.

    ``(1/tau) (-i/x + tau/2 + i x tau^2 / 12)``; the remainder is
    ``O(tau^3)``.
    """
    if x == 0:
        raise ValueError("x must be nonzero")
    if abs(np.expm1(-1j * tau * x)) < RESONANCE_FLOOR:
        raise ValueError(f"tau*x = {tau * x} is resonant (multiple of 2 pi)")
    return complex((-1j / x + tau / 2 + 1j * x * tau**2 / 12) / tau)
