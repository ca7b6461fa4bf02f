"""Product-formula step unitaries, per-step errors and empirical error series.

Conventions
-----------
* PF1 step: ``exp(-i H2 tau) exp(-i H1 tau)``, whose leading error is
  ``+1/2 [H1, H2] tau^2``.
* PF2 step: ``exp(-i H2 tau/2) exp(-i H1 tau) exp(-i H2 tau/2)``.
* Orders 4, 6, ... use the Suzuki recursion on top of PF2.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import evolve, frobenius_norm, spectral_norm, unitarity_defect, unitary_power
from .models import TwoTermModel
from .pauli import PauliSum, commutator

NORM_KINDS = ("spectral", "frobenius")


class TimeGridError(ValueError):
    """A requested time is not an integer multiple of the step size."""


def operator_norm(a: np.ndarray, kind: str = "spectral") -> float:
    """Spectral norm, or Frobenius norm normalized by ``sqrt(d)``."""
    if kind == "spectral":
        return spectral_norm(a)
    if kind == "frobenius":
        return frobenius_norm(a) / np.sqrt(a.shape[0])
    raise ValueError(f"unknown norm kind {kind!r}; expected one of {NORM_KINDS}")


def steps_for_times(t_list, tau: float, rtol: float = 1e-9) -> np.ndarray:
    """Integer step counts ``r`` with ``t = r * tau`` for every ``t``."""
    t = np.atleast_1d(np.asarray(t_list, dtype=float))
    if tau <= 0:
        raise TimeGridError("step size must be positive")
    ratio = t / tau
    r = np.rint(ratio)
    bad = np.abs(ratio - r) > rtol * np.maximum(1.0, np.abs(ratio))
    if np.any(bad) or np.any(r < 0):
        raise TimeGridError(f"times {t[bad | (r < 0)].tolist()} are not nonnegative multiples of tau={tau}")
    return r.astype(int)


def exact_step(m: TwoTermModel, tau: float) -> np.ndarray:
    m.check_dense()
    return evolve(m.eig_h, tau)


def pf1_step(m: TwoTermModel, tau: float) -> np.ndarray:
    m.check_dense()
    return evolve(m.eig_h2, tau) @ evolve(m.eig_h1, tau)


def pf2_step(m: TwoTermModel, tau: float) -> np.ndarray:
    m.check_dense()
    half = evolve(m.eig_h2, tau / 2)
    return half @ evolve(m.eig_h1, tau) @ half


def suzuki_step(m: TwoTermModel, tau: float, order: int) -> np.ndarray:
    """Even-order Suzuki product formula built recursively from PF2."""
    if order == 2:
        return pf2_step(m, tau)
    if order < 2 or order % 2:
        raise ValueError(f"Suzuki recursion needs an even order >= 2, got {order}")
    k = order // 2
    p = 1.0 / (4.0 - 4.0 ** (1.0 / (2 * k - 1)))
    outer = suzuki_step(m, p * tau, order - 2)
    middle = suzuki_step(m, (1.0 - 4.0 * p) * tau, order - 2)
    return outer @ outer @ middle @ outer @ outer


def pf_step(m: TwoTermModel, tau: float, order: int) -> np.ndarray:
    if order == 1:
        return pf1_step(m, tau)
    return suzuki_step(m, tau, order)


def step_error(m: TwoTermModel, tau: float, order: int) -> np.ndarray:
    """Per-step error ``delta(tau) = U_pf(tau) - exp(-i H tau)``."""
    return pf_step(m, tau, order) - exact_step(m, tau)


def leading_error_pf1(m: TwoTermModel) -> PauliSum:
    """Coefficient of ``tau^2`` in the PF1 step error: ``[H1, H2] / 2``."""
    return commutator(m.h1, m.h2) * 0.5


def leading_error_pf2(m: TwoTermModel) -> PauliSum:
    """Coefficient of ``tau^3`` in the PF2 step error.

    ``(i/24) [H2, [H1, H2]] + (i/12) [H1, [H1, H2]]``
    """
    c12 = commutator(m.h1, m.h2)
    return commutator(m.h2, c12) * (1j / 24) + commutator(m.h1, c12) * (1j / 12)


def leading_error_pf2_split_form(m: TwoTermModel) -> PauliSum:
    """Same operator as :func:`leading_error_pf2`, written as
    ``(i/24) [H1, [H1, H2]] + (i/24) [H, [H, H2]]`` where the second term
    lies entirely outside the commutant of ``H``."""
    h = m.hamiltonian
    return (
        commutator(m.h1, commutator(m.h1, m.h2)) * (1j / 24)
        + commutator(h, commutator(h, m.h2)) * (1j / 24)
    )


def leading_error(m: TwoTermModel, order: int) -> PauliSum:
    if order == 1:
        return leading_error_pf1(m)
    if order == 2:
        return leading_error_pf2(m)
    raise ValueError("symbolic leading error is available for orders 1 and 2 only")


@dataclass
class ErrorSeries:
    """Empirical Trotter error on a grid ``t_k = r_k * tau``."""

    tau: float
    order: int
    norm: str
    times: np.ndarray
    steps: np.ndarray
    errors: np.ndarray
    bounds: dict[str, np.ndarray] = field(default_factory=dict)

    def columns(self) -> dict[str, np.ndarray]:
        cols = {"t": self.times, "r": self.steps, "empirical": self.errors}
        cols.update(self.bounds)
        return cols


def empirical_error_series(
    m: TwoTermModel, tau: float, order: int, t_list, norm: str = "spectral"
) -> ErrorSeries:
    """``||U_pf^r - exp(-i H r tau)||`` at every requested time.

    Powers of the step unitary are built incrementally along the sorted
    grid; the exact evolution is taken straight from the eigensystem.
    """
    times = np.asarray(t_list, dtype=float)
    steps = steps_for_times(times, tau) if times.size else np.zeros(0, dtype=int)
    errors = np.zeros(len(times))
    if times.size:
        u_pf = pf_step(m, tau, order)
        d = u_pf.shape[0]
        if unitarity_defect(u_pf) > 1e-10 * np.sqrt(d):
            raise RuntimeError("product-formula step is not unitary")
        order_idx = np.argsort(steps, kind="stable")
        power = np.eye(d, dtype=complex)
        done = 0
        for idx in order_idx:
            r = int(steps[idx])
            if r > done:
                power = power @ unitary_power(u_pf, r - done)
                done = r
                if unitarity_defect(power) > 1e-8 * np.sqrt(d):
                    raise RuntimeError(f"unitarity drift exceeded at r={r}")
            exact = evolve(m.eig_h, r * tau)
            errors[idx] = operator_norm(power - exact, norm)
    return ErrorSeries(tau, order, norm, times, steps, errors)
