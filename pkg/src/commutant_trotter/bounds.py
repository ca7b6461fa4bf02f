"""Second-order Trotter error bounds and step-count estimates.

Two bounds on ``||U2^r - U^r||`` for ``H = H1 + H2`` at step size ``tau``
and total time ``t = r tau``:

previous (purely linear in t)::

    (1/12 ||[H1,[H1,H2]]|| + 1/24 ||[H2,[H2,H1]]||) tau^2 t

commutant-separated::

    1/24 ||[H1,[H1,H2]]|| tau^2 t + 1/12 ||[H1,H2]|| tau^2

The constant term comes from the part of the step error that rotates
under ``H`` instead of piling up.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .commutant import decompose
from .formulas import NORM_KINDS, steps_for_times
from .linalg import DegeneracyPolicy, Eigensystem, spectral_norm
from .models import ModelError, TwoTermModel
from .pauli import DENSE_SITE_CAP, commutator, frobenius_norm_normalized, to_dense


@dataclass(frozen=True)
class BoundReport:
    tau: float
    t: float
    linear: float  # coefficient of t, tau^2 already included
    constant: float
    norm: str
    commutator_norms: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return self.linear * self.t + self.constant


@lru_cache(maxsize=64)
def commutator_norms(m: TwoTermModel, norm: str = "spectral") -> dict[str, float]:
    """Norms of ``[H1,H2]``, ``[H1,[H1,H2]]`` and ``[H2,[H2,H1]]``.

    ``"frobenius"`` is evaluated symbolically and works at any size;
    ``"spectral"`` needs the dense realization.
    """
    if norm not in NORM_KINDS:
        raise ValueError(f"unknown norm kind {norm!r}")
    c12 = commutator(m.h1, m.h2)
    ops = {
        "h1_h2": c12,
        "h1_h1_h2": commutator(m.h1, c12),
        "h2_h2_h1": commutator(m.h2, -c12),
    }
    if norm == "frobenius":
        return {k: frobenius_norm_normalized(v) for k, v in ops.items()}
    if m.n_sites > DENSE_SITE_CAP:
        raise ModelError(
            f"spectral norm needs a dense {m.n_sites}-site matrix (cap {DENSE_SITE_CAP}); "
            "use the frobenius norm"
        )
    return {k: spectral_norm(to_dense(v)) for k, v in ops.items()}


def _prev_coefficient(c: dict) -> float:
    return c["h1_h1_h2"] / 12 + c["h2_h2_h1"] / 24


def bound_prev_pf2(m: TwoTermModel, tau: float, t: float, norm: str = "spectral") -> BoundReport:
    steps_for_times([t], tau)
    c = commutator_norms(m, norm)
    return BoundReport(tau, t, _prev_coefficient(c) * tau**2, 0.0, norm, dict(c))


def bound_new_pf2(m: TwoTermModel, tau: float, t: float, norm: str = "spectral") -> BoundReport:
    steps_for_times([t], tau)
    c = commutator_norms(m, norm)
    return BoundReport(
        tau, t, c["h1_h1_h2"] / 24 * tau**2, c["h1_h2"] / 12 * tau**2, norm, dict(c)
    )


def crossover_time(m: TwoTermModel, tau: float, norm: str = "spectral") -> float:
    """Time after which the commutant-separated bound is the smaller one."""
    c = commutator_norms(m, norm)
    slope_gap = _prev_coefficient(c) - c["h1_h1_h2"] / 24
    constant = c["h1_h2"] / 12
    if constant == 0:
        return 0.0
    if slope_gap <= 0:
        return math.inf
    return constant / slope_gap


def pf1_constant_term(
    m: TwoTermModel, es: Eigensystem | None = None, policy: DegeneracyPolicy | None = None
) -> float:
    """Spectral norm of the part of ``H2`` outside the commutant of ``H``.

    Multiplied by ``tau`` this is the time-independent PF1 error.
    """
    m.check_dense()
    es = m.eig_h if es is None else es
    return spectral_norm(decompose(es, m.dense_h2, policy).o_perp)


def steps_required(
    m: TwoTermModel, t: float, eps: float, which: str = "new", norm: str = "frobenius"
) -> int:
    """Smallest step count ``r`` for which the chosen PF2 bound at ``tau = t/r`` is ``<= eps``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if t < 0:
        raise ValueError("t must be nonnegative")
    c = commutator_norms(m, norm)
    if which == "prev":
        r = math.sqrt(t**3 / eps * _prev_coefficient(c))
    elif which == "new":
        r = math.sqrt((c["h1_h1_h2"] / 24 * t**3 + c["h1_h2"] / 12 * t**2) / eps)
    else:
        raise ValueError(f"unknown bound {which!r}; expected 'prev' or 'new'")
    return max(1, math.ceil(r))
