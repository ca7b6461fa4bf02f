"""Trotter error in expectation values for second-order product formulas.

With the PF2 step error written as ``delta ~ i (H_par + H_perp) tau^3``
(both parts Hermitian, ``H_par`` in the commutant of ``H``), the error in
``<O>`` after time ``t`` at fixed ``tau`` is predicted to be

    linear   = i Tr([O, H_par] rho(t)) tau^2 t
    constant = Tr([O, B - exp(-iHt) B exp(iHt)] rho(t)) tau^2,
               B = ad_H^{-1}(H_perp)

where ``rho(t) = exp(-iHt) rho exp(iHt)``. For any ``O = f(H)`` the linear
term vanishes, so conserved quantities only oscillate.

States are numpy arrays: 1-D for pure states, 2-D for density matrices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .commutant import decompose
from .formulas import leading_error_pf2, pf_step, steps_for_times
from .linalg import DegeneracyPolicy, Eigensystem
from .models import TwoTermModel
from .pauli import PauliSum, to_dense

OBSERVABLE_KINDS = ("hamiltonian", "hamiltonian_squared", "variance", "pauli_sum", "dense")


@dataclass(frozen=True, eq=False)
class ObservableSpec:
    kind: str
    payload: object = None

    def __post_init__(self):
        if self.kind not in OBSERVABLE_KINDS:
            raise ValueError(f"unknown observable kind {self.kind!r}")
        if self.kind == "pauli_sum" and not isinstance(self.payload, PauliSum):
            raise ValueError("pauli_sum observable needs a PauliSum payload")
        if self.kind == "dense":
            a = np.asarray(self.payload)
            if a.ndim != 2 or np.linalg.norm(a - a.conj().T) > 1e-10 * max(1.0, np.linalg.norm(a)):
                raise ValueError("dense observable must be a Hermitian matrix")

    @property
    def is_function_of_h(self) -> bool:
        return self.kind in ("hamiltonian", "hamiltonian_squared")


@dataclass(frozen=True, eq=False)
class StateSpec:
    kind: str = "basis_string"
    payload: object = None

    def build(self, n_sites: int) -> np.ndarray:
        d = 1 << n_sites
        if self.kind == "basis_string":
            bits = self.payload if self.payload is not None else "0" * n_sites
            if len(bits) != n_sites or set(bits) - {"0", "1"}:
                raise ValueError(f"basis string {bits!r} does not match {n_sites} sites")
            psi = np.zeros(d, dtype=complex)
            psi[int(bits, 2)] = 1.0  # site 0 is the most significant bit
            return psi
        if self.kind == "random_pure":
            rng = np.random.default_rng(0 if self.payload is None else int(self.payload))
            psi = rng.normal(size=d) + 1j * rng.normal(size=d)
            return psi / np.linalg.norm(psi)
        if self.kind == "density_matrix":
            rho = np.asarray(self.payload, dtype=complex)
            if rho.shape != (d, d):
                raise ValueError(f"density matrix shape {rho.shape} does not match {d}")
            if np.linalg.norm(rho - rho.conj().T) > 1e-10 or abs(np.trace(rho) - 1) > 1e-10:
                raise ValueError("density matrix must be Hermitian with unit trace")
            if np.linalg.eigvalsh(rho)[0] < -1e-10:
                raise ValueError("density matrix must be positive semidefinite")
            return rho
        raise ValueError(f"unknown state kind {self.kind!r}")


@dataclass(frozen=True, eq=False)
class LeadingErrorSplit:
    """Hermitian parts of the PF2 leading error ``i (h_par + h_perp)``."""

    h_par: np.ndarray
    h_perp: np.ndarray


def observable_matrix(m: TwoTermModel, obs: ObservableSpec | np.ndarray) -> np.ndarray:
    if isinstance(obs, np.ndarray):
        return obs
    if obs.kind == "hamiltonian":
        return m.dense_h
    if obs.kind == "hamiltonian_squared":
        return m.dense_h @ m.dense_h
    if obs.kind == "pauli_sum":
        return to_dense(obs.payload)
    if obs.kind == "dense":
        return np.asarray(obs.payload, dtype=complex)
    raise ValueError("variance is not a linear observable; use conserved_series")


def _observable_eigenbasis(es: Eigensystem, m: TwoTermModel, obs) -> np.ndarray:
    # functions of H are exactly diagonal in its eigenbasis
    if isinstance(obs, ObservableSpec) and obs.kind == "hamiltonian":
        return np.diag(es.values).astype(complex)
    if isinstance(obs, ObservableSpec) and obs.kind == "hamiltonian_squared":
        return np.diag(es.values**2).astype(complex)
    return es.to_eigenbasis(observable_matrix(m, obs))


def _state_eigenbasis(es: Eigensystem, state: np.ndarray) -> np.ndarray:
    v = es.vectors
    if state.ndim == 1:
        return v.conj().T @ state
    return v.conj().T @ state @ v


def _evolve_eigen_state(es: Eigensystem, state_e: np.ndarray, t: float) -> np.ndarray:
    phase = np.exp(-1j * es.values * t)
    if state_e.ndim == 1:
        return phase * state_e
    return phase[:, None] * state_e * phase.conj()[None, :]


def _trace_with_state(a: np.ndarray, state: np.ndarray) -> complex:
    """``Tr(A rho)`` for a pure or mixed state."""
    if state.ndim == 1:
        return complex(np.vdot(state, a @ state))
    return complex(np.einsum("ij,ji->", a, state))


def split_leading_error(
    m: TwoTermModel, es: Eigensystem | None = None, policy: DegeneracyPolicy | None = None
) -> LeadingErrorSplit:
    m.check_dense()
    es = m.eig_h if es is None else es
    herm = -1j * to_dense(leading_error_pf2(m))
    herm = 0.5 * (herm + herm.conj().T)
    split = decompose(es, herm, policy)
    return LeadingErrorSplit(split.o_par, split.o_perp)


def _commutator_expectation(a: np.ndarray, x: np.ndarray, state: np.ndarray) -> complex:
    """``Tr([A, X] rho)``; mat-vec products only for pure states."""
    if state.ndim == 1:
        return complex(
            np.vdot(a.conj().T @ state, x @ state) - np.vdot(x.conj().T @ state, a @ state)
        )
    return complex(np.einsum("ij,ji->", a @ x - x @ a, state))


def predicted_series(
    m: TwoTermModel,
    obs: ObservableSpec | np.ndarray,
    state: np.ndarray,
    tau: float,
    t_list,
    es: Eigensystem | None = None,
    policy: DegeneracyPolicy | None = None,
    split: LeadingErrorSplit | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Complex linear and constant terms at each time in ``t_list``.

    Imaginary parts are roundoff for Hermitian ``O`` and a valid state.
    """
    m.check_dense()
    times = np.atleast_1d(np.asarray(t_list, dtype=float))
    steps_for_times(times, tau)
    es = m.eig_h if es is None else es
    split = split_leading_error(m, es, policy) if split is None else split
    o_e = _observable_eigenbasis(es, m, obs)
    par_e = es.to_eigenbasis(split.h_par)
    perp_e = es.to_eigenbasis(split.h_perp)
    labels = es.labels_for(policy)
    same = labels[:, None] == labels[None, :]
    gaps = es.values[:, None] - es.values[None, :]
    b_e = np.where(same, 0.0, perp_e / np.where(same, 1.0, gaps))
    lin_op = 1j * (o_e @ par_e - par_e @ o_e)
    state_e = _state_eigenbasis(es, np.asarray(state, dtype=complex))
    lin = np.zeros(len(times), dtype=complex)
    const = np.zeros(len(times), dtype=complex)
    for k, t in enumerate(times):
        phase = np.exp(-1j * es.values * t)
        c_e = b_e - phase[:, None] * b_e * phase.conj()[None, :]
        state_t = _evolve_eigen_state(es, state_e, t)
        lin[k] = _trace_with_state(lin_op, state_t) * tau**2 * t
        const[k] = _commutator_expectation(o_e, c_e, state_t) * tau**2
    return lin, const


def observable_error_predicted(
    m: TwoTermModel,
    obs: ObservableSpec | np.ndarray,
    state: np.ndarray,
    tau: float,
    t: float,
    es: Eigensystem | None = None,
    policy: DegeneracyPolicy | None = None,
    split: LeadingErrorSplit | None = None,
) -> tuple[float, float]:
    """Predicted ``(linear_term, constant_term)`` of the PF2 error in ``<O>``.

    Both are returned with their ``tau^2 t`` and ``tau^2`` factors applied,
    so their sum approximates the empirical error.
    """
    lin, const = predicted_series(m, obs, state, tau, [t], es, policy, split)
    return float(lin[0].real), float(const[0].real)


def variance_predicted_series(
    m: TwoTermModel,
    state: np.ndarray,
    tau: float,
    t_list,
    es: Eigensystem | None = None,
    policy: DegeneracyPolicy | None = None,
    split: LeadingErrorSplit | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """First-order change of ``Var(H)``: ``d<H^2> - 2 <H> d<H>`` (real parts)."""
    es = m.eig_h if es is None else es
    split = split_leading_error(m, es, policy) if split is None else split
    state = np.asarray(state, dtype=complex)
    lin_h, const_h = predicted_series(m, ObservableSpec("hamiltonian"), state, tau, t_list, es, policy, split)
    lin_h2, const_h2 = predicted_series(
        m, ObservableSpec("hamiltonian_squared"), state, tau, t_list, es, policy, split
    )
    energy = _trace_with_state(m.dense_h, state).real  # conserved by exact evolution
    return (lin_h2 - 2 * energy * lin_h).real, (const_h2 - 2 * energy * const_h).real


def expectation_series(
    m: TwoTermModel, observables, state: np.ndarray, tau: float, order: int, t_list
) -> tuple[np.ndarray, np.ndarray]:
    """``<O>`` under the product formula and under exact evolution.

    Returns two arrays of shape ``(len(t_list), len(observables))``.
    """
    m.check_dense()
    times = np.asarray(t_list, dtype=float)
    steps = steps_for_times(times, tau) if times.size else np.zeros(0, dtype=int)
    mats = [observable_matrix(m, o) for o in observables]
    state = np.asarray(state, dtype=complex)
    pf_vals = np.zeros((len(times), len(mats)))
    ex_vals = np.zeros((len(times), len(mats)))
    if not times.size:
        return pf_vals, ex_vals
    es = m.eig_h
    u = pf_step(m, tau, order)
    state_e = _state_eigenbasis(es, state)
    current = state.copy()
    done = 0
    for idx in np.argsort(steps, kind="stable"):
        r = int(steps[idx])
        for _ in range(r - done):
            current = u @ current if current.ndim == 1 else u @ current @ u.conj().T
        done = r
        exact_e = _evolve_eigen_state(es, state_e, r * tau)
        exact = es.vectors @ exact_e if exact_e.ndim == 1 else es.from_eigenbasis(exact_e)
        for j, a in enumerate(mats):
            pf_vals[idx, j] = _trace_with_state(a, current).real
            ex_vals[idx, j] = _trace_with_state(a, exact).real
    return pf_vals, ex_vals


def observable_error_empirical(
    m: TwoTermModel, obs, state: np.ndarray, tau: float, order: int, t_list
) -> np.ndarray:
    """``<O>_pf(t) - <O>_exact(t)`` on the time grid."""
    pf_vals, ex_vals = expectation_series(m, [obs], state, tau, order, t_list)
    return pf_vals[:, 0] - ex_vals[:, 0]


def conserved_series(
    m: TwoTermModel, tau: float, order: int, t_list, state: np.ndarray
) -> dict[str, np.ndarray]:
    """Energy and energy variance under PF and exact evolution."""
    specs = [ObservableSpec("hamiltonian"), ObservableSpec("hamiltonian_squared")]
    pf_vals, ex_vals = expectation_series(m, specs, state, tau, order, t_list)
    return {
        "t": np.asarray(t_list, dtype=float),
        "energy_pf": pf_vals[:, 0],
        "energy_exact": ex_vals[:, 0],
        "variance_pf": pf_vals[:, 1] - pf_vals[:, 0] ** 2,
        "variance_exact": ex_vals[:, 1] - ex_vals[:, 0] ** 2,
    }


def diagonal_ensemble_term(
    m: TwoTermModel,
    obs: ObservableSpec | np.ndarray,
    state: np.ndarray,
    es: Eigensystem | None = None,
    policy: DegeneracyPolicy | None = None,
    split: LeadingErrorSplit | None = None,
) -> float:
    """``i Tr([O, H_par] rho_D)`` with ``rho_D`` the dephased initial state.

    ``rho_D = sum_b P_b rho P_b`` over the eigenspace projectors of ``H``;
    for non-degenerate ``H`` this is ``sum_i rho_ii |i><i|`` and the result
    vanishes identically.
    """
    m.check_dense()
    es = m.eig_h if es is None else es
    split = split_leading_error(m, es, policy) if split is None else split
    labels = es.labels_for(policy)
    same = labels[:, None] == labels[None, :]
    s_e = _state_eigenbasis(es, np.asarray(state, dtype=complex))
    rho_e = np.outer(s_e, s_e.conj()) if s_e.ndim == 1 else s_e
    rho_d = np.where(same, rho_e, 0.0)
    o_e = _observable_eigenbasis(es, m, obs)
    par_e = es.to_eigenbasis(split.h_par)
    val = 1j * np.einsum("ij,ji->", o_e @ par_e - par_e @ o_e, rho_d)
    return float(val.real)
