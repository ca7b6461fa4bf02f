"""Trotter error analysis by commutant decomposition.

The error a product formula makes in one step splits into a part that
commutes with ``H`` (it accumulates linearly in the number of steps) and a
part orthogonal to the commutant (it gets rotated by ``H`` every step and
stays bounded). This package evaluates that split for small spin systems,
the resulting second-order error bounds, step-count estimates, and the
corresponding observable errors.
"""
__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    bound_new_pf2,
    bound_prev_pf2,
    commutator_norms,
    crossover_time,
    pf1_constant_term,
    steps_required,
)
from .commutant import (
    CommutantSplit,
    accumulated_error_approx,
    ad_apply,
    ad_inverse,
    decompose,
    direct_geometric_sum,
    geometric_sum_apply,
    inv_one_minus_exp_series,
)
from .formulas import (
    ErrorSeries,
    empirical_error_series,
    exact_step,
    leading_error_pf1,
    leading_error_pf2,
    pf1_step,
    pf2_step,
    pf_step,
    step_error,
)
from .linalg import DegeneracyPolicy, Eigensystem, evolve, hermitian_eig, spectral_norm
from .models import TwoTermModel, build_mfi_1d, build_tfi_2d, parse_config
from .observables import (
    ObservableSpec,
    StateSpec,
    conserved_series,
    diagonal_ensemble_term,
    observable_error_empirical,
    observable_error_predicted,
    predicted_series,
    split_leading_error,
)
from .pauli import PauliSum, PauliTerm, commutator, frobenius_norm_normalized, to_dense
