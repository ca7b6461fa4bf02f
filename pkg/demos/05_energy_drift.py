# Energy under Trotterized evolution oscillates but does not drift.
import numpy as np

from commutant_trotter import (
    ObservableSpec,
    StateSpec,
    build_mfi_1d,
    conserved_series,
    predicted_series,
)

m = build_mfi_1d(8)
tau = 0.1
times = np.arange(1, 301) * tau
psi = StateSpec().build(m.n_sites)  # |00...0>

cs = conserved_series(m, tau, 2, times, psi)
dev = cs["energy_pf"] - cs["energy_exact"]
half = len(times) // 2
print("max |dE| first half: ", np.abs(dev[:half]).max())
print("max |dE| second half:", np.abs(dev[half:]).max())

# the prediction has no term growing with t for O = H
lin, const = predicted_series(m, ObservableSpec("hamiltonian"), psi, tau, times)
print("largest linear term:", np.abs(lin).max())
print("prediction error:", np.abs(dev - const.real).max(), "vs deviation", np.abs(dev).max())
