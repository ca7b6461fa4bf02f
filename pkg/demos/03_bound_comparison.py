# Empirical PF2 error against the two bounds on a small chain.
import numpy as np

from commutant_trotter import (
    bound_new_pf2,
    bound_prev_pf2,
    build_mfi_1d,
    crossover_time,
    empirical_error_series,
)

m = build_mfi_1d(6)
tau = 0.05
times = np.arange(1, 11) * 2.5

series = empirical_error_series(m, tau, 2, times, "spectral")
print("crossover time:", crossover_time(m, tau))
print(f"{'t':>6} {'empirical':>12} {'new':>12} {'prev':>12}")
for t, e in zip(times, series.errors):
    new = bound_new_pf2(m, tau, t).total
    prev = bound_prev_pf2(m, tau, t).total
    print(f"{t:6.1f} {e:12.4e} {new:12.4e} {prev:12.4e}")

# the empirical error stays below both bounds, and the new bound is the
# tighter one once t is past the (very short) crossover
