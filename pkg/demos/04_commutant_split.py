# Split an operator into the part commuting with H and the rest.
import numpy as np

from commutant_trotter import (
    ad_apply,
    ad_inverse,
    build_tfi_2d,
    decompose,
    direct_geometric_sum,
    geometric_sum_apply,
    evolve,
)

m = build_tfi_2d(2, 2, boundary="open")  # small and highly degenerate
es = m.eig_h
print("block sizes:", np.bincount(es.labels))

split = decompose(es, m.dense_h2)
h = m.dense_h
print("||[H, O_par]|| =", np.linalg.norm(ad_apply(h, split.o_par)))
print("<O_par, O_perp> =", abs(np.vdot(split.o_par, split.o_perp)))

# ad_H can be undone on the complement
back = ad_apply(h, ad_inverse(es, split.o_perp))
print("round trip error:", np.max(np.abs(back - split.o_perp)))

# accumulated error sum_k U^k d U^-k: eigenbasis formula vs brute force
d = 1e-3 * m.dense_h2
tau, r = 0.1, 50
fast = geometric_sum_apply(es, d, tau, r)
slow = direct_geometric_sum(evolve(es, tau), d, r)
print("geometric sum difference:", np.max(np.abs(fast - slow)))
