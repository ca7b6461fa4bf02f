# Symbolic Pauli algebra: products, commutators and the normalized norm.
import numpy as np

from commutant_trotter import PauliSum, commutator, frobenius_norm_normalized, to_dense

# Z X = i Y, so [Z, X] = 2i Y
z = PauliSum.from_labels([(1.0, "Z")])
x = PauliSum.from_labels([(1.0, "X")])
print("[Z, X] =", commutator(z, x))

# sums on more sites can be written with site indices
a = PauliSum.parse(3, "1.0 * Z0 Z1") + PauliSum.parse(3, "0.5 * Z2")
b = PauliSum.parse(3, "0.8 * X1")
c = commutator(a, b)
print("[A, B] =", c)

# the symbolic result agrees with dense matrices
da, db = to_dense(a), to_dense(b)
print("dense check:", np.allclose(to_dense(c), da @ db - db @ da))

# ||.||_F / sqrt(d) is just the l2 norm of the coefficients
print("normalized norm:", frobenius_norm_normalized(c), np.linalg.norm(to_dense(c)) / np.sqrt(8))
