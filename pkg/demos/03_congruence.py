# Unitary congruence (A = U B U^T) reduces to simultaneous unitary
# similarity of three derived pairs, or equivalently to plain unitary
# similarity of 4n-by-4n nilpotent gadget matrices.

import numpy as np

from unieq import (
    Matrix,
    build_congruence_K,
    congruence_triple,
    identity,
    random_unitary,
    unitarily_congruent,
)

rng = np.random.default_rng(7)

# 1x1 congruence is phase scaling: 2 and 2i are congruent, 2 and 3 are not
two = Matrix.from_complex([[2.0]])
print("2 ~ 2i:", unitarily_congruent(two, Matrix.from_complex([[2j]])).result)
print("2 ~ 3: ", unitarily_congruent(two, Matrix.from_complex([[3.0]])).result)

# A symmetric unitary always equals U U^T, so it is congruent to I
flip = Matrix.from_complex([[0, 1], [1, 0]])
print("flip ~ I:", unitarily_congruent(flip, identity(2)).result)

# A congruent pair built from a witness
U = random_unitary(3, rng)
B = Matrix(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)), "float")
B = B.scale(1.0 / B.norm_fro())
A = U @ B @ U.transpose()
print("constructed pair:", unitarily_congruent(A, B).result)

# The three derived pairs all intertwine through the same witness
for name, (lhs, rhs) in zip(
    ("A A*", "A conj(A)", "A^T conj(A)"), congruence_triple(A, B)
):
    resid = (lhs - U @ rhs @ U.adjoint()).norm_fro()
    print(f"  ||{name} - U (B-side) U*|| = {resid:.2e}")

# The K gadget packs those three products into one nilpotent block matrix;
# index-4 nilpotency caps word exponents at 3 during brute verification.
K = build_congruence_K(A)
print("\nK gadget size:", K.shape, " ||K^4|| =", K.power(4).norm_fro())
v = unitarily_congruent(A, B, use_k_gadget=True)
print("K-gadget route:", v.result, "via", v.route)
