# Two engines decide unitary similarity of a pair: brute trace-word
# comparison (complete up to the length bound, exponential) and the
# algebra-closure engine (polynomial, the default).  Both produce checkable
# certificates on failure.

import numpy as np

from unieq import (
    Matrix,
    algebra_closure,
    random_unitary,
    specht_brute,
    unitarily_similar,
)

rng = np.random.default_rng(1)

# A pair that is unitarily similar by construction
U = random_unitary(3, rng)
B = Matrix(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)), "float")
A = U @ B @ U.adjoint()

v = unitarily_similar(A, B)
print("constructed pair:", v.result, "via", v.engine)

# An independent pair: the first failing word is reported with both traces
C = Matrix(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)), "float")
v = unitarily_similar(A, C)
print("independent pair:", v.result)
cert = v.certificate
print("  failing word:", cert.word, "traces", cert.trace_left, "vs", cert.trace_right)

# The closure engine spans the algebra generated by the letters on both
# sides in lockstep; its basis is at most size^2 words.
v = algebra_closure(A, C)
print("closure says:", v.result, "after a basis of", v.dimension, "words")

# Brute enumeration agrees wherever it is feasible
v_brute = specht_brute(A, C, max_length=8)
print("brute says:  ", v_brute.result, "(words up to length 8)")

# For 2x2 and 3x3 pairs the classical short word lists decide instantly
small = Matrix.from_complex([[1, 1], [0, 1]])
other = Matrix.from_complex([[1, 2], [0, 1]])
v = unitarily_similar(small, other)
print("\n2x2 fast path:", v.result, "engine:", v.engine)
print("  certificate:", v.certificate.word)
