# Words in a matrix and its adjoint are the invariants that decide unitary
# similarity: A and B are unitarily similar exactly when every word has the
# same trace on both sides, and only finitely many words matter.

import numpy as np

from unieq import (
    Matrix,
    enumerate_words,
    eval_word,
    pappacena_bound,
    word_count,
    word_trace_spectrum,
)

A = Matrix.from_complex([[0, 1], [0, 0]])
B = Matrix.from_complex([[0, 2], [0, 0]])

print("trace spectrum of the nilpotent Jordan block, words up to length 3:")
for word, t in word_trace_spectrum(A, A.adjoint(), 3):
    print(f"  tr {str(word):10s} = {t:.3f}")

print()
print("the same words at B = 2*A tell the two apart:")
for word, t in word_trace_spectrum(B, B.adjoint(), 2):
    print(f"  tr {str(word):10s} = {t:.3f}")

# How many words must be checked for a complete decision?  The length bound
# grows fast with the matrix size:
for m in (2, 3, 4, 8, 12):
    bound = pappacena_bound(m)
    count = word_count(2, int(bound))
    print(f"size {m:2d}: length bound {bound:6.2f} -> {count:.3e} words")

# Deduplication: traces are invariant under rotation, and conjugated under
# star reversal, so one representative per class suffices.
full = sum(1 for _ in enumerate_words(2, 10))
dedup = sum(1 for _ in enumerate_words(2, 10, dedup="cyclic+star_reversal"))
print(f"\nwords up to length 10: {full} raw, {dedup} after dedup")

# Every word evaluates by plain multiplication; runs use repeated squaring.
w = next(iter(enumerate_words(2, 3)))
print("\nfirst enumerated word:", w, "->")
print(np.round(eval_word(w, [A, A.adjoint()]).data, 3))
