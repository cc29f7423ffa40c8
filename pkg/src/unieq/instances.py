"""Seeded instance generation with retained witnesses, plus the nullspace
oracle for intertwining relations.

Generators draw everything from one numpy Generator per seed, so instances,
witnesses, and perturbations are bit-reproducible.  The intertwiner oracle
solves A W = W B (or A conj(W) = W B) by vectorization and reports a
singular-value gap so callers can spot numerically marginal draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import EXACT, FLOAT, Matrix, exact_nullspace, nullspace
from .gadgets import ProblemInstance

LABEL_YES = "YES"
LABEL_NO = "NO-perturbed"

# basis vectors whose kept/discarded singular-value ratio falls below this
# are suspect; tests re-draw such instances
MARGINAL_GAP = 1e3


@dataclass
class GeneratedInstance:
    inst: ProblemInstance
    witness: Matrix
    seed: int
    label: str


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _gaussian_complex(rng, n: int) -> np.ndarray:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)


def random_unitary(n: int, seed, mode: str = FLOAT) -> Matrix:
    """Haar-like unitary from a QR factorization of a complex Gaussian draw.

    Only float mode is supported; generic unitaries have no exact rational
    representation.
    """
    if mode == EXACT:
        raise ValueError("random unitaries exist in float mode only")
    if n < 1:
        raise ValueError("size must be positive")
    rng = _rng(seed)
    z = _gaussian_complex(rng, n)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return Matrix(q, FLOAT)


def make_yes_instance(
    n: int, m1: int, m2: int, m3: int, m4: int, seed: int
) -> GeneratedInstance:
    """A four-family instance constructed from a known witness.

    The B sides are unit-norm Gaussian draws; every A side is produced by the
    relation its family demands, so the retained witness verifies by
    construction.
    """
    if m1 + m2 + m3 + m4 == 0:
        raise ValueError("at least one pair family must be nonempty")
    rng = _rng(seed)
    witness = random_unitary(n, rng)
    u = witness
    ubar = u.conj()
    transforms = {
        1: lambda b: u @ b @ u.adjoint(),
        2: lambda b: u @ b @ u.transpose(),
        3: lambda b: ubar @ b @ u.adjoint(),
        4: lambda b: ubar @ b @ u.transpose(),
    }
    families = [[], [], [], []]
    for set_id, count in enumerate((m1, m2, m3, m4), 1):
        for _ in range(count):
            g = _gaussian_complex(rng, n)
            b = Matrix(g / np.linalg.norm(g), FLOAT)
            families[set_id - 1].append((transforms[set_id](b), b))
    inst = ProblemInstance(n, *families)
    return GeneratedInstance(inst, witness, seed, LABEL_YES)


def perturb_to_no(g: GeneratedInstance, epsilon: float, seed: int) -> GeneratedInstance:
    """Add a seeded unit-norm Gaussian bump to one A-side matrix.

    The result is generically not equivalent; callers must still ask an
    engine, and the stale witness is kept so the failure is inspectable.
    """
    if epsilon <= 0:
        raise ValueError("perturbation size must be positive")
    rng = _rng(seed)
    slots = [(set_id, idx) for set_id, idx, _, _ in g.inst.pairs()]
    target = slots[int(rng.integers(len(slots)))]
    bump = _gaussian_complex(rng, g.inst.n)
    bump = bump / np.linalg.norm(bump)
    families = [[], [], [], []]
    for set_id, idx, a, b in g.inst.pairs():
        if (set_id, idx) == target:
            a = a + Matrix(epsilon * bump, FLOAT)
        families[set_id - 1].append((a, b))
    inst = ProblemInstance(g.inst.n, *families)
    return GeneratedInstance(inst, g.witness, seed, LABEL_NO)


# --------------------------------------------------------------------------
# intertwiner oracle
# --------------------------------------------------------------------------

def intertwiner_space(
    A: Matrix,
    B: Matrix,
    conjugate_linear: bool = False,
    rtol: float = 1e-10,
):
    """Basis of all W with A W = W B (or A conj(W) = W B when requested).

    The linear case vectorizes to an ordinary nullspace; the conjugate-linear
    case splits W into real and imaginary parts and solves the doubled real
    system.  Float mode thresholds singular values at ``rtol`` times scale.
    """
    basis, _ = intertwiner_space_info(A, B, conjugate_linear, rtol)
    return basis


def intertwiner_space_info(
    A: Matrix,
    B: Matrix,
    conjugate_linear: bool = False,
    rtol: float = 1e-10,
):
    """Like :func:`intertwiner_space` but also returns the singular-value
    gap ratio (below :data:`MARGINAL_GAP` means the basis is suspect)."""
    A._check_mode(B)
    if A.shape != B.shape or not A.is_square:
        raise ValueError("intertwiner spaces need equal-size square matrices")
    if A.mode == EXACT:
        return _intertwiner_exact(A, B, conjugate_linear), math.inf
    m = A.rows
    eye = np.eye(m)
    if not conjugate_linear:
        # vec is column-major below, so A W -> (I (x) A) vec W
        op = np.kron(eye, A.data) - np.kron(B.data.T, eye)
        vectors, gap = nullspace(op, rtol)
        basis = [Matrix(v.reshape((m, m), order="F"), FLOAT) for v in vectors]
        return basis, gap
    ar, ai = A.data.real, A.data.imag
    br, bi = B.data.real, B.data.imag
    # split A conj(W) = W B into real equations for W = P + iQ
    top = np.hstack(
        [np.kron(eye, ar) - np.kron(br.T, eye), np.kron(eye, ai) + np.kron(bi.T, eye)]
    )
    bot = np.hstack(
        [np.kron(eye, ai) - np.kron(bi.T, eye), -np.kron(eye, ar) - np.kron(br.T, eye)]
    )
    op = np.vstack([top, bot])
    vectors, gap = nullspace(op, rtol)
    basis = []
    for v in vectors:
        p = v[: m * m].reshape((m, m), order="F")
        q = v[m * m :].reshape((m, m), order="F")
        basis.append(Matrix((p + 1j * q).astype(np.complex128), FLOAT))
    return basis, gap


def _intertwiner_exact(A: Matrix, B: Matrix, conjugate_linear: bool):
    from .numerics import GaussianRational

    m = A.rows
    if not conjugate_linear:
        rows = []
        for i in range(m):
            for j in range(m):
                # coefficient of W[k, l] in (A W - W B)[i, j]
                row = [GaussianRational(0)] * (m * m)
                for k in range(m):
                    row[k * m + j] = row[k * m + j] + A.data[i, k]
                for l in range(m):
                    row[i * m + l] = row[i * m + l] - B.data[l, j]
                rows.append(row)
        vecs = exact_nullspace(rows)
        out = []
        for v in vecs:
            w = Matrix.from_rational(
                [[v[i * m + j] for j in range(m)] for i in range(m)]
            )
            out.append(w)
        return out
    # realified conjugate-linear system over exact rationals
    from fractions import Fraction

    def parts(mat):
        re = [[e.re for e in row] for row in mat.data]
        im = [[e.im for e in row] for row in mat.data]
        return re, im

    ar, ai = parts(A)
    br, bi = parts(B)
    dim = m * m
    rows = []
    for i in range(m):
        for j in range(m):
            row = [Fraction(0)] * (2 * dim)
            for k in range(m):
                row[k * m + j] += ar[i][k]
                row[dim + k * m + j] += ai[i][k]
            for l in range(m):
                row[i * m + l] -= br[l][j]
                row[dim + i * m + l] += bi[l][j]
            rows.append(row)
    for i in range(m):
        for j in range(m):
            row = [Fraction(0)] * (2 * dim)
            for k in range(m):
                row[k * m + j] += ai[i][k]
                row[dim + k * m + j] -= ar[i][k]
            for l in range(m):
                row[i * m + l] -= bi[l][j]
                row[dim + i * m + l] -= br[l][j]
            rows.append(row)
    from .numerics import GaussianRational as GR

    wrapped = [[GR(e) for e in row] for row in rows]
    vecs = exact_nullspace(wrapped)
    out = []
    for v in vecs:
        entries = [
            [
                GR(v[i * m + j].re, v[dim + i * m + j].re)
                for j in range(m)
            ]
            for i in range(m)
        ]
        out.append(Matrix.from_rational(entries))
    return out


# --------------------------------------------------------------------------
# structure predicates for gadget intertwiners
# --------------------------------------------------------------------------

def _blocks(W: Matrix, n: int):
    k, rem = divmod(W.rows, n)
    if rem or W.rows != W.cols:
        raise ValueError("matrix size is not a multiple of the block size")
    return k


def is_block_upper_triangular(W: Matrix, n: int, tol: float = 1e-8) -> bool:
    """Every block strictly below the block diagonal is negligible."""
    k = _blocks(W, n)
    wf = W.to_float().data
    for i in range(1, k):
        for j in range(i):
            if np.linalg.norm(wf[i * n : (i + 1) * n, j * n : (j + 1) * n]) > tol:
                return False
    return True


def has_equal_diagonal_blocks(W: Matrix, n: int, tol: float = 1e-8) -> bool:
    """All diagonal blocks agree with the first one."""
    k = _blocks(W, n)
    wf = W.to_float().data
    first = wf[:n, :n]
    for i in range(1, k):
        blockii = wf[i * n : (i + 1) * n, i * n : (i + 1) * n]
        if np.linalg.norm(blockii - first) > tol:
            return False
    return True


def has_alternating_diagonal_blocks(W: Matrix, n: int, tol: float = 1e-8) -> bool:
    """Odd diagonal blocks equal the first, even ones its conjugate
    (1-based block indices)."""
    k = _blocks(W, n)
    wf = W.to_float().data
    first = wf[:n, :n]
    for i in range(1, k):
        blockii = wf[i * n : (i + 1) * n, i * n : (i + 1) * n]
        want = first if (i + 1) % 2 == 1 else np.conj(first)
        if np.linalg.norm(blockii - want) > tol:
            return False
    return True
