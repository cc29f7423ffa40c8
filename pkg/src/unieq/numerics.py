"""Dense complex matrices in two interchangeable arithmetic modes.

Float mode stores numpy complex128 arrays.  Exact mode stores object arrays
of Gaussian rationals (:class:`GaussianRational`), so equality tests carry no
tolerance at all.  Everything downstream (words, gadgets, engines) works with
either mode; mixing the two in one operation is an error, never a coercion.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

FLOAT = "float"
EXACT = "exact"

# residual <= DEP_TOL * (1 + ||target||_F) counts as "in span" in float mode
DEP_TOL = 1e-10


class ModeMismatchError(TypeError):
    """Raised when float-mode and exact-mode values meet in one operation."""


class GaussianRational:
    """A complex number with rational real and imaginary parts.

    Stored as integers (a + b i) / d with d > 0 and gcd(a, b, d) = 1, so the
    exposed real and imaginary Fractions are always in lowest terms with
    positive denominator.  Arithmetic with ints and Fractions is exact and
    allowed; arithmetic with floats or complex raises
    :class:`ModeMismatchError`.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // math.gcd(
            re.denominator, im.denominator
        )
        self._a = re.numerator * (d // re.denominator)
        self._b = im.numerator * (d // im.denominator)
        self._d = d

    @classmethod
    def _raw(cls, a, b, d):
        if d < 0:
            a, b, d = -a, -b, -d
        g = math.gcd(math.gcd(a, b), d)
        if g > 1:
            a, b, d = a // g, b // g, d // g
        obj = object.__new__(cls)
        obj._a, obj._b, obj._d = a, b, d
        return obj

    @staticmethod
    def _coerce(value):
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, int):
            return GaussianRational._raw(value, 0, 1)
        if isinstance(value, Fraction):
            return GaussianRational._raw(value.numerator, 0, value.denominator)
        if isinstance(value, (float, complex)):
            raise ModeMismatchError(
                "cannot mix float values with exact Gaussian rationals"
            )
        return None

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._raw(
            self._a * other._d + other._a * self._d,
            self._b * other._d + other._b * self._d,
            self._d * other._d,
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._raw(
            self._a * other._d - other._a * self._d,
            self._b * other._d - other._b * self._d,
            self._d * other._d,
        )

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._raw(
            self._a * other._a - self._b * other._b,
            self._a * other._b + self._b * other._a,
            self._d * other._d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        m = other._a * other._a + other._b * other._b
        if m == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self._raw(
            (self._a * other._a + self._b * other._b) * other._d,
            (self._b * other._a - self._a * other._b) * other._d,
            self._d * m,
        )

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __neg__(self):
        return self._raw(-self._a, -self._b, self._d)

    def conjugate(self):
        return self._raw(self._a, -self._b, self._d)

    def abs_sq(self) -> Fraction:
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return (
            self._a == other._a and self._b == other._b and self._d == other._d
        )

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if self._b == 0:
            return str(self.re)
        if self._a == 0:
            return f"{self.im}i"
        sign = "+" if self._b > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"


def _as_exact(value) -> GaussianRational:
    """Coerce an entry to a Gaussian rational, rejecting floats."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(value)
    if isinstance(value, (float, complex)):
        raise ModeMismatchError("exact matrices require rational entries")
    raise TypeError(f"cannot build an exact entry from {type(value).__name__}")


class Matrix:
    """A dense matrix whose entries all live in one scalar mode."""

    __slots__ = ("mode", "data")

    def __init__(self, data: np.ndarray, mode: str):
        if mode not in (FLOAT, EXACT):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.data = data

    # ---------------------------------------------------------------- build
    @staticmethod
    def from_complex(rows) -> "Matrix":
        arr = np.array(rows, dtype=np.complex128)
        if arr.ndim != 2:
            raise ValueError("matrix rows must form a 2-d array")
        return Matrix(arr, FLOAT)

    @staticmethod
    def from_rational(rows) -> "Matrix":
        converted = [[_as_exact(e) for e in row] for row in rows]
        ncols = {len(r) for r in converted}
        if len(converted) == 0 or ncols != {len(converted[0])}:
            raise ValueError("matrix rows must be nonempty and equal length")
        arr = np.empty((len(converted), len(converted[0])), dtype=object)
        for i, row in enumerate(converted):
            for j, e in enumerate(row):
                arr[i, j] = e
        return Matrix(arr, EXACT)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    # ----------------------------------------------------------- arithmetic
    def _check_mode(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if self.mode != other.mode:
            raise ModeMismatchError(
                f"cannot combine {self.mode}-mode and {other.mode}-mode matrices"
            )

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_mode(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix(self.data + other.data, self.mode)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_mode(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix(self.data - other.data, self.mode)

    def __neg__(self) -> "Matrix":
        return Matrix(-self.data, self.mode)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_mode(other)
        if self.cols != other.rows:
            raise ValueError(
                f"cannot multiply {self.shape} by {other.shape} matrices"
            )
        return Matrix(self.data @ other.data, self.mode)

    def scale(self, factor) -> "Matrix":
        """Multiply every entry by a scalar of the matching mode."""
        if self.mode == EXACT:
            f = _as_exact(factor)
            return Matrix(self.data * f, self.mode)
        return Matrix(self.data * complex(factor), self.mode)

    def transpose(self) -> "Matrix":
        return Matrix(self.data.T.copy(), self.mode)

    def conj(self) -> "Matrix":
        return Matrix(np.conj(self.data), self.mode)

    def adjoint(self) -> "Matrix":
        return Matrix(np.conj(self.data).T.copy(), self.mode)

    def trace(self):
        if not self.is_square:
            raise ValueError("trace of a non-square matrix")
        if self.mode == EXACT:
            t = GaussianRational(0)
            for i in range(self.rows):
                t = t + self.data[i, i]
            return t
        return complex(self.data.trace())

    def power(self, k: int) -> "Matrix":
        """Nonnegative matrix power by repeated squaring."""
        if not self.is_square:
            raise ValueError("power of a non-square matrix")
        if k < 0:
            raise ValueError("negative matrix power")
        result = identity(self.rows, self.mode)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base if k > 1 else base
            k >>= 1
        return result

    # ------------------------------------------------------------- queries
    def norm_fro_sq(self):
        """Squared Frobenius norm; a Fraction in exact mode, float otherwise."""
        if self.mode == EXACT:
            total = Fraction(0)
            for e in self.data.flat:
                total += e.abs_sq()
            return total
        return float(np.sum(np.abs(self.data) ** 2))

    def norm_fro(self) -> float:
        return math.sqrt(float(self.norm_fro_sq()))

    def is_zero(self) -> bool:
        if self.mode == EXACT:
            return all(not e for e in self.data.flat)
        return not np.any(self.data)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.mode != other.mode or self.shape != other.shape:
            return False
        if self.mode == EXACT:
            return all(a == b for a, b in zip(self.data.flat, other.data.flat))
        return bool(np.array_equal(self.data, other.data))

    def allclose(self, other: "Matrix", tol: float = 1e-12) -> bool:
        self._check_mode(other)
        if self.shape != other.shape:
            return False
        if self.mode == EXACT:
            return self == other
        return (self - other).norm_fro() <= tol * (1.0 + other.norm_fro())

    def entry(self, i: int, j: int):
        return self.data[i, j]

    def vec(self) -> np.ndarray:
        """Row-major flattening of the entries."""
        return self.data.reshape(-1)

    def to_float(self) -> "Matrix":
        if self.mode == FLOAT:
            return self
        arr = np.array(
            [[complex(e) for e in row] for row in self.data], dtype=np.complex128
        )
        return Matrix(arr, FLOAT)

    def to_exact(self) -> "Matrix":
        """Rationalize a float matrix entry-by-entry (binary floats are exact)."""
        if self.mode == EXACT:
            return self
        out = np.empty(self.shape, dtype=object)
        for i in range(self.rows):
            for j in range(self.cols):
                z = self.data[i, j]
                out[i, j] = GaussianRational(Fraction(z.real), Fraction(z.imag))
        return Matrix(out, EXACT)

    def det(self):
        """Determinant; exact in exact mode."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        if self.mode == FLOAT:
            return complex(np.linalg.det(self.data))
        work = [list(row) for row in self.data]
        n = self.rows
        sign = 1
        det = GaussianRational(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r][col]), None)
            if pivot is None:
                return GaussianRational(0)
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                sign = -sign
            p = work[col][col]
            det = det * p
            for r in range(col + 1, n):
                if work[r][col]:
                    f = work[r][col] / p
                    for c in range(col, n):
                        work[r][c] = work[r][c] - f * work[col][c]
        return det * sign if sign == 1 else -det

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {self.mode})"


# --------------------------------------------------------------------------
# constructors
# --------------------------------------------------------------------------

def zeros(rows: int, cols: int, mode: str = FLOAT) -> Matrix:
    if rows < 1 or cols < 1:
        raise ValueError("matrix dimensions must be positive")
    if mode == EXACT:
        arr = np.empty((rows, cols), dtype=object)
        z = GaussianRational(0)
        arr[:] = z
        return Matrix(arr, EXACT)
    return Matrix(np.zeros((rows, cols), dtype=np.complex128), FLOAT)


def identity(n: int, mode: str = FLOAT) -> Matrix:
    m = zeros(n, n, mode)
    one = GaussianRational(1) if mode == EXACT else 1.0 + 0.0j
    for i in range(n):
        m.data[i, i] = one
    return m


def block(grid) -> Matrix:
    """Assemble a matrix from a 2-d grid of equal-mode Matrix blocks."""
    modes = {m.mode for row in grid for m in row}
    if len(modes) != 1:
        raise ModeMismatchError("all blocks must share one scalar mode")
    data = np.block([[m.data for m in row] for row in grid])
    return Matrix(data, modes.pop())


# --------------------------------------------------------------------------
# free-function forms of the basic operations
# --------------------------------------------------------------------------

def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return a @ b


def adjoint(a: Matrix) -> Matrix:
    return a.adjoint()


def transpose(a: Matrix) -> Matrix:
    return a.transpose()


def conjugate(a: Matrix) -> Matrix:
    return a.conj()


def trace(a: Matrix):
    return a.trace()


# --------------------------------------------------------------------------
# linear-algebra kernels
# --------------------------------------------------------------------------

def least_squares_coeffs(basis, target: Matrix, tol: float = DEP_TOL):
    """Best coefficients expressing ``target`` as a combination of ``basis``.

    Returns ``(coeffs, residual)`` where residual is the Frobenius norm of
    the defect.  In exact mode the residual is exactly zero when the target
    lies in the span, and the true positive residual otherwise.
    """
    if not basis:
        return [], target.norm_fro()
    for b in basis:
        target._check_mode(b)
        if b.shape != target.shape:
            raise ValueError("basis and target shapes differ")
    if target.mode == FLOAT:
        cols = np.stack([b.vec() for b in basis], axis=1)
        t = target.vec()
        coeffs, *_ = np.linalg.lstsq(cols, t, rcond=None)
        residual = float(np.linalg.norm(cols @ coeffs - t))
        return [complex(c) for c in coeffs], residual
    return _exact_least_squares(basis, target)


def _exact_least_squares(basis, target):
    """Exact least squares via the (always consistent) normal equations."""
    vecs = [list(b.vec()) for b in basis]
    t = list(target.vec())
    d = len(vecs)
    gram = [
        [_dot_exact(vecs[i], vecs[j]) for j in range(d)] for i in range(d)
    ]
    rhs = [_dot_exact(vecs[i], t) for i in range(d)]
    coeffs = _exact_solve_consistent(gram, rhs)
    resid_sq = Fraction(0)
    for k in range(len(t)):
        r = t[k]
        for i in range(d):
            r = r - coeffs[i] * vecs[i][k]
        resid_sq += r.abs_sq()
    return coeffs, math.sqrt(float(resid_sq))


def _dot_exact(u, v):
    """Hermitian inner product sum(conj(u_k) * v_k) over Gaussian rationals."""
    total = GaussianRational(0)
    for a, b in zip(u, v):
        total = total + a.conjugate() * b
    return total


def _exact_solve_consistent(mat, rhs):
    """Solve a consistent square exact system, zeroing free variables."""
    n = len(mat)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
    pivots = []
    row = 0
    for col in range(n):
        pivot = next((r for r in range(row, n) if aug[r][col]), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        p = aug[row][col]
        aug[row] = [e / p for e in aug[row]]
        for r in range(n):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    coeffs = [GaussianRational(0)] * n
    for r, col in enumerate(pivots):
        coeffs[col] = aug[r][n]
    return coeffs


def nullspace(op: np.ndarray, rtol: float = DEP_TOL):
    """Orthonormal nullspace basis of a float operator via SVD.

    Returns ``(basis_vectors, gap_ratio)`` where basis vectors are rows and
    ``gap_ratio`` is smallest-kept-singular-value / largest-discarded (inf
    when the split is unambiguous).  A small ratio flags a marginal instance.
    """
    if op.size == 0:
        raise ValueError("empty operator")
    u, s, vh = np.linalg.svd(op)
    smax = s[0] if len(s) else 0.0
    thresh = rtol * max(1.0, smax)
    null_mask = s <= thresh
    ncols = op.shape[1]
    # svd reports min(m, n) singular values; trailing rows of vh beyond that
    # always belong to the nullspace
    kept = s[~null_mask]
    discarded = s[null_mask]
    basis = list(vh[len(s) :]) + [vh[i] for i in range(len(s)) if null_mask[i]]
    if len(discarded) == 0 or float(np.max(discarded)) == 0.0:
        gap = math.inf
    elif len(kept) == 0:
        gap = math.inf
    else:
        gap = float(np.min(kept)) / float(np.max(discarded))
    return [np.conj(v) for v in basis], gap


def exact_nullspace(rows):
    """Exact nullspace basis of a matrix given as rows of Gaussian rationals."""
    if not rows:
        raise ValueError("empty operator")
    work = [list(r) for r in rows]
    ncols = len(work[0])
    pivots = {}
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(work)) if work[r][col]), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        p = work[rank][col]
        work[rank] = [e / p for e in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col]:
                f = work[r][col]
                work[r] = [a - f * b for a, b in zip(work[r], work[rank])]
        pivots[col] = rank
        rank += 1
    basis = []
    free_cols = [c for c in range(ncols) if c not in pivots]
    for free in free_cols:
        v = [GaussianRational(0)] * ncols
        v[free] = GaussianRational(1)
        for col, r in pivots.items():
            v[col] = -work[r][free]
        basis.append(v)
    return basis


# --------------------------------------------------------------------------
# pre-scaling
# --------------------------------------------------------------------------

def common_scale(matrices):
    """One factor making the largest Frobenius norm at most 1.

    Float mode normalizes the maximum norm to exactly 1.  Exact mode uses the
    largest power-of-two denominator needed, so scaling stays rational and
    decisions stay tolerance-free.  Returns ``(factor, scaled_matrices)``.
    """
    mats = list(matrices)
    if not mats:
        return 1.0, []
    mode = mats[0].mode
    for m in mats:
        mats[0]._check_mode(m)
    if mode == FLOAT:
        biggest = max(m.norm_fro() for m in mats)
        if biggest == 0.0:
            return 1.0, mats
        factor = 1.0 / biggest
        return factor, [m.scale(factor) for m in mats]
    biggest_sq = max(m.norm_fro_sq() for m in mats)
    if biggest_sq <= 1:
        return Fraction(1), mats
    e = 0
    while biggest_sq > 4**e:
        e += 1
    factor = Fraction(1, 2**e)
    return factor, [m.scale(factor) for m in mats]
