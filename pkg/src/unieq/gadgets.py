"""Block "gadget" matrices that carry matrix pairs above a chain of identities.

Every builder here emits a strictly block upper triangular matrix with the
identity along the first block superdiagonal and the pair data placed in
blocks with column minus row at least two.  Unitary similarity or congruence
of two such gadgets is equivalent to the simultaneous unitary equivalences of
the pairs they carry, which is what the engines exploit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .numerics import EXACT, FLOAT, Matrix, block, common_scale, identity, zeros

# (i parity, j parity) demanded for each of the four pair families, 1-based:
# set 1 rides similarity via U, set 2 congruence via U, set 3 the conjugated
# similarity relation, set 4 the conjugated congruence relation.
_PARITY = {
    1: (1, 0),
    2: (1, 1),
    3: (0, 0),
    4: (0, 1),
}

_SINGULAR_TOL = 1e-10


@dataclass
class ProblemInstance:
    """Four families of same-size matrix pairs sharing one scalar mode.

    S1 pairs must match via U, S2 via U and its transpose, S3 and S4 via the
    entrywise conjugate of U (similarity and congruence respectively).
    """

    n: int
    S1: list = field(default_factory=list)
    S2: list = field(default_factory=list)
    S3: list = field(default_factory=list)
    S4: list = field(default_factory=list)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("block size n must be positive")
        mode = None
        for _, _, a, b in self.pairs():
            for m in (a, b):
                if m.shape != (self.n, self.n):
                    raise ValueError(
                        f"all matrices must be {self.n}x{self.n}, got {m.shape}"
                    )
                if mode is None:
                    mode = m.mode
                elif m.mode != mode:
                    raise ValueError("all matrices must share one scalar mode")

    def pairs(self):
        """Yield (set_id, pair_index, A, B) over every stored pair."""
        for set_id, family in enumerate((self.S1, self.S2, self.S3, self.S4), 1):
            for idx, (a, b) in enumerate(family):
                yield set_id, idx, a, b

    @property
    def counts(self):
        return (len(self.S1), len(self.S2), len(self.S3), len(self.S4))

    @property
    def total_pairs(self) -> int:
        return sum(self.counts)

    @property
    def mode(self) -> str:
        for _, _, a, _ in self.pairs():
            return a.mode
        return FLOAT

    def family(self, set_id: int):
        return (self.S1, self.S2, self.S3, self.S4)[set_id - 1]

    def scaled_common(self):
        """Rescale every matrix by one common factor (max norm <= 1)."""
        mats = []
        for _, _, a, b in self.pairs():
            mats.extend((a, b))
        factor, scaled = common_scale(mats)
        it = iter(scaled)
        families = [[], [], [], []]
        for set_id, _, _, _ in self.pairs():
            families[set_id - 1].append((next(it), next(it)))
        return factor, ProblemInstance(self.n, *families)


@dataclass(frozen=True)
class Placement:
    set_id: int
    pair_index: int
    i: int
    j: int


@dataclass(frozen=True)
class GadgetLayout:
    """Block positions assigned to each pair inside a k-block gadget."""

    n: int
    k: int
    placements: tuple

    def __post_init__(self):
        seen = set()
        for p in self.placements:
            if not (1 <= p.i < p.j <= self.k):
                raise ValueError(f"placement ({p.i},{p.j}) outside 1..{self.k}")
            if p.j - p.i < 2:
                raise ValueError(
                    f"placement ({p.i},{p.j}) must sit above the identity "
                    "superdiagonal (column - row >= 2)"
                )
            if (p.i, p.j) in seen:
                raise ValueError(f"duplicate placement ({p.i},{p.j})")
            seen.add((p.i, p.j))

    def check_parity(self):
        """Enforce the row/column parity demanded by each pair family."""
        for p in self.placements:
            want = _PARITY[p.set_id]
            if (p.i % 2, p.j % 2) != want:
                raise ValueError(
                    f"set {p.set_id} pair at block ({p.i},{p.j}) violates the "
                    f"required (row, column) parity {want}"
                )

    def slot_of(self, set_id: int, pair_index: int):
        for p in self.placements:
            if p.set_id == set_id and p.pair_index == pair_index:
                return (p.i, p.j)
        raise KeyError((set_id, pair_index))


@dataclass(frozen=True)
class Gadget:
    M: Matrix
    layout: GadgetLayout


def class_slots(k: int, set_id: int):
    """Admissible (i, j) block slots for one pair family, row-major."""
    pi, pj = _PARITY[set_id]
    return [
        (i, j)
        for i in range(1, k + 1)
        if i % 2 == pi
        for j in range(i + 2, k + 1)
        if j % 2 == pj
    ]


def plan_layout(m1: int, m2: int, m3: int, m4: int, n: int) -> GadgetLayout:
    """Smallest block count whose parity classes fit every family, filled
    row-major within each class."""
    counts = (m1, m2, m3, m4)
    if any(m < 0 for m in counts):
        raise ValueError("pair counts must be nonnegative")
    if sum(counts) == 0:
        raise ValueError("at least one pair family must be nonempty")
    if n < 1:
        raise ValueError("block size n must be positive")
    k = 3
    while True:
        if all(len(class_slots(k, s + 1)) >= counts[s] for s in range(4)):
            break
        k += 1
    placements = []
    for set_id in range(1, 5):
        slots = class_slots(k, set_id)
        for idx in range(counts[set_id - 1]):
            i, j = slots[idx]
            placements.append(Placement(set_id, idx, i, j))
    return GadgetLayout(n, k, tuple(placements))


def _assemble(n: int, k: int, placed: dict, mode: str) -> Matrix:
    eye = identity(n, mode)
    zero = zeros(n, n, mode)
    grid = []
    for i in range(1, k + 1):
        row = []
        for j in range(1, k + 1):
            if j == i + 1:
                row.append(eye)
            else:
                row.append(placed.get((i, j), zero))
        grid.append(row)
    return block(grid)


def build_similarity_gadget(pairs, n: int, layout: GadgetLayout | None = None):
    """Gadget pair whose unitary similarity encodes simultaneous unitary
    similarity of the given pairs.

    The default layout uses k = m + 2 blocks with pair i at block (i, i+2);
    any layout with enough distinct slots above the identity superdiagonal
    works, no parity is needed here.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("need at least one pair")
    _check_pairs(pairs, n)
    m = len(pairs)
    if layout is None:
        placements = tuple(
            Placement(1, idx, idx + 1, idx + 3) for idx in range(m)
        )
        layout = GadgetLayout(n, m + 2, placements)
    if len(layout.placements) < m:
        raise ValueError("layout does not cover every pair")
    mode = pairs[0][0].mode
    placed_a = {}
    placed_b = {}
    for p in layout.placements:
        if p.pair_index < m:
            a, b = pairs[p.pair_index]
            placed_a[(p.i, p.j)] = a
            placed_b[(p.i, p.j)] = b
    ga = Gadget(_assemble(n, layout.k, placed_a, mode), layout)
    gb = Gadget(_assemble(n, layout.k, placed_b, mode), layout)
    return ga, gb


def build_general_gadget(inst: ProblemInstance, layout: GadgetLayout | None = None):
    """Gadget pair whose unitary *congruence* encodes the full four-family
    problem, using the parity placement rules."""
    if inst.total_pairs == 0:
        raise ValueError("instance has no pairs")
    m1, m2, m3, m4 = inst.counts
    if layout is None:
        layout = plan_layout(m1, m2, m3, m4, inst.n)
    layout.check_parity()
    placed_a = {}
    placed_b = {}
    for set_id in range(1, 5):
        family = inst.family(set_id)
        for idx in range(len(family)):
            i, j = layout.slot_of(set_id, idx)
            a, b = family[idx]
            placed_a[(i, j)] = a
            placed_b[(i, j)] = b
    mode = inst.mode
    ga = Gadget(_assemble(inst.n, layout.k, placed_a, mode), layout)
    gb = Gadget(_assemble(inst.n, layout.k, placed_b, mode), layout)
    return ga, gb


def _check_pairs(pairs, n: int):
    for a, b in pairs:
        if a.shape != (n, n) or b.shape != (n, n):
            raise ValueError(f"pair matrices must be {n}x{n}")
        a._check_mode(b)


# --------------------------------------------------------------------------
# congruence reductions
# --------------------------------------------------------------------------

def congruence_triple(A: Matrix, B: Matrix, allow_shortcut: bool = False):
    """The three derived pairs whose simultaneous unitary similarity is
    equivalent to unitary congruence of A and B.

    With ``allow_shortcut`` the third pair is dropped when A or B is
    (detectably) nonsingular; a missed shortcut is harmless, the triple is
    always valid.
    """
    A._check_mode(B)
    if A.shape != B.shape or not A.is_square:
        raise ValueError("congruence needs two square matrices of equal size")
    triple = [
        (A @ A.adjoint(), B @ B.adjoint()),
        (A @ A.conj(), B @ B.conj()),
        (A.transpose() @ A.conj(), B.transpose() @ B.conj()),
    ]
    if allow_shortcut and (_nonsingular(A) or _nonsingular(B)):
        return triple[:2]
    return triple


def _nonsingular(M: Matrix) -> bool:
    det = M.det()
    if M.mode == EXACT:
        return bool(det)
    # callers pass pre-scaled matrices, so an absolute floor is meaningful
    return abs(det) > _SINGULAR_TOL


def _k_gadget(A: Matrix, with_third: bool) -> Matrix:
    n = A.rows
    mode = A.mode
    eye = identity(n, mode)
    zero = zeros(n, n, mode)
    third = A.transpose() @ A.conj() if with_third else zero
    grid = [
        [zero, eye, A @ A.adjoint(), A @ A.conj()],
        [zero, zero, eye, third],
        [zero, zero, zero, eye],
        [zero, zero, zero, zero],
    ]
    return block(grid)


def build_congruence_K(A: Matrix) -> Matrix:
    """The 4n-by-4n nilpotent gadget reducing unitary congruence of A to
    unitary similarity (index four, so word exponents above 3 vanish)."""
    if not A.is_square:
        raise ValueError("K gadget needs a square matrix")
    return _k_gadget(A, with_third=True)


def build_congruence_K_prime(A: Matrix) -> Matrix:
    """Variant of the K gadget valid when A or B is nonsingular (the block
    carrying transpose(A) conj(A) is zeroed)."""
    if not A.is_square:
        raise ValueError("K gadget needs a square matrix")
    return _k_gadget(A, with_third=False)
