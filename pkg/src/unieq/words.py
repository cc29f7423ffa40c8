"""Formal words in noncommuting letters, their enumeration and evaluation.

A word is stored in canonical run-length form: a sequence of (letter,
exponent) runs with adjacent runs on distinct letters.  Enumeration streams
words length by length, lexicographically within each length, optionally
pruning runs above an exponent cap and collapsing cyclic-rotation and
star-reversal duplicates (both are trace-preserving, which is what the
decision engines compare).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import groupby

from .numerics import EXACT, Matrix, identity

DEDUP_NONE = "none"
DEDUP_CYCLIC = "cyclic"
DEDUP_CYCLIC_STAR = "cyclic+star_reversal"
_DEDUP_CHOICES = (DEDUP_NONE, DEDUP_CYCLIC, DEDUP_CYCLIC_STAR)


@dataclass(frozen=True)
class Word:
    """A formal product of letter powers, in canonical run form."""

    runs: tuple
    alphabet_size: int

    def __post_init__(self):
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be positive")
        prev = None
        for letter, exp in self.runs:
            if not 0 <= letter < self.alphabet_size:
                raise ValueError(f"letter {letter} outside alphabet")
            if exp < 1:
                raise ValueError("run exponents must be at least 1")
            if letter == prev:
                raise ValueError("adjacent runs must use distinct letters")
            prev = letter
        object.__setattr__(self, "runs", tuple(tuple(r) for r in self.runs))

    @staticmethod
    def from_letters(letters, alphabet_size: int) -> "Word":
        runs = tuple((k, len(list(g))) for k, g in groupby(letters))
        return Word(runs, alphabet_size)

    @property
    def length(self) -> int:
        return sum(e for _, e in self.runs)

    def letters(self) -> tuple:
        out = []
        for letter, exp in self.runs:
            out.extend([letter] * exp)
        return tuple(out)

    def rotate(self, k: int = 1) -> "Word":
        seq = self.letters()
        if not seq:
            return self
        k %= len(seq)
        return Word.from_letters(seq[k:] + seq[:k], self.alphabet_size)

    def star_reversal(self) -> "Word":
        """Reverse the word and swap each letter with its star partner.

        Letters are paired (2j, 2j+1); the alphabet size must be even.
        Evaluating the result equals the adjoint of evaluating the original
        whenever letter 2j+1 is assigned the adjoint of letter 2j.
        """
        if self.alphabet_size % 2:
            raise ValueError("star reversal needs an even alphabet")
        seq = tuple(x ^ 1 for x in reversed(self.letters()))
        return Word.from_letters(seq, self.alphabet_size)

    def append_letter(self, letter: int) -> "Word":
        if not 0 <= letter < self.alphabet_size:
            raise ValueError(f"letter {letter} outside alphabet")
        if self.runs and self.runs[-1][0] == letter:
            head, (_, exp) = self.runs[:-1], self.runs[-1]
            return Word(head + ((letter, exp + 1),), self.alphabet_size)
        return Word(self.runs + ((letter, 1),), self.alphabet_size)

    def letter_name(self, letter: int) -> str:
        if self.alphabet_size == 2:
            return "st"[letter]
        base = f"x{letter // 2}"
        return base + ("*" if letter % 2 else "")

    def __str__(self):
        if not self.runs:
            return "1"
        parts = []
        for letter, exp in self.runs:
            name = self.letter_name(letter)
            parts.append(name if exp == 1 else f"{name}^{exp}")
        return " ".join(parts)


def empty_word(alphabet_size: int) -> Word:
    return Word((), alphabet_size)


# --------------------------------------------------------------------------
# length bound
# --------------------------------------------------------------------------

def pappacena_bound(m: int) -> float:
    """Word-length cutoff making the trace criterion for m-by-m pairs finite.

    Words longer than this bound add no new trace constraints; callers test
    integer lengths up to ``floor(pappacena_bound(m))``.
    """
    if m < 2:
        raise ValueError("bound requires matrix size at least 2")
    return m * math.sqrt(2.0 * m * m / (m - 1) + 0.25) + m / 2.0 - 2.0


# --------------------------------------------------------------------------
# enumeration
# --------------------------------------------------------------------------

def _check_dedup(dedup: str, alphabet_size: int):
    if dedup not in _DEDUP_CHOICES:
        raise ValueError(f"unknown dedup {dedup!r}; choices: {_DEDUP_CHOICES}")
    if dedup == DEDUP_CYCLIC_STAR and alphabet_size % 2:
        raise ValueError("star-reversal dedup needs an even alphabet")


def _is_canonical(seq: tuple, dedup: str) -> bool:
    """True when seq is the lexicographically least member of its dedup class."""
    if dedup == DEDUP_NONE:
        return True
    n = len(seq)
    for i in range(1, n):
        if seq[i:] + seq[:i] < seq:
            return False
    if dedup == DEDUP_CYCLIC_STAR:
        rev = tuple(x ^ 1 for x in reversed(seq))
        for i in range(n):
            if rev[i:] + rev[:i] < seq:
                return False
    return True


def _letter_strings(alphabet_size: int, length: int, max_exponent):
    """All letter tuples of one length, lexicographic, runs capped."""
    cap = max_exponent if max_exponent is not None else length
    path = []

    def go(depth, run_letter, run_len):
        if depth == length:
            yield tuple(path)
            return
        for letter in range(alphabet_size):
            if letter == run_letter and run_len >= cap:
                continue
            path.append(letter)
            new_run = run_len + 1 if letter == run_letter else 1
            yield from go(depth + 1, letter, new_run)
            path.pop()

    yield from go(0, -1, 0)


def enumerate_words(
    alphabet_size: int,
    max_length: int,
    max_exponent: int | None = None,
    dedup: str = DEDUP_NONE,
):
    """Stream all words of length 1..max_length, shortest first.

    Within one length the order is lexicographic on the letter sequence, so
    the stream is deterministic and certificate tie-breaking is reproducible.
    With deduplication only the least representative of each class appears.
    """
    if alphabet_size < 1:
        raise ValueError("alphabet_size must be positive")
    if max_exponent is not None and max_exponent < 1:
        raise ValueError("max_exponent must be positive")
    _check_dedup(dedup, alphabet_size)
    for length in range(1, max_length + 1):
        for seq in _letter_strings(alphabet_size, length, max_exponent):
            if _is_canonical(seq, dedup):
                yield Word.from_letters(seq, alphabet_size)


def word_count(alphabet_size: int, max_length: int, max_exponent=None) -> int:
    """Number of words of length 1..max_length with runs capped (no dedup)."""
    if max_length < 1:
        return 0
    cap = max_exponent if max_exponent is not None else max_length
    # v[L] counts capped strings of length L whose first letter is fixed
    v = [0] * (max_length + 1)
    for length in range(1, max_length + 1):
        total = 0
        for e in range(1, min(cap, length) + 1):
            if e == length:
                total += 1
            else:
                total += (alphabet_size - 1) * v[length - e]
        v[length] = total
    return alphabet_size * sum(v[1:])


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

def _check_letters(letters, alphabet_size: int):
    if len(letters) != alphabet_size:
        raise ValueError(
            f"expected {alphabet_size} letter matrices, got {len(letters)}"
        )
    first = letters[0]
    if not first.is_square:
        raise ValueError("letter matrices must be square")
    for m in letters:
        first._check_mode(m)
        if m.shape != first.shape:
            raise ValueError("letter matrices must share one size")


def eval_word(w: Word, letters) -> Matrix:
    """Evaluate a word at concrete letter matrices (empty word gives I)."""
    _check_letters(letters, w.alphabet_size)
    n = letters[0].rows
    result = identity(n, letters[0].mode)
    for letter, exp in w.runs:
        result = result @ letters[letter].power(exp)
    return result


def iter_word_traces(
    letter_sets,
    max_length: int,
    max_exponent: int | None = None,
    dedup: str = DEDUP_NONE,
    lengths=None,
):
    """Stream ``(word, traces)`` over every enumerated word.

    ``letter_sets`` is a list of letter assignments (each one matrix per
    letter); ``traces`` holds the trace of the word's product under each
    assignment, in order.  Products are built incrementally along the
    enumeration tree, so each tree edge costs one multiplication per set.
    """
    if not letter_sets:
        raise ValueError("need at least one letter set")
    alphabet_size = len(letter_sets[0])
    for ls in letter_sets:
        if len(ls) != alphabet_size:
            raise ValueError("letter sets must share one alphabet size")
        _check_letters(ls, alphabet_size)
    _check_dedup(dedup, alphabet_size)

    exact = letter_sets[0][0].mode == EXACT
    mats = [[m.data for m in ls] for ls in letter_sets]
    eyes = [identity(ls[0].rows, ls[0].mode).data for ls in letter_sets]
    nsets = len(letter_sets)
    cap = max_exponent
    path = []

    def _trace(arr):
        t = arr.trace()
        return t if exact else complex(t)

    def walk(depth, target, prods, run_letter, run_len):
        if depth == target:
            seq = tuple(path)
            if _is_canonical(seq, dedup):
                word = Word.from_letters(seq, alphabet_size)
                yield word, tuple(_trace(p) for p in prods)
            return
        for letter in range(alphabet_size):
            if letter == run_letter:
                if cap is not None and run_len >= cap:
                    continue
                new_run = run_len + 1
            else:
                new_run = 1
            nxt = [prods[s] @ mats[s][letter] for s in range(nsets)]
            path.append(letter)
            yield from walk(depth + 1, target, nxt, letter, new_run)
            path.pop()

    for length in lengths if lengths is not None else range(1, max_length + 1):
        yield from walk(0, length, eyes, -1, 0)


def word_trace_spectrum(
    X: Matrix,
    Y: Matrix,
    max_length: int,
    max_exponent: int | None = None,
    dedup: str = DEDUP_NONE,
):
    """Traces of every word evaluated at the letter pair (X, Y).

    Returns a list of (word, trace) in the deterministic stream order used
    everywhere else; feeding (A, adjoint(A)) gives the similarity invariants
    of A.
    """
    out = []
    for word, traces in iter_word_traces(
        [[X, Y]], max_length, max_exponent, dedup
    ):
        out.append((word, traces[0]))
    return out
