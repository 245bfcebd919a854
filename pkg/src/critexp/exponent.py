"""Exact critical exponents of finite words, with witnesses, an independent
brute-force oracle, power tests, and an incremental extension state.

The critical exponent E(w) of a nonempty finite word is the maximum of
length/period over all subwords, taking each subword's smallest period.
For finite words this equals the supremum of rationals r such that w
contains an r-power: a contained p/q-power is a subword u of length p with
period q, and p/q <= len(u)/per(u) since per(u) <= q; conversely the
subword maximizing len/per is itself a (len(u)/per(u))-power, so the
supremum is attained and the two definitions agree.  E of the empty word
is 0.  Everything is exact integer/rational arithmetic; the hot scan lives
in the kernel backends.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import _kernels
from .values import Exponent, ValidationError
from .words import FiniteWord, StreamWord

ORACLE_DEFAULT_BOUND = 64

ZERO_EXPONENT = Exponent(0)


@dataclass(frozen=True)
class PowerWitness:
    """Certificate that w[start : start+length] has period ``period``.

    length/period equals the exponent being witnessed.
    """

    start: int
    length: int
    period: int

    def exponent(self) -> Exponent:
        return Exponent(self.length, self.period)

    def holds_for(self, w: FiniteWord) -> bool:
        """Replay the witness against the word."""
        if self.start < 0 or self.period < 1 or self.length < 1:
            return False
        if self.start + self.length > len(w):
            return False
        seg = w.digits[self.start : self.start + self.length]
        return bool(np.array_equal(seg[self.period :], seg[: -self.period])) if self.period < self.length else self.period == self.length


def is_power(w: FiniteWord, p: int, q: int) -> bool:
    """True iff w is a p/q-power: w = x^m y with len(x) = q and y a prefix of x.

    p must equal len(w); q larger than p admits no factorization, so False.
    """
    if p != len(w):
        raise ValidationError("power-length", f"p must equal the word length {len(w)}, got {p}")
    if p < 1 or q < 1:
        raise ValidationError("power-positive", "p and q must be positive")
    if q > p:
        return False
    if q == p:
        return True
    return bool(np.array_equal(w.digits[q:], w.digits[:-q]))


def critical_exponent_value(w: FiniteWord) -> Exponent:
    """E(w) without a witness."""
    if len(w) == 0:
        return ZERO_EXPONENT
    nums, dens = _kernels.prefix_exponents(w.digits)
    return Exponent(int(nums[-1]), int(dens[-1]))


def critical_exponent(w: FiniteWord) -> Tuple[Exponent, Optional[PowerWitness]]:
    """E(w) together with one maximizing witness.

    Witness tie-break: smallest start, then largest length, then smallest
    period.  The empty word has exponent 0 and no witness.
    """
    if len(w) == 0:
        return ZERO_EXPONENT, None
    value = critical_exponent_value(w)
    start, p, q = _kernels.find_witness(w.digits, value.num, value.den)
    witness = PowerWitness(int(start), int(p), int(q))
    return value, witness


def prefix_exponents(w: FiniteWord) -> list:
    """[E(w[:1]), E(w[:2]), ..., E(w)]; nondecreasing."""
    nums, dens = _kernels.prefix_exponents(w.digits)
    return [Exponent(int(n), int(d)) for n, d in zip(nums, dens)]


def critical_exponent_oracle(w: FiniteWord, max_length: int = ORACLE_DEFAULT_BOUND) -> Exponent:
    """Brute-force E(w) by exhaustive (start, length, period) enumeration.

    Deliberately shares no code with the scan kernels: plain byte slices and
    integer cross-multiplication.  Rejects words longer than ``max_length``.
    """
    n = len(w)
    if n > max_length:
        raise ValidationError("oracle-bound", f"oracle accepts words of length <= {max_length}, got {n}")
    if n == 0:
        return ZERO_EXPONENT
    raw = w.digits.tobytes()
    best_p, best_q = 1, 1
    for start in range(n):
        for length in range(1, n - start + 1):
            sub = raw[start : start + length]
            for q in range(1, length + 1):
                if length * best_q > best_p * q and sub[q:] == sub[: length - q]:
                    best_p, best_q = length, q
    return Exponent(best_p, best_q)


class ExtensionState:
    """Value-semantics incremental exponent tracker for word extension.

    Holds the word so far, its exact exponent, and the per-period suffix-run
    table needed to extend by one symbol in O(len) time.  ``extend`` returns
    a new state; instances are never mutated, so they are safe to share.
    """

    __slots__ = ("word", "exponent", "_runs", "_num", "_den")

    def __init__(self, word, exponent, runs, num, den):
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "exponent", exponent)
        object.__setattr__(self, "_runs", runs)
        object.__setattr__(self, "_num", num)
        object.__setattr__(self, "_den", den)

    def __setattr__(self, name, value):
        raise AttributeError("ExtensionState is immutable")

    @classmethod
    def start(cls, word: Optional[FiniteWord] = None) -> "ExtensionState":
        if word is None:
            word = FiniteWord()
        n = len(word)
        runs = np.arange(n + 1, dtype=np.int64)
        num, den = (1, 1) if n else (0, 1)
        digits = word.digits
        for pos in range(1, n):
            runs, num, den = _advance(runs, digits, pos, num, den)
        runs.setflags(write=False)
        return cls(word, Exponent(num, den), runs, num, den)

    def extend(self, symbol: int) -> "ExtensionState":
        if not 0 <= symbol < self.word.base:
            raise ValidationError("digit-range", f"symbol {symbol} out of range for base {self.word.base}")
        new_word = self.word + FiniteWord([symbol], base=self.word.base)
        digits = new_word.digits
        pos = len(new_word) - 1
        runs = np.concatenate([self._runs, [len(new_word)]])
        num, den = self._num, self._den
        if num < den:  # nonempty words have exponent >= 1
            num, den = 1, 1
        if pos >= 1:
            runs, num, den = _advance(runs, digits, pos, num, den)
        else:
            runs = runs.copy()
        runs.setflags(write=False)
        return ExtensionState(new_word, Exponent(num, den), runs, num, den)


def _advance(runs, digits, pos, num, den):
    """One scan step: update suffix runs for the symbol at ``pos``."""
    runs = runs.copy()
    window = runs[1 : pos + 1]
    qarr = np.arange(1, pos + 1, dtype=np.int64)
    eq = digits[pos - 1 :: -1] == digits[pos]
    np.add(window, 1, out=window, where=eq)
    np.copyto(window, qarr, where=~eq)
    for i in np.nonzero(window * den > num * qarr)[0]:
        q = int(i) + 1
        if int(window[i]) * den > num * q:
            num, den = int(window[i]), q
    return runs, num, den


def extend(state: ExtensionState, symbol: int) -> ExtensionState:
    """Extend the state's word by one symbol; the exponent never decreases."""
    return state.extend(symbol)


def max_prefix_exponent(stream: StreamWord, depth: int) -> Exponent:
    """E of the depth-length prefix of a stream; nondecreasing in depth."""
    if depth < 1:
        raise ValidationError("prefix-depth", "depth must be at least 1")
    return critical_exponent_value(stream.prefix(depth))
