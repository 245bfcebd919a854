"""Finite and lazy infinite words, the Thue-Morse sequence and morphism,
deletion/negation primitives, and base-n expansions of rationals.

Words are immutable digit sequences over {0, ..., base-1} (binary by
default).  Infinite words exist only through finite-prefix emission with an
explicit depth: generators are pure, so emitting k digits twice gives
identical results and prefixes of increasing length are nested.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Callable, Iterable, Optional, Union

import numpy as np

from .values import Exponent, ValidationError

MAX_STR_BASE = 10  # words serialize as ASCII digit strings


class FiniteWord:
    """An immutable finite word over the alphabet {0, ..., base-1}."""

    __slots__ = ("_digits", "_base")

    def __init__(self, digits: Union[Iterable[int], np.ndarray] = (), base: int = 2):
        if not (2 <= base <= 256):
            raise ValidationError("alphabet-size", f"base must be in [2, 256], got {base}")
        arr = np.asarray(digits, dtype=np.uint8).copy() if not isinstance(digits, np.ndarray) else digits.astype(np.uint8, copy=True)
        if arr.ndim != 1:
            raise ValidationError("word-shape", "digits must be one-dimensional")
        if arr.size and int(arr.max()) >= base:
            raise ValidationError("digit-range", f"digit {int(arr.max())} out of range for base {base}")
        arr.setflags(write=False)
        object.__setattr__(self, "_digits", arr)
        object.__setattr__(self, "_base", base)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteWord is immutable")

    @classmethod
    def from_string(cls, text: str, base: int = 2) -> "FiniteWord":
        try:
            digits = [int(ch) for ch in text.strip()]
        except ValueError:
            raise ValidationError("word-syntax", f"word must be ASCII digits, got {text!r}") from None
        return cls(digits, base=base)

    @property
    def digits(self) -> np.ndarray:
        """Read-only uint8 digit array."""
        return self._digits

    @property
    def base(self) -> int:
        return self._base

    def __len__(self) -> int:
        return int(self._digits.shape[0])

    def __getitem__(self, item):
        if isinstance(item, slice):
            return FiniteWord(self._digits[item], base=self._base)
        return int(self._digits[item])

    def __iter__(self):
        return (int(d) for d in self._digits)

    def __eq__(self, other):
        if not isinstance(other, FiniteWord):
            return NotImplemented
        return self._base == other._base and np.array_equal(self._digits, other._digits)

    def __hash__(self):
        return hash((self._base, self._digits.tobytes()))

    def __add__(self, other: "FiniteWord") -> "FiniteWord":
        if not isinstance(other, FiniteWord):
            return NotImplemented
        if other._base != self._base:
            raise ValidationError("alphabet-mismatch", "cannot concatenate words over different alphabets")
        return FiniteWord(np.concatenate([self._digits, other._digits]), base=self._base)

    def __str__(self):
        if self._base > MAX_STR_BASE:
            raise ValidationError("serializable-base", f"digit-string form needs base <= {MAX_STR_BASE}")
        return "".join(str(int(d)) for d in self._digits)

    def __repr__(self):
        if self._base <= MAX_STR_BASE:
            return f"FiniteWord({str(self)!r}, base={self._base})"
        return f"FiniteWord(<{len(self)} digits>, base={self._base})"

    def is_binary(self) -> bool:
        return self._base == 2

    def negate(self) -> "FiniteWord":
        if self._base != 2:
            raise ValidationError("binary-word", "negation is defined for binary words")
        return FiniteWord(1 - self._digits, base=2)

    def reverse(self) -> "FiniteWord":
        return FiniteWord(self._digits[::-1], base=self._base)

    def value(self) -> Fraction:
        """(0.w)_b: the rational whose base-b expansion starts with w then zeros."""
        total = 0
        for d in self._digits:
            total = total * self._base + int(d)
        return Fraction(total, self._base ** len(self))


EMPTY_WORD = FiniteWord()


class StreamWord:
    """A lazy infinite word defined by a pure prefix generator.

    ``prefix_fn(k)`` must return at least k digits as a uint8 array and be
    deterministic; nested-prefix consistency is the generator's contract.
    Emitted prefixes are memoized behind a lock, so concurrent emission from
    a shared stream is race-free and always yields identical digits.
    Optional metadata: an exact critical exponent claim for the full
    infinite word and a construction tag.
    """

    __slots__ = ("_prefix_fn", "_base", "_exponent", "_tag", "_cache", "_lock")

    def __init__(
        self,
        prefix_fn: Callable[[int], np.ndarray],
        base: int = 2,
        exponent: Optional[Exponent] = None,
        tag: Optional[str] = None,
    ):
        self._prefix_fn = prefix_fn
        self._base = base
        self._exponent = exponent
        self._tag = tag
        self._cache = np.zeros(0, dtype=np.uint8)
        self._lock = threading.Lock()

    @property
    def base(self) -> int:
        return self._base

    @property
    def exponent(self) -> Optional[Exponent]:
        """Claimed exact critical exponent of the infinite word, if known."""
        return self._exponent

    @property
    def tag(self) -> Optional[str]:
        return self._tag

    def prefix(self, k: int) -> FiniteWord:
        """First k digits."""
        if k < 0:
            raise ValidationError("prefix-length", "prefix length must be nonnegative")
        with self._lock:
            if self._cache.shape[0] < k:
                emitted = np.asarray(self._prefix_fn(k), dtype=np.uint8)
                if emitted.shape[0] < k:
                    raise ValidationError("generator-depth", f"generator produced {emitted.shape[0]} < {k} digits")
                self._cache = emitted
            digits = self._cache[:k].copy()
        return FiniteWord(digits, base=self._base)

    def digit(self, i: int) -> int:
        return self.prefix(i + 1)[i]

    def with_metadata(self, exponent: Optional[Exponent], tag: Optional[str]) -> "StreamWord":
        return StreamWord(self._prefix_fn, base=self._base, exponent=exponent, tag=tag)


Word = Union[FiniteWord, StreamWord]


class Morphism:
    """A substitution sending each symbol to a nonempty finite word."""

    __slots__ = ("_images", "_base")

    def __init__(self, images: Iterable[FiniteWord], base: int = 2):
        images = tuple(images)
        if len(images) != base:
            raise ValidationError("morphism-images", f"need one image per symbol, got {len(images)} for base {base}")
        for img in images:
            if len(img) == 0:
                raise ValidationError("morphism-images", "images must be nonempty")
            if img.base != base:
                raise ValidationError("alphabet-mismatch", "image alphabet differs from domain")
        self._images = images
        self._base = base

    @property
    def base(self) -> int:
        return self._base

    def image(self, symbol: int) -> FiniteWord:
        return self._images[symbol]

    def apply(self, w: FiniteWord) -> FiniteWord:
        if w.base != self._base:
            raise ValidationError("alphabet-mismatch", "word alphabet differs from morphism domain")
        if len(w) == 0:
            return FiniteWord(base=self._base)
        parts = [self._images[d].digits for d in w]
        return FiniteWord(np.concatenate(parts), base=self._base)

    def __call__(self, w: FiniteWord) -> FiniteWord:
        return self.apply(w)


#: The Thue-Morse morphism 0 -> 01, 1 -> 10.
MU = Morphism((FiniteWord([0, 1]), FiniteWord([1, 0])))

_tm_lock = threading.Lock()
_tm_digits_cache = np.array([0], dtype=np.uint8)


def _tm_digits(k: int) -> np.ndarray:
    """First k Thue-Morse digits via the bitwise-negation doubling step."""
    global _tm_digits_cache
    with _tm_lock:
        while _tm_digits_cache.shape[0] < k:
            _tm_digits_cache = np.concatenate([_tm_digits_cache, 1 - _tm_digits_cache])
        return _tm_digits_cache[:k]


def thue_morse_prefix(k: int) -> FiniteWord:
    """First k digits of the Thue-Morse sequence.

    Built by repeated doubling: given the first 2^n digits, the next 2^n
    digits are their bitwise negations.
    """
    if k < 0:
        raise ValidationError("prefix-length", "prefix length must be nonnegative")
    return FiniteWord(_tm_digits(k).copy(), base=2)


def thue_morse_stream() -> StreamWord:
    """The Thue-Morse sequence as a stream; its critical exponent is exactly 2."""
    return StreamWord(_tm_digits, base=2, exponent=Exponent(2), tag="thue-morse")


def mu_power(s: int, w: FiniteWord) -> FiniteWord:
    """Apply the Thue-Morse morphism s times; the result has length len(w) * 2^s."""
    if s < 0:
        raise ValidationError("power-count", "morphism power must be nonnegative")
    if not w.is_binary():
        raise ValidationError("binary-word", "the Thue-Morse morphism acts on binary words")
    cur = w.digits
    for _ in range(s):
        nxt = np.empty(cur.shape[0] * 2, dtype=np.uint8)
        nxt[0::2] = cur
        nxt[1::2] = 1 - cur
        cur = nxt
    return FiniteWord(cur, base=2)


def delete_prefix(n: int, w: Word) -> Word:
    """Remove the first n digits.  Finite words clamp to the empty word.

    On streams the exponent metadata is dropped: deleting a prefix of an
    arbitrary infinite word can change its critical exponent.
    """
    if n < 0:
        raise ValidationError("deletion-count", "deletion count must be nonnegative")
    if isinstance(w, FiniteWord):
        return w[n:] if n < len(w) else FiniteWord(base=w.base)
    return StreamWord(lambda k, _w=w, _n=n: _w.prefix(k + _n).digits[_n:], base=w.base, tag=w.tag)


def negate(w: Word) -> Word:
    """Digit-wise 1 - digit on binary words; an involution that preserves
    critical exponents, so stream metadata survives."""
    if isinstance(w, FiniteWord):
        return w.negate()
    if w.base != 2:
        raise ValidationError("binary-word", "negation is defined for binary words")
    return StreamWord(lambda k, _w=w: 1 - _w.prefix(k).digits, base=2, exponent=w.exponent, tag=w.tag)


def find_subword(u: FiniteWord, w: FiniteWord) -> Optional[int]:
    """Smallest start index at which u occurs in w, or None.

    The empty word occurs at position 0 of every word.
    """
    if u.base != w.base:
        raise ValidationError("alphabet-mismatch", "subword search needs a common alphabet")
    if len(u) == 0:
        return 0
    pos = w.digits.tobytes().find(u.digits.tobytes())
    return pos if pos >= 0 else None


def expand(x: Union[Fraction, int], base: int, k: int) -> FiniteWord:
    """First k digits of the base-n expansion of a rational x in [0, 1].

    Terminating expansions use the ultimately-(n-1) convention, e.g. the
    binary expansion of 1/2 is 0111...; x = 0 is all zeros and x = 1 is all
    (n-1)s.
    """
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValidationError("unit-interval", f"x must be in [0, 1], got {x}")
    if not 2 <= base <= 256:
        raise ValidationError("alphabet-size", f"base must be in [2, 256], got {base}")
    if k < 0:
        raise ValidationError("prefix-length", "digit count must be nonnegative")
    if x == 0:
        return FiniteWord(np.zeros(k, dtype=np.uint8), base=base)
    if x == 1:
        return FiniteWord(np.full(k, base - 1, dtype=np.uint8), base=base)
    digits = np.empty(k, dtype=np.uint8)
    num, den = x.numerator, x.denominator
    for i in range(k):
        num *= base
        d, num = divmod(num, den)
        if num == 0:
            # terminating expansion: borrow one and emit the (n-1)-tail
            digits[i] = d - 1
            digits[i + 1 :] = base - 1
            break
        digits[i] = d
    return FiniteWord(digits, base=base)
