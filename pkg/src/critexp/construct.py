"""Deterministic builders for infinite binary words with prescribed critical
exponent.

The core construction iterates stages (r, t, s): each stage wraps the inner
word w as delete_prefix(t, mu^s(0^pad w)) where pad tops the leading zeros
of w up to exactly r.  With s >= 3, t < 2^s, delete_prefix(t, mu^s(0))
starting 00, and the stage values beta = r - t/2^s increasing toward the
target alpha, the nested words are prefix-nested, every finite prefix has
exponent below alpha, and the limit word attains alpha exactly.  On top of
that sit the prefix-preserving variant (any Thue-Morse factor as prefix,
any alpha >= 2), the arbitrary-prefix variant (any word w, alpha >= len(w),
via a zero block of length exactly len(w)), and near-zero points whose
exponent is the reciprocal of a prescribed small value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from .values import Exponent, ValidationError, format_rational
from .words import (
    FiniteWord,
    StreamWord,
    _tm_digits,
    delete_prefix,
    find_subword,
    mu_power,
    thue_morse_prefix,
    thue_morse_stream,
)

TM_SEARCH_MARGIN = 32  # window factor for factor-of-tau searches; recurrence needs ~9x


@dataclass(frozen=True)
class Stage:
    """One construction stage; its value is beta = r - t / 2^s."""

    r: int
    t: int
    s: int

    def beta(self) -> Fraction:
        return Fraction(self.r) - Fraction(self.t, 1 << self.s)

    def as_list(self):
        return [self.r, self.t, self.s]


@dataclass(frozen=True)
class Schedule:
    """Stage sequence targeting exponent alpha > 2.

    Invariants: s >= 3 and increasing, t < 2^s, delete_prefix(t, mu^s(0))
    begins 00, and the betas increase strictly toward (never reaching) alpha.
    """

    alpha: Fraction
    stages: Tuple[Stage, ...]


def _tau_zero_pair_positions(s: int):
    """Positions t with tau[t] == tau[t+1] == 0, t + 1 < 2^s."""
    tau = _tm_digits(1 << s)
    return [t for t in range((1 << s) - 1) if tau[t] == 0 and tau[t + 1] == 0]


def _stage_after(alpha: Fraction, prev_beta: Fraction, prev_s: int) -> Stage:
    """Smallest valid next stage: s = max(3, prev_s + 1) escalating, then the
    smallest t whose beta lands in (prev_beta, alpha)."""
    if alpha.denominator == 1:
        r = int(alpha)
    else:
        r = int(alpha) + 1
    s = max(3, prev_s + 1)
    while True:
        for t in _tau_zero_pair_positions(s):
            beta = Fraction(r) - Fraction(t, 1 << s)
            if prev_beta < beta < alpha:
                return Stage(r, t, s)
        s += 1
        if s > prev_s + 64:
            raise ValidationError("schedule-progress", f"no stage found for alpha={alpha}")


def make_schedule(alpha, stages: int) -> Schedule:
    """Deterministic schedule with the given number of stages; alpha > 2."""
    alpha = Fraction(alpha)
    if alpha <= 2:
        raise ValidationError("alpha-above-two", f"schedules need alpha > 2, got {alpha}; use the Thue-Morse path for alpha = 2")
    if stages < 1:
        raise ValidationError("stage-count", "need at least one stage")
    out = []
    prev_beta, prev_s = Fraction(2), 0
    for _ in range(stages):
        stage = _stage_after(alpha, prev_beta, prev_s)
        out.append(stage)
        prev_beta, prev_s = stage.beta(), stage.s
    return Schedule(alpha, tuple(out))


def validate_schedule(schedule: Schedule):
    """Raise unless every schedule invariant holds."""
    prev_beta, prev_s = None, 0
    for stage in schedule.stages:
        if stage.s < 3:
            raise ValidationError("stage-s", f"s must be >= 3, got {stage.s}")
        if not 1 <= stage.t < (1 << stage.s):
            raise ValidationError("stage-t", f"t must be in [1, 2^s), got {stage.t}")
        head = delete_prefix(stage.t, mu_power(stage.s, FiniteWord([0])))
        if len(head) < 2 or head[0] != 0 or head[1] != 0:
            raise ValidationError("stage-head", f"delete_prefix({stage.t}, mu^{stage.s}(0)) must begin 00")
        beta = stage.beta()
        if beta >= schedule.alpha:
            raise ValidationError("stage-beta", f"beta {beta} not below alpha {schedule.alpha}")
        if prev_beta is not None and beta <= prev_beta:
            raise ValidationError("stage-beta-increasing", f"beta {beta} does not increase past {prev_beta}")
        if stage.s <= prev_s and prev_beta is not None:
            raise ValidationError("stage-s-increasing", "stage s values must increase")
        prev_beta, prev_s = beta, stage.s


def _leading_zeros(digits: np.ndarray) -> int:
    nz = np.nonzero(digits)[0]
    return int(nz[0]) if nz.size else int(digits.shape[0])


def _phi(stage: Stage, w: FiniteWord) -> FiniteWord:
    """One stage application.  The inner word's leading zeros count toward
    the stage's zero block, keeping the block's total run exactly r."""
    lead = _leading_zeros(w.digits)
    pad = stage.r - lead
    if pad < 0:
        raise ValidationError("stage-zero-run", f"inner word leads with {lead} zeros > r = {stage.r}")
    arg = FiniteWord(np.concatenate([np.zeros(pad, dtype=np.uint8), w.digits]))
    return delete_prefix(stage.t, mu_power(stage.s, arg))


def _nested_length(stages) -> int:
    length = 0
    for stage in reversed(stages):
        lead = 2 if length > 0 else 0  # nonempty nested words start exactly 001
        length = (stage.r - lead + length) * (1 << stage.s) - stage.t
    return length


@dataclass(frozen=True)
class ConstructedPoint:
    """A constructed infinite word plus the point it encodes.

    ``exponent`` is the exact critical exponent of the full infinite word,
    claimed by the construction theorems and finitely certified by prefix
    measurements; emitting k digits brackets the encoded value within 2^-k.
    """

    stream: StreamWord
    exponent: Exponent
    provenance: dict

    def prefix(self, k: int) -> FiniteWord:
        return self.stream.prefix(k)

    def bracket(self, k: int) -> Tuple[Fraction, Fraction]:
        """Exact dyadic bounds on the encoded value from the first k digits."""
        if k < 1:
            raise ValidationError("bracket-depth", "bracket depth must be at least 1")
        word = self.stream.prefix(k)
        lo = word.value()
        return lo, lo + Fraction(1, 2 ** k)

    def kappa(self) -> Fraction:
        """The point's image under the exponent-reciprocal map: 1/exponent."""
        return self.exponent.reciprocal()


def _cr_emit_factory(alpha: Fraction, initial: Tuple[Stage, ...]):
    def emit(k: int) -> np.ndarray:
        stages = list(initial)
        while _nested_length(stages) < k:
            last = stages[-1]
            stages.append(_stage_after(alpha, last.beta(), last.s))
        w = FiniteWord()
        for stage in reversed(stages):
            w = _phi(stage, w)
        return w.digits

    return emit


def build_cr(schedule: Schedule) -> ConstructedPoint:
    """Stagewise morphic word attaining E = alpha exactly in the limit.

    Every emitted prefix has exponent in [2, alpha) (from length 2 on), the
    stream begins 001, and no prefix contains 000.  The schedule is extended
    deterministically whenever the requested depth outruns it.
    """
    validate_schedule(schedule)
    alpha = schedule.alpha
    stream = StreamWord(
        _cr_emit_factory(alpha, schedule.stages),
        base=2,
        exponent=Exponent(alpha),
        tag="stagewise-morphic",
    )
    provenance = {
        "builder": "build_cr",
        "alpha": format_rational(alpha),
        "stages": [stage.as_list() for stage in schedule.stages],
    }
    return ConstructedPoint(stream, Exponent(alpha), provenance)


def is_tm_factor(w: FiniteWord) -> Optional[int]:
    """Smallest position of w inside the Thue-Morse sequence, or None.

    A search window of 32 * len(w) + 64 digits suffices: every factor of
    length n recurs within every window of about 9n digits.
    """
    if not w.is_binary():
        raise ValidationError("binary-word", "the Thue-Morse sequence is binary")
    window = TM_SEARCH_MARGIN * max(1, len(w)) + 64
    return find_subword(w, thue_morse_prefix(window))


def build_with_tm_prefix(p: FiniteWord, alpha) -> ConstructedPoint:
    """A word starting with the Thue-Morse factor p and attaining E = alpha.

    alpha = 2 shifts the Thue-Morse sequence itself; alpha > 2 uses a first
    stage (r=2, t=5, s1) with 2^s1 covering p's occurrence, then shifts by
    the occurrence position plus 2^s1 - 5 so the emitted word begins with p.
    """
    alpha = Fraction(alpha)
    if alpha < 2:
        raise ValidationError("alpha-at-least-two", f"no infinite binary word has exponent {alpha} < 2")
    position = is_tm_factor(p)
    if position is None:
        raise ValidationError("thue-morse-factor", f"{p} is not a factor of the Thue-Morse sequence")

    if alpha == 2:
        stream = delete_prefix(position, thue_morse_stream()).with_metadata(
            Exponent(2), "thue-morse-suffix"
        )
        provenance = {
            "builder": "build_with_tm_prefix",
            "alpha": "2/1",
            "prefix": str(p),
            "shift": position,
        }
        point = ConstructedPoint(stream, Exponent(2), provenance)
    else:
        s1 = 3
        while (1 << s1) < max(position + len(p), len(p) + 1):
            s1 += 1
        stage1 = Stage(2, 5, s1)
        shift = position + (1 << s1) - 5
        core = StreamWord(
            _cr_emit_factory(alpha, (stage1,)),
            base=2,
            exponent=Exponent(alpha),
            tag="stagewise-morphic",
        )
        stream = delete_prefix(shift, core).with_metadata(Exponent(alpha), "tm-prefix-construction")
        provenance = {
            "builder": "build_with_tm_prefix",
            "alpha": format_rational(alpha),
            "prefix": str(p),
            "stage1": stage1.as_list(),
            "shift": shift,
        }
        point = ConstructedPoint(stream, Exponent(alpha), provenance)

    if len(p) and point.prefix(len(p)) != p:
        raise AssertionError("construction failed to reproduce the requested prefix")
    return point


def extend_word(w: FiniteWord, alpha) -> ConstructedPoint:
    """Extend w to an infinite word with E = alpha, for any alpha >= len(w).

    Writes w, then zeros until the trailing zero block has length exactly
    len(w), then the tail (from the third digit on) of a stagewise word with
    exponent alpha.  The block 0^len(w) occurs exactly once; words of length
    <= 2 are Thue-Morse factors and delegate to build_with_tm_prefix.
    """
    if len(w) == 0:
        raise ValidationError("nonempty-word", "extension target word must be nonempty")
    if not w.is_binary():
        raise ValidationError("binary-word", "extension works over the binary alphabet")
    alpha = Fraction(alpha)
    if alpha < len(w):
        raise ValidationError("alpha-at-least-length", f"need alpha >= len(w) = {len(w)}, got {alpha}")
    if len(w) <= 2:
        inner = build_with_tm_prefix(w, alpha)
        provenance = {
            "builder": "extend_word",
            "alpha": format_rational(alpha),
            "word": str(w),
            "delegated": inner.provenance,
        }
        return ConstructedPoint(inner.stream, inner.exponent, provenance)

    trailing = 0
    digits = w.digits
    while trailing < len(w) and digits[len(w) - 1 - trailing] == 0:
        trailing += 1
    pad = len(w) - trailing  # w 0^pad ends with the block 0^len(w)
    schedule = make_schedule(alpha, 1)
    core = build_cr(schedule)
    head = np.concatenate([digits, np.zeros(pad, dtype=np.uint8)])

    def emit(k: int, _head=head, _core=core) -> np.ndarray:
        if k <= _head.shape[0]:
            return _head[:k]
        tail = _core.prefix(k - _head.shape[0] + 2).digits[2:]
        return np.concatenate([_head, tail])

    stream = StreamWord(emit, base=2, exponent=Exponent(alpha), tag="prefix-extension")
    provenance = {
        "builder": "extend_word",
        "alpha": format_rational(alpha),
        "word": str(w),
        "zero_block_start": len(w) - trailing,
        "zero_block_length": len(w),
        "stages": [stage.as_list() for stage in schedule.stages],
    }
    return ConstructedPoint(stream, Exponent(alpha), provenance)


def build_near_zero(n: int, y) -> ConstructedPoint:
    """A point x in [0, 2^-2^n] with kappa(x) = y, for 0 <= y <= 2^-n.

    y = 0 maps to the point 0 by convention (all-zero expansion, infinite
    exponent); otherwise x extends 0^(2^n) with target exponent 1/y.
    """
    if n < 1:
        raise ValidationError("near-zero-n", "n must be at least 1")
    y = Fraction(y)
    if y < 0 or y > Fraction(1, 1 << n):
        raise ValidationError("near-zero-range", f"need 0 <= y <= 2^-{n}, got {y}")
    if y == 0:
        stream = StreamWord(lambda k: np.zeros(k, dtype=np.uint8), base=2, exponent=Exponent.infinity(), tag="zero-point")
        return ConstructedPoint(
            stream,
            Exponent.infinity(),
            {"builder": "build_near_zero", "n": n, "y": "0/1", "point": "zero"},
        )
    block = FiniteWord(np.zeros(1 << n, dtype=np.uint8))
    inner = extend_word(block, 1 / y)
    provenance = {
        "builder": "build_near_zero",
        "n": n,
        "y": format_rational(y),
        "delegated": inner.provenance,
    }
    return ConstructedPoint(inner.stream, inner.exponent, provenance)
