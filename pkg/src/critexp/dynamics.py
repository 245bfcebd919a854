"""Exact cylinder arithmetic on [0,1] and certificates for the map sending
x to the reciprocal critical exponent of its base-n expansion.

The map itself cannot be evaluated at arbitrary reals by any finite
computation, so every dynamical statement here is certified on constructed
points whose exponents are known by the construction theorems, with the
certification depth recorded.  Certificate fields are explicitly tagged
machine-checked versus paper-backed.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import numpy as np

from . import _kernels
from .construct import ConstructedPoint, build_near_zero, build_with_tm_prefix
from .exponent import critical_exponent_value
from .values import ValidationError, format_rational
from .words import FiniteWord, expand, find_subword, thue_morse_prefix

#: kappa(x_tau) is exactly 1/2: the Thue-Morse word has critical exponent 2.
X_TAU_KAPPA = Fraction(1, 2)

PROBE_CHUNK = 2048


@dataclass(frozen=True)
class DyadicRational:
    """numerator / 2^exponent in [0, 1], canonical (odd numerator or zero)."""

    numerator: int
    exponent: int

    def __post_init__(self):
        if self.numerator < 0 or self.exponent < 0:
            raise ValidationError("dyadic-range", "dyadic rationals here are nonnegative")
        num, k = self.numerator, self.exponent
        while num and num % 2 == 0 and k > 0:
            num //= 2
            k -= 1
        if num == 0:
            k = 0
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "exponent", k)
        if self.as_fraction() > 1:
            raise ValidationError("dyadic-range", "value must lie in [0, 1]")

    @classmethod
    def from_fraction(cls, x: Fraction) -> "DyadicRational":
        den = x.denominator
        k = den.bit_length() - 1
        if den != 1 << k:
            raise ValidationError("dyadic-denominator", f"{x} is not dyadic")
        return cls(x.numerator, k)

    @classmethod
    def from_word(cls, w: FiniteWord) -> "DyadicRational":
        """(0.w)_2 for a binary word."""
        if not w.is_binary():
            raise ValidationError("binary-word", "dyadic values come from binary words")
        return cls.from_fraction(w.value())

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __str__(self):
        return format_rational(self.as_fraction())


@dataclass(frozen=True)
class Cylinder:
    """The interval of reals whose binary expansion begins with ``word``.

    Open by default (the two dyadic endpoints excluded); closed cylinders
    include both endpoints and are used for horseshoe intervals.
    Width is exactly 2^-len(word).
    """

    word: FiniteWord
    closed: bool = False

    def __post_init__(self):
        if len(self.word) == 0:
            raise ValidationError("nonempty-word", "cylinders need a nonempty word")
        if not self.word.is_binary():
            raise ValidationError("binary-word", "cylinders are over binary expansions")

    @property
    def lower(self) -> Fraction:
        return self.word.value()

    @property
    def upper(self) -> Fraction:
        return self.word.value() + Fraction(1, 2 ** len(self.word))

    def contains(self, x: Fraction) -> bool:
        if self.closed:
            return self.lower <= x <= self.upper
        return self.lower < x < self.upper

    def contains_interval(self, lo: Fraction, hi: Fraction) -> bool:
        """Whole [lo, hi] inside the cylinder (strictly, when open)."""
        if self.closed:
            return self.lower <= lo and hi <= self.upper
        return self.lower < lo and hi < self.upper

    def strictly_left_of(self, x: Fraction) -> bool:
        return self.upper < x

    def disjoint_from(self, other: "Cylinder") -> bool:
        return self.upper < other.lower or other.upper < self.lower


def cylinder(w: FiniteWord) -> Cylinder:
    """The open cylinder of w, with exact dyadic endpoints."""
    return Cylinder(w, closed=False)


def x_tau(precision: int) -> Tuple[DyadicRational, DyadicRational]:
    """Bracket of width 2^-precision around the point whose binary expansion
    is the Thue-Morse sequence.  Its kappa value is exactly 1/2."""
    if precision < 1:
        raise ValidationError("precision", "precision must be at least 1")
    lo = thue_morse_prefix(precision).value()
    return DyadicRational.from_fraction(lo), DyadicRational.from_fraction(lo + Fraction(1, 2 ** precision))


def _x_tau_fraction_bracket(precision: int) -> Tuple[Fraction, Fraction]:
    lo = thue_morse_prefix(precision).value()
    return lo, lo + Fraction(1, 2 ** precision)


def _expansion_prefix(x: Union[Fraction, int, FiniteWord], base: int, depth: int) -> FiniteWord:
    if isinstance(x, FiniteWord):
        if x.base != base:
            raise ValidationError("alphabet-mismatch", f"prefix word has base {x.base}, expected {base}")
        if len(x) == 0:
            raise ValidationError("nonempty-word", "expansion prefix must be nonempty")
        return x[: min(depth, len(x))]
    return expand(Fraction(x), base, depth)


def kappa_n_upper_bound(x: Union[Fraction, int, FiniteWord], n: int, depth: int) -> Fraction:
    """1/E of the depth-long base-n expansion prefix: an upper bound on the
    kappa value of x, nonincreasing in depth."""
    if n < 2:
        raise ValidationError("alphabet-size", "base must be at least 2")
    if depth < 1:
        raise ValidationError("prefix-depth", "depth must be at least 1")
    word = _expansion_prefix(x, n, depth)
    return critical_exponent_value(word).reciprocal()


def kappa2_upper_bound(x: Union[Fraction, int, FiniteWord], depth: int) -> Fraction:
    """Binary-expansion case of kappa_n_upper_bound."""
    return kappa_n_upper_bound(x, 2, depth)


@dataclass(frozen=True)
class A2nMembership:
    """Prefix-level evidence that x's base-n expansion uses only digits 0/1."""

    status: str  # YES_SO_FAR | NO | UNKNOWN
    witness_position: Optional[int] = None
    witness_digit: Optional[int] = None


def a2n_member(x: Union[Fraction, int, FiniteWord], n: int, depth: int) -> A2nMembership:
    if n < 2:
        raise ValidationError("alphabet-size", "base must be at least 2")
    if depth < 1:
        return A2nMembership("UNKNOWN")
    word = _expansion_prefix(x, n, depth)
    offending = np.nonzero(word.digits >= 2)[0]
    if offending.size:
        pos = int(offending[0])
        return A2nMembership("NO", pos, int(word.digits[pos]))
    return A2nMembership("YES_SO_FAR")


def kappa_sup_truncated(x: Union[Fraction, int], max_base: int, depth: int) -> Tuple[Fraction, List[Tuple[int, Fraction]]]:
    """Max over bases 2..max_base of the per-base prefix bounds.

    An upper-bound estimate of a base-truncated supremum; says nothing about
    bases above max_base.
    """
    if max_base < 2:
        raise ValidationError("max-base", "max base must be at least 2")
    per_base = [(n, kappa_n_upper_bound(Fraction(x), n, depth)) for n in range(2, max_base + 1)]
    return max(bound for _, bound in per_base), per_base


@dataclass(frozen=True)
class HorseshoeCertificate:
    """m pairwise disjoint closed intervals, each strictly left of x_tau,
    whose words are Thue-Morse factors.

    Machine-checked: disjointness, placement, factor occurrences (the k-th
    interval's word occurs inside the Thue-Morse prefix of length 2^(k+3)).
    Paper-backed, not machine-checkable: each interval maps onto [0, 1/2),
    which covers J = [0, x_tau].  The certified entropy lower bound is
    log(order), stored symbolically as the log argument.
    """

    order: int
    intervals: Tuple[Cylinder, ...]
    factor_positions: Tuple[int, ...]
    x_tau_precision: int
    x_tau_lower: DyadicRational
    x_tau_upper: DyadicRational
    adjacent_gaps: Tuple[Tuple[str, str], ...]  # (upper of I_k, lower of I_{k+1})
    entropy_log_argument: int


def horseshoe_certificate(m: int) -> HorseshoeCertificate:
    """Certificate that the binary exponent-reciprocal map has an m-horseshoe."""
    if m < 2:
        raise ValidationError("horseshoe-order", "order must be at least 2")
    intervals = []
    positions = []
    for k in range(1, m + 1):
        word = thue_morse_prefix(1 << (k + 1)) + FiniteWord([0])
        interval = Cylinder(word, closed=True)
        pos = find_subword(word, thue_morse_prefix(1 << (k + 3)))
        if pos is None:
            raise ValidationError("horseshoe-factor", f"{len(word)}-digit interval word not found in the expected window")
        intervals.append(interval)
        positions.append(pos)

    precision = (1 << (m + 1)) + 16
    lo, hi = _x_tau_fraction_bracket(precision)
    gaps = []
    for a, b in zip(intervals, intervals[1:]):
        if not a.upper < b.lower:
            raise ValidationError("horseshoe-disjoint", "intervals are not pairwise disjoint")
        gaps.append((format_rational(a.upper), format_rational(b.lower)))
    for interval in intervals:
        if not interval.upper < lo:
            raise ValidationError("horseshoe-placement", "interval not strictly left of x_tau")
    return HorseshoeCertificate(
        order=m,
        intervals=tuple(intervals),
        factor_positions=tuple(positions),
        x_tau_precision=precision,
        x_tau_lower=DyadicRational.from_fraction(lo),
        x_tau_upper=DyadicRational.from_fraction(hi),
        adjacent_gaps=tuple(gaps),
        entropy_log_argument=m,
    )


@dataclass(frozen=True)
class LiYorkeWitnesses:
    """Separated pair construction after the finite-type Li-Yorke lemma.

    y1 (expansion 0000...) and y2 (expansion 010...) have kappa values equal
    to dyadic snapshots of the constructed points z1 (expansion 00...) and
    z2 (expansion 01...), both of which map into the w2 cylinder; the
    snapshot error is at most 2^-depth.  The separation y2 - y1 > 1/8 is
    certified from exact brackets.
    """

    w1: FiniteWord
    w2: FiniteWord
    depth: int
    kappa_target: Fraction  # value inside the w2 cylinder hit by kappa(z1), kappa(z2)
    z1: ConstructedPoint
    z2: ConstructedPoint
    z1_snapshot: Fraction
    z2_snapshot: Fraction
    y1: ConstructedPoint
    y2: ConstructedPoint
    y1_bracket: Tuple[Fraction, Fraction]
    y2_bracket: Tuple[Fraction, Fraction]
    separation_lower: Fraction


def liyorke_witnesses(w1: FiniteWord, w2: FiniteWord, depth: int) -> LiYorkeWitnesses:
    """Construct and certify the separated pair for target cylinder w2.

    Preconditions: both words encode values below 1/2 (first digit 0) and
    the depth leaves room for every bracket check.
    """
    for name, w in (("w1", w1), ("w2", w2)):
        if len(w) == 0 or not w.is_binary():
            raise ValidationError("cylinder-word", f"{name} must be a nonempty binary word")
        if w.value() >= Fraction(1, 2):
            raise ValidationError("value-below-half", f"(0.{w})_2 must be below 1/2")
    if depth < max(16, len(w2) + 8):
        raise ValidationError("witness-depth", f"depth too small for the bracket checks, need >= {max(16, len(w2) + 8)}")

    target_cyl = cylinder(w2)
    kappa_target = w2.value() + Fraction(3, 2 ** (len(w2) + 2))
    if not target_cyl.contains(kappa_target):
        raise AssertionError("kappa target must lie strictly inside the target cylinder")

    z1 = build_with_tm_prefix(FiniteWord([0, 0]), 1 / kappa_target)
    z2 = build_with_tm_prefix(FiniteWord([0, 1]), 1 / kappa_target)
    z1_lo, z1_hi = z1.bracket(depth)
    z2_lo, z2_hi = z2.bracket(depth)
    if not (0 < z1_lo and z1_hi <= Fraction(1, 4)):
        raise AssertionError("z1 must sit inside (0, 1/4]")
    if not (Fraction(1, 4) <= z2_lo and z2_hi <= Fraction(1, 2)):
        raise AssertionError("z2 must sit inside [1/4, 1/2]")

    y1 = build_near_zero(2, z1_lo)
    y2 = build_with_tm_prefix(FiniteWord([0, 1, 0]), 1 / z2_lo)
    y1_bracket = y1.bracket(depth)
    y2_bracket = y2.bracket(depth)
    if not y1_bracket[1] <= Fraction(1, 16):
        raise AssertionError("y1 must sit inside [0, 1/16]")
    if not (Fraction(1, 4) <= y2_bracket[0] and y2_bracket[1] <= Fraction(3, 8)):
        raise AssertionError("y2 must sit inside [1/4, 3/8]")
    separation = y2_bracket[0] - y1_bracket[1]
    if not separation > Fraction(1, 8):
        raise AssertionError("bracket separation must exceed 1/8")

    return LiYorkeWitnesses(
        w1=w1,
        w2=w2,
        depth=depth,
        kappa_target=kappa_target,
        z1=z1,
        z2=z2,
        z1_snapshot=z1_lo,
        z2_snapshot=z2_lo,
        y1=y1,
        y2=y2,
        y1_bracket=y1_bracket,
        y2_bracket=y2_bracket,
        separation_lower=separation,
    )


@dataclass(frozen=True)
class FixedPointCandidate:
    """alpha with |x(alpha) - alpha| certified below 2^-iterations, where
    x(alpha) is the canonical constructed point with kappa = alpha inside
    the left neighborhood.  CANDIDATE status only: existence of a true fixed
    point nearby is paper-backed, exactness is not machine-certified."""

    alpha: Fraction
    x_bracket: Tuple[Fraction, Fraction]
    residual: Tuple[Fraction, Fraction]
    depth: int
    status: str = "CANDIDATE"


@dataclass(frozen=True)
class FixedPointSearch:
    epsilon: Fraction
    iterations: int
    cylinder_word: FiniteWord
    alpha_range: Tuple[Fraction, Fraction]
    candidates: Tuple[FixedPointCandidate, ...]
    bisection_steps: int
    note: Optional[str] = None


def _xtau_certify_below(value: Fraction, start_precision: int = 16) -> bool:
    """True once a bracket certifies value < x_tau; False if value >= x_tau."""
    precision = start_precision
    while precision <= (1 << 22):
        lo, hi = _x_tau_fraction_bracket(precision)
        if value <= lo:
            return value < hi  # value <= lo < x_tau unless value inside
        if value >= hi:
            return False
        precision *= 2
    raise ValidationError("precision-limit", "could not separate value from x_tau")


def _left_neighborhood_word(epsilon: Fraction) -> FiniteWord:
    """Smallest m whose cylinder word tau_(m)0 sits inside (x_tau - eps, x_tau)."""
    for m in range(1, 26):
        word = thue_morse_prefix(1 << m) + FiniteWord([0])
        cyl = Cylinder(word, closed=False)
        precision = (1 << m) + 16
        lo, hi = _x_tau_fraction_bracket(precision)
        # upper endpoint strictly below x_tau, lower endpoint above x_tau - eps
        if cyl.upper <= lo and hi < cyl.lower + epsilon:
            return word
    raise ValidationError("neighborhood-size", f"no cylinder found inside the eps = {epsilon} left neighborhood")


def fixed_point_candidates(epsilon, iterations: int) -> FixedPointSearch:
    """Bisect alpha over the canonical family x(alpha) = point with kappa =
    alpha inside the left neighborhood of x_tau, down to residual width
    2^-iterations.  Emits CANDIDATE records only."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValidationError("epsilon-positive", "epsilon must be positive")
    if not _xtau_certify_below(epsilon):
        raise ValidationError("epsilon-below-xtau", "epsilon must be below x_tau")
    if iterations < 1:
        raise ValidationError("iterations", "iterations must be at least 1")

    word = _left_neighborhood_word(epsilon)
    cyl = Cylinder(word, closed=False)
    alpha_lo, alpha_hi = cyl.lower, cyl.upper
    base_depth = iterations + 12

    def point_at(alpha: Fraction) -> ConstructedPoint:
        return build_with_tm_prefix(word, 1 / alpha)

    def residual_sign(alpha: Fraction):
        pt = point_at(alpha)
        depth = base_depth
        while True:
            lo, hi = pt.bracket(depth)
            if lo > alpha:
                return 1, pt, (lo, hi), depth
            if hi < alpha:
                return -1, pt, (lo, hi), depth
            if depth >= 4 * iterations + 64:
                return 0, pt, (lo, hi), depth
            depth *= 2

    sign_lo = residual_sign(alpha_lo)[0]
    sign_hi = residual_sign(alpha_hi)[0]
    if sign_lo <= 0 or sign_hi >= 0:
        return FixedPointSearch(epsilon, iterations, word, (alpha_lo, alpha_hi), (), 0,
                                note="residual does not change sign over the canonical family")

    candidates: List[FixedPointCandidate] = []
    steps = 0
    lo_a, hi_a = alpha_lo, alpha_hi
    for _ in range(iterations + 10):
        mid = (lo_a + hi_a) / 2
        sign, pt, bracket, depth = residual_sign(mid)
        steps += 1
        if sign > 0:
            lo_a = mid
        elif sign < 0:
            hi_a = mid
        else:
            candidates.append(
                FixedPointCandidate(mid, bracket, (bracket[0] - mid, bracket[1] - mid), depth)
            )
            break

    if not candidates:
        tol = Fraction(1, 2 ** iterations)
        for alpha in (lo_a, hi_a):
            pt = point_at(alpha)
            lo, hi = pt.bracket(base_depth)
            if -tol < lo - alpha and hi - alpha < tol:
                candidates.append(FixedPointCandidate(alpha, (lo, hi), (lo - alpha, hi - alpha), base_depth))
    for cand in candidates:
        if not cyl.contains_interval(*cand.x_bracket):
            raise AssertionError("candidate bracket escaped the certified neighborhood")
    return FixedPointSearch(epsilon, iterations, word, (alpha_lo, alpha_hi), tuple(candidates), steps)


@dataclass(frozen=True)
class ProbeStatistics:
    """Seeded empirical exponent statistics over uniform random words,
    with the exact avoid-000/111 probability for comparison."""

    samples: int
    prefix_len: int
    seed: int
    workers: int
    histogram: Tuple[Tuple[str, int], ...]  # (exponent "p/q", count), ascending
    count_at_least_3: int
    fraction_at_least_3: Fraction
    exact_prob_triple_run: Fraction


def count_words_avoiding_triple_runs(length: int) -> int:
    """Binary words of the given length with no 000 and no 111."""
    if length < 0:
        raise ValidationError("length", "length must be nonnegative")
    if length == 0:
        return 1
    if length == 1:
        return 2
    prev2, prev1 = 2, 4  # lengths 1 and 2
    for _ in range(length - 2):
        prev2, prev1 = prev1, prev1 + prev2
    return prev1


def measure_probe(samples: int, prefix_len: int, seed: int, workers: int = 1) -> ProbeStatistics:
    """Empirical distribution of E over uniform random length-prefix_len
    words.  Sampling is chunked with per-chunk seed substreams, so results
    are identical for any worker count."""
    if samples < 1:
        raise ValidationError("samples", "need at least one sample")
    if prefix_len < 1:
        raise ValidationError("prefix-length", "prefix length must be at least 1")
    workers = max(1, workers)
    sizes = [PROBE_CHUNK] * (samples // PROBE_CHUNK)
    if samples % PROBE_CHUNK:
        sizes.append(samples % PROBE_CHUNK)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))

    def run_chunk(i: int):
        rng = np.random.Generator(np.random.PCG64(streams[i]))
        words = rng.integers(0, 2, size=(sizes[i], prefix_len), dtype=np.uint8)
        return _kernels.exponent_batch(words)

    if workers == 1:
        parts = [run_chunk(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_chunk, range(len(sizes))))

    histogram: Counter = Counter()
    count_ge3 = 0
    for nums, dens in parts:
        count_ge3 += int(np.count_nonzero(nums >= 3 * dens))
        for n, d in zip(nums.tolist(), dens.tolist()):
            histogram[Fraction(n, d)] += 1
    ordered = tuple((format_rational(value), histogram[value]) for value in sorted(histogram))
    return ProbeStatistics(
        samples=samples,
        prefix_len=prefix_len,
        seed=seed,
        workers=workers,
        histogram=ordered,
        count_at_least_3=count_ge3,
        fraction_at_least_3=Fraction(count_ge3, samples),
        exact_prob_triple_run=1 - Fraction(count_words_avoiding_triple_runs(prefix_len), 2 ** prefix_len),
    )
