"""Certified branch-and-bound over binary extensions.

Depth-d minima of E(wv) over v in {0,1}^d give exact lower bounds on the
least exponent achievable by any infinite extension of w (extension never
decreases the exponent).  On top of the search sit counterexample hunting
for the false claim "every alpha > max(2, E(w)) is achievable", and an
evidence-only map of achievable exponents per target.

Searches are deterministic: children in 0-before-1 order, ties resolved
lexicographically, and the optional root split into subtrees is part of the
search plan, so the same plan replays identically under any worker count.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .construct import build_with_tm_prefix, extend_word, is_tm_factor
from .exponent import critical_exponent_value
from .values import Exponent, ValidationError, format_rational
from .words import FiniteWord, negate

STATUS_REALIZED = "REALIZED"
STATUS_IMPOSSIBLE = "IMPOSSIBLE-BELOW-BOUND"
STATUS_UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SearchResult:
    """Exact per-depth minima of E(w + extension).

    ``levels[j]`` is the minimum over all length-j extensions (levels[0] is
    E(w) itself); ``minimizer`` is the lexicographically smallest extension
    attaining levels[depth].  ``complete`` is False when a node budget
    truncated the search, in which case the minima are not certificates.
    """

    word: FiniteWord
    depth: int
    levels: Tuple[Exponent, ...]
    minimizer: FiniteWord
    nodes: int
    complete: bool
    split: int

    @property
    def value(self) -> Exponent:
        return self.levels[self.depth]


def _kernel_search(digits: np.ndarray, depth: int, prune: bool, budget: int):
    lvl_num, lvl_den, minimizer, nodes, complete = _kernels.dfs_minima(digits, depth, prune, budget)
    levels = tuple(Exponent(int(n), int(d)) for n, d in zip(lvl_num, lvl_den))
    return levels, minimizer, int(nodes), bool(complete)


def run_search(
    w: FiniteWord,
    depth: int,
    *,
    split: int = 0,
    workers: int = 1,
    prune: bool = True,
    node_budget: int = 0,
) -> SearchResult:
    """Search plan: evaluate all prefixes up to ``split`` directly, then run
    one independent pruned DFS per length-``split`` prefix (possibly on
    threads).  Results are identical for any ``workers`` value."""
    if depth < 0:
        raise ValidationError("search-depth", "depth must be nonnegative")
    if not w.is_binary():
        raise ValidationError("binary-word", "extension search runs over the binary alphabet")
    split = max(0, min(split, depth))
    workers = max(1, workers)

    if split == 0 or depth == 0:
        levels, minimizer, nodes, complete = _kernel_search(w.digits, depth, prune, node_budget)
        return SearchResult(w, depth, levels, FiniteWord(minimizer), nodes, complete, split=0)

    # minima over the prefix layers, one exact scan per prefix
    best: List[Optional[Exponent]] = [None] * (split + 1)
    best[0] = critical_exponent_value(w)
    nodes = 0
    for j in range(1, split + 1):
        for bits in itertools.product((0, 1), repeat=j):
            value = critical_exponent_value(w + FiniteWord(bits))
            nodes += 1
            if best[j] is None or value < best[j]:
                best[j] = value

    sub_budget = node_budget // (1 << split) if node_budget > 0 else 0
    bases = [np.concatenate([w.digits, np.array(bits, dtype=np.uint8)]) for bits in itertools.product((0, 1), repeat=split)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        outcomes = list(pool.map(lambda b: _kernel_search(b, depth - split, prune, sub_budget), bases))

    complete = all(ok for _, _, _, ok in outcomes)
    levels: List[Exponent] = list(best)  # type: ignore[arg-type]
    for j in range(split + 1, depth + 1):
        levels.append(min(sub[0][j - split] for sub in outcomes))
    final = levels[depth]
    minimizer = FiniteWord()
    for bits, (sub_levels, sub_min, sub_nodes, _ok) in zip(itertools.product((0, 1), repeat=split), outcomes):
        nodes += sub_nodes
        if len(minimizer) == 0 and sub_levels[depth - split] == final:
            minimizer = FiniteWord(bits) + FiniteWord(sub_min)
    return SearchResult(w, depth, tuple(levels), minimizer, nodes, complete, split=split)


def min_exponent_at_depth(
    w: FiniteWord,
    d: int,
    *,
    split: int = 0,
    workers: int = 1,
    prune: bool = True,
    node_budget: int = 0,
) -> SearchResult:
    """Exact min of E(wv) over v in {0,1}^d plus the lexicographically
    smallest minimizer; a valid lower bound on every infinite extension."""
    return run_search(w, d, split=split, workers=workers, prune=prune, node_budget=node_budget)


@dataclass(frozen=True)
class BoundsReport:
    """Two-sided bounds on the least exponent achievable above w."""

    word: FiniteWord
    depth: int
    lower: Exponent
    minimizer: FiniteWord
    upper: Exponent
    upper_provenance: Optional[dict]
    nodes: int
    complete: bool


def ew_bounds(
    w: FiniteWord,
    d: int,
    *,
    split: int = 0,
    workers: int = 1,
    node_budget: int = 0,
) -> BoundsReport:
    """Lower bound from the depth-d search; upper bound from a construction:
    exponent 2 when w is a Thue-Morse factor (the empty word included), else
    len(w) via extend_word."""
    search = run_search(w, d, split=split, workers=workers, node_budget=node_budget)
    lower = search.value

    upper = Exponent.infinity()
    provenance: Optional[dict] = None
    position = is_tm_factor(w)
    if position is not None:
        point = build_with_tm_prefix(w, Fraction(2))
        upper = Exponent(2)
        provenance = point.provenance
    elif len(w) >= 3 and not (search.complete and lower > len(w)):
        point = extend_word(w, Fraction(len(w)))
        upper = Exponent(len(w))
        provenance = point.provenance
    return BoundsReport(w, d, lower, search.minimizer, upper, provenance, search.nodes, search.complete)


@dataclass(frozen=True)
class CounterexampleRecord:
    """w together with a finite certificate that every extension exceeds
    max(2, E(w)): the depth-d minimum is strictly above the threshold."""

    word: FiniteWord
    exponent: Exponent
    threshold: Exponent
    certificate_depth: int
    lower_bound: Exponent
    negation_partner: Optional[str] = None


@dataclass(frozen=True)
class CounterexampleSearchResult:
    max_len: int
    depth: int
    records: Tuple[CounterexampleRecord, ...]
    words_scanned: int
    nodes: int
    complete: bool


def counterexample_search(max_len: int, d: int, *, node_budget: int = 0) -> CounterexampleSearchResult:
    """All binary words of length <= max_len whose depth-d minimum exceeds
    max(2, E(w)), each with the smallest certifying depth <= d.

    Output is closed under bitwise negation; partners are cross-linked.
    """
    if max_len < 1:
        raise ValidationError("max-length", "max_len must be at least 1")
    if d < 1:
        raise ValidationError("search-depth", "depth must be at least 1")
    found = []
    nodes = 0
    scanned = 0
    complete = True
    for length in range(1, max_len + 1):
        for bits in itertools.product((0, 1), repeat=length):
            w = FiniteWord(bits)
            scanned += 1
            value = critical_exponent_value(w)
            threshold = max(Exponent(2), value)
            search = run_search(w, d, node_budget=node_budget)
            nodes += search.nodes
            if not search.complete:
                complete = False
                continue
            cert_depth = None
            for j in range(1, d + 1):
                if search.levels[j] > threshold:
                    cert_depth = j
                    break
            if cert_depth is not None:
                found.append(
                    CounterexampleRecord(w, value, threshold, cert_depth, search.levels[cert_depth])
                )
    by_word = {str(rec.word): rec for rec in found}
    records = tuple(
        CounterexampleRecord(
            rec.word,
            rec.exponent,
            rec.threshold,
            rec.certificate_depth,
            rec.lower_bound,
            negation_partner=str(negate(rec.word)) if str(negate(rec.word)) in by_word else None,
        )
        for rec in found
    )
    return CounterexampleSearchResult(max_len, d, records, scanned, nodes, complete)


@dataclass(frozen=True)
class TargetStatus:
    alpha: Fraction
    status: str
    detail: dict


@dataclass(frozen=True)
class AchievabilityReport:
    """Evidence, not proof: per-target status of E(wy) = alpha solvability."""

    word: FiniteWord
    depth: int
    lower_bound: Exponent
    targets: Tuple[TargetStatus, ...]
    nodes: int
    complete: bool


def achievable_exponents(
    w: FiniteWord,
    targets: Sequence[Fraction],
    d: int,
    *,
    node_budget: int = 0,
) -> AchievabilityReport:
    """Classify each target alpha as REALIZED (construction certificate),
    IMPOSSIBLE-BELOW-BOUND (alpha below the exact depth-d minimum), or
    UNKNOWN."""
    targets = [Fraction(t) for t in targets]
    if any(b < a for a, b in zip(targets, targets[1:])):
        raise ValidationError("targets-sorted", "targets must be sorted ascending")
    search = run_search(w, d, node_budget=node_budget)
    lower = search.value
    tm_position = is_tm_factor(w)

    statuses = []
    for alpha in targets:
        if tm_position is not None and alpha >= 2:
            point = build_with_tm_prefix(w, alpha)
            statuses.append(TargetStatus(alpha, STATUS_REALIZED, {"certificate": point.provenance}))
        elif len(w) >= 3 and alpha >= len(w):
            point = extend_word(w, alpha)
            statuses.append(TargetStatus(alpha, STATUS_REALIZED, {"certificate": point.provenance}))
        elif search.complete and alpha < lower:
            statuses.append(
                TargetStatus(
                    alpha,
                    STATUS_IMPOSSIBLE,
                    {"lower_bound": format_rational(lower), "depth": d},
                )
            )
        else:
            statuses.append(TargetStatus(alpha, STATUS_UNKNOWN, {}))
    return AchievabilityReport(w, d, lower, tuple(statuses), search.nodes, search.complete)
