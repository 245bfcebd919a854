import itertools
from fractions import Fraction

import pytest

from critexp.exponent import critical_exponent_value
from critexp.explore import (
    STATUS_IMPOSSIBLE,
    STATUS_REALIZED,
    STATUS_UNKNOWN,
    achievable_exponents,
    counterexample_search,
    ew_bounds,
    min_exponent_at_depth,
    run_search,
)
from critexp.values import ValidationError
from critexp.words import FiniteWord, negate


def w(text):
    return FiniteWord.from_string(text)


def all_words(length):
    for bits in itertools.product((0, 1), repeat=length):
        yield FiniteWord(bits)


class TestMinExponentAtDepth:
    def test_empty_depth_three(self):
        result = min_exponent_at_depth(FiniteWord(), 3)
        assert result.value == Fraction(3, 2)
        assert str(result.minimizer) == "010"

    def test_counterexample_depth_one(self):
        result = min_exponent_at_depth(w("00100100"), 1)
        assert result.value == 3
        assert str(result.minimizer) == "0"

    def test_empty_depth_ten_overlap_free(self):
        result = min_exponent_at_depth(FiniteWord(), 10)
        assert result.value == 2
        assert critical_exponent_value(result.minimizer) == 2

    def test_depth_zero(self):
        result = min_exponent_at_depth(w("010"), 0)
        assert result.value == Fraction(3, 2)
        assert len(result.minimizer) == 0
        assert result.nodes == 0

    def test_levels_monotone_and_bounded_below(self):
        for word in (FiniteWord(), w("0"), w("0110"), w("00100100")):
            result = min_exponent_at_depth(word, 8)
            assert result.levels[0] == critical_exponent_value(word)
            assert all(a <= b for a, b in zip(result.levels, result.levels[1:]))

    def test_minimizer_is_lexicographically_smallest(self):
        # brute force over all extensions
        word = w("011")
        depth = 7
        result = min_exponent_at_depth(word, depth)
        best = None
        best_ext = None
        for ext in all_words(depth):
            value = critical_exponent_value(word + ext)
            if best is None or value < best:
                best, best_ext = value, ext
        assert result.value == best
        assert result.minimizer == best_ext


class TestPruningSoundness:
    def test_pruned_equals_exhaustive(self):
        # every word of length <= 6, depth 10
        for length in range(0, 7):
            for word in all_words(length):
                pruned = run_search(word, 10, prune=True)
                full = run_search(word, 10, prune=False)
                assert pruned.levels == full.levels
                assert pruned.minimizer == full.minimizer
                assert full.nodes == 2 ** 11 - 2

    def test_split_plan_same_answers(self):
        for word in (FiniteWord(), w("00100100"), w("0110")):
            base = run_search(word, 12)
            for split in (1, 3, 5):
                other = run_search(word, 12, split=split)
                assert other.value == base.value
                assert other.minimizer == base.minimizer
                assert other.levels == base.levels

    def test_parallel_equals_sequential(self):
        sequential = run_search(FiniteWord(), 14, split=4, workers=1)
        parallel = run_search(FiniteWord(), 14, split=4, workers=8)
        assert sequential == parallel

    def test_budget_truncates(self):
        result = run_search(FiniteWord(), 16, node_budget=10)
        assert not result.complete


class TestCounterexampleSearch:
    def test_includes_paper_pair(self):
        outcome = counterexample_search(8, 2)
        words = {str(rec.word) for rec in outcome.records}
        assert "00100100" in words and "11011011" in words
        rec = next(r for r in outcome.records if str(r.word) == "00100100")
        assert rec.exponent == Fraction(8, 3)
        assert rec.threshold == Fraction(8, 3)
        assert rec.certificate_depth == 1
        assert rec.lower_bound == 3
        assert rec.negation_partner == "11011011"

    def test_short_words_clean(self):
        assert counterexample_search(3, 4).records == ()

    def test_closed_under_negation(self):
        outcome = counterexample_search(8, 2)
        words = {str(rec.word) for rec in outcome.records}
        assert {str(negate(w(text))) for text in words} == words

    def test_records_replay(self):
        outcome = counterexample_search(8, 2)
        for rec in outcome.records:
            replay = run_search(rec.word, rec.certificate_depth, prune=False)
            assert replay.value == rec.lower_bound
            assert replay.value > rec.threshold
            if rec.certificate_depth > 1:
                shallower = run_search(rec.word, rec.certificate_depth - 1, prune=False)
                assert shallower.value <= rec.threshold

    def test_validation(self):
        with pytest.raises(ValidationError):
            counterexample_search(0, 2)
        with pytest.raises(ValidationError):
            counterexample_search(4, 0)


class TestEwBounds:
    def test_single_zero(self):
        report = ew_bounds(w("0"), 8)
        assert report.lower == 2
        assert report.upper == 2
        assert report.upper_provenance["builder"] == "build_with_tm_prefix"

    def test_empty_word(self):
        report = ew_bounds(FiniteWord(), 12)
        assert report.lower == 2
        assert report.upper == 2

    def test_counterexample_word(self):
        report = ew_bounds(w("00100100"), 6)
        assert report.lower >= 3
        assert report.upper == 8
        assert report.upper_provenance["builder"] == "extend_word"

    def test_lower_at_most_upper(self):
        for word in (w("1"), w("010"), w("110110"), w("0010")):
            report = ew_bounds(word, 6)
            assert report.lower <= report.upper


class TestAchievable:
    def test_counterexample_targets(self):
        report = achievable_exponents(w("00100100"), [Fraction(5, 2), Fraction(3), Fraction(8)], 6)
        statuses = [t.status for t in report.targets]
        assert statuses == [STATUS_IMPOSSIBLE, STATUS_UNKNOWN, STATUS_REALIZED]

    def test_tm_factor_target_two(self):
        report = achievable_exponents(w("01"), [Fraction(2)], 4)
        assert report.targets[0].status == STATUS_REALIZED
        assert report.targets[0].detail["certificate"]["builder"] == "build_with_tm_prefix"

    def test_empty_word_three_halves_impossible(self):
        report = achievable_exponents(FiniteWord(), [Fraction(3, 2)], 4)
        assert report.targets[0].status == STATUS_IMPOSSIBLE

    def test_unsorted_rejected(self):
        with pytest.raises(ValidationError):
            achievable_exponents(w("01"), [Fraction(3), Fraction(2)], 4)
