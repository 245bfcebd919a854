import random
from fractions import Fraction

import pytest

from critexp.values import ValidationError
from critexp.words import (
    MU,
    FiniteWord,
    Morphism,
    delete_prefix,
    expand,
    find_subword,
    mu_power,
    negate,
    thue_morse_prefix,
    thue_morse_stream,
)


def w(text, base=2):
    return FiniteWord.from_string(text, base=base)


def tm_digit(i):
    # independent recurrence: t(2n) = t(n), t(2n+1) = 1 - t(n), t(0) = 0
    bit = 0
    while i:
        bit ^= i & 1
        i >>= 1
    return bit


class TestFiniteWord:
    def test_digit_range_enforced(self):
        with pytest.raises(ValidationError):
            FiniteWord([0, 2], base=2)

    def test_base_bounds(self):
        with pytest.raises(ValidationError):
            FiniteWord([], base=1)

    def test_empty_word_allowed(self):
        assert len(FiniteWord()) == 0
        assert str(FiniteWord()) == ""

    def test_equality_and_hash(self):
        assert w("0110") == w("0110")
        assert hash(w("0110")) == hash(w("0110"))
        assert w("0110") != w("0111")
        assert FiniteWord([0, 1], base=2) != FiniteWord([0, 1], base=3)

    def test_concat_and_slice(self):
        assert str(w("01") + w("10")) == "0110"
        assert str(w("011010")[2:5]) == "101"
        assert w("011")[1] == 1

    def test_concat_base_mismatch(self):
        with pytest.raises(ValidationError):
            FiniteWord([0], base=2) + FiniteWord([0], base=3)

    def test_immutable(self):
        word = w("01")
        with pytest.raises((AttributeError, ValueError)):
            word.digits[0] = 1

    def test_value(self):
        assert w("01").value() == Fraction(1, 4)
        assert w("0110").value() == Fraction(3, 8)
        assert FiniteWord([1, 2], base=3).value() == Fraction(5, 9)


class TestThueMorse:
    def test_paper_prefix(self):
        assert str(thue_morse_prefix(16)) == "0110100110010110"

    def test_empty_prefix(self):
        assert thue_morse_prefix(0) == FiniteWord()

    def test_doubling_property(self):
        for m in range(0, 14):
            half = thue_morse_prefix(1 << m)
            assert thue_morse_prefix(1 << (m + 1)) == half + half.negate()

    def test_against_recurrence(self):
        word = thue_morse_prefix(1 << 14)
        idx = random.Random(1).sample(range(1 << 14), 500)
        for i in idx:
            assert word[i] == tm_digit(i)

    def test_stream_matches_prefix(self):
        stream = thue_morse_stream()
        assert stream.prefix(64) == thue_morse_prefix(64)
        assert stream.exponent == 2

    def test_stream_purity(self):
        stream = thue_morse_stream()
        assert stream.prefix(100) == stream.prefix(100)
        assert stream.prefix(128)[:100] == stream.prefix(100)

    def test_stream_concurrent_emission(self):
        from concurrent.futures import ThreadPoolExecutor

        from critexp.construct import build_cr, make_schedule

        stream = build_cr(make_schedule(Fraction(5, 2), 2)).stream
        depths = [rng for rng in range(50, 850, 50)] * 4
        with ThreadPoolExecutor(max_workers=8) as pool:
            words = list(pool.map(stream.prefix, depths))
        expected = stream.prefix(max(depths))
        for depth, word in zip(depths, words):
            assert word == expected[:depth]


class TestMorphism:
    def test_mu_images(self):
        assert str(MU.image(0)) == "01"
        assert str(MU.image(1)) == "10"

    def test_mu_power_basic(self):
        assert str(mu_power(1, w("0"))) == "01"
        assert mu_power(0, w("0110")) == w("0110")
        assert str(mu_power(3, w("00"))) == "0110100101101001"

    def test_mu_power_is_tm_prefix(self):
        for s in range(0, 15):
            assert mu_power(s, w("0")) == thue_morse_prefix(1 << s)

    def test_mu_power_matches_generic_apply(self):
        rng = random.Random(3)
        for _ in range(20):
            word = FiniteWord([rng.randrange(2) for _ in range(rng.randrange(1, 12))])
            expected = word
            for _ in range(3):
                expected = MU.apply(expected)
            assert mu_power(3, word) == expected

    def test_length_law(self):
        assert len(mu_power(5, w("011"))) == 3 * 32

    def test_rejects_non_binary(self):
        with pytest.raises(ValidationError):
            mu_power(1, FiniteWord([0, 2], base=3))

    def test_morphism_validation(self):
        with pytest.raises(ValidationError):
            Morphism((FiniteWord(), FiniteWord([1])))


class TestDeleteNegate:
    def test_delete_examples(self):
        assert str(delete_prefix(1, w("0110"))) == "110"
        assert delete_prefix(0, w("0110")) == w("0110")
        assert delete_prefix(9, w("0110")) == FiniteWord()

    def test_delete_stream(self):
        assert str(delete_prefix(5, thue_morse_stream()).prefix(3)) == "001"

    def test_delete_compose(self):
        rng = random.Random(5)
        for _ in range(50):
            word = FiniteWord([rng.randrange(2) for _ in range(rng.randrange(0, 20))])
            a, b = rng.randrange(0, 6), rng.randrange(0, 6)
            assert delete_prefix(a, delete_prefix(b, word)) == delete_prefix(a + b, word)

    def test_negate_examples(self):
        assert str(negate(w("0110"))) == "1001"

    def test_negate_involution(self):
        rng = random.Random(7)
        for _ in range(50):
            word = FiniteWord([rng.randrange(2) for _ in range(rng.randrange(0, 24))])
            assert negate(negate(word)) == word

    def test_negate_is_second_tau_half(self):
        assert negate(thue_morse_prefix(4)) == delete_prefix(4, thue_morse_prefix(8))

    def test_negate_rejects_non_binary(self):
        with pytest.raises(ValidationError):
            negate(FiniteWord([0, 1, 2], base=3))


class TestFindSubword:
    def test_empty_everywhere(self):
        assert find_subword(FiniteWord(), w("01")) == 0

    def test_scan_example(self):
        assert find_subword(w("1010"), w("01101001")) == 2

    def test_no_000_in_tau(self):
        tau = thue_morse_prefix(32)
        assert find_subword(w("000"), tau) is None
        text = str(tau)
        assert all(text[i : i + 3] != "000" for i in range(len(text) - 2))

    def test_matches_str_find(self):
        rng = random.Random(11)
        for _ in range(100):
            hay = "".join(rng.choice("01") for _ in range(rng.randrange(0, 30)))
            needle = "".join(rng.choice("01") for _ in range(rng.randrange(1, 5)))
            expected = hay.find(needle)
            got = find_subword(w(needle), FiniteWord.from_string(hay))
            assert got == (expected if expected >= 0 else None)


class TestExpand:
    def test_half_paper_convention(self):
        assert str(expand(Fraction(1, 2), 2, 5)) == "01111"

    def test_zero(self):
        assert str(expand(0, 2, 4)) == "0000"

    def test_one(self):
        assert str(expand(1, 2, 4)) == "1111"
        assert str(expand(1, 3, 4)) == "2222"

    def test_third(self):
        assert str(expand(Fraction(1, 3), 2, 6)) == "010101"

    def test_half_base_three(self):
        assert str(expand(Fraction(1, 2), 3, 6)) == "111111"

    def test_terminating_base_three(self):
        # 1/3 terminates in base 3; the tail becomes repeated 2s
        assert str(expand(Fraction(1, 3), 3, 5)) == "02222"

    def test_dyadic_eighth(self):
        assert str(expand(Fraction(1, 8), 2, 6)) == "000111"

    def test_prefix_nesting(self):
        rng = random.Random(13)
        for _ in range(30):
            x = Fraction(rng.randrange(0, 100), 100)
            base = rng.choice([2, 3, 5, 10])
            longer = expand(x, base, 24)
            assert longer[:12] == expand(x, base, 12)

    def test_resummation_brackets(self):
        rng = random.Random(17)
        for _ in range(30):
            x = Fraction(rng.randrange(1, 97), 97)
            word = expand(x, 2, 20)
            lo = word.value()
            assert lo <= x <= lo + Fraction(1, 2 ** 20)

    def test_range_validation(self):
        with pytest.raises(ValidationError):
            expand(Fraction(3, 2), 2, 4)
