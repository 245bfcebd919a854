"""Exact value types and rational parsing/formatting shared across the package.

Everything here is integer arithmetic: no floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class ValidationError(ValueError):
    """A named precondition was violated.

    ``precondition`` is a short machine-readable tag naming the violated
    contract, suitable for error reports.
    """

    def __init__(self, precondition: str, message: str):
        self.precondition = precondition
        super().__init__(message)


class Exponent:
    """A critical-exponent value: an exact nonnegative rational or +infinity.

    Stored as an integer pair ``(num, den)`` in lowest terms with den >= 1;
    ``den == 0`` (with ``num == 1``) encodes +infinity.  The order is the
    rational order with +infinity as the top element, so comparisons reduce
    to integer cross-multiplication and work uniformly for the infinite case.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        if isinstance(num, Fraction):
            if den != 1:
                raise ValidationError("exponent-arguments", "Fraction input takes no denominator")
            num, den = num.numerator, num.denominator
        if not (isinstance(num, int) and isinstance(den, int)):
            raise ValidationError("exponent-arguments", "exponent needs integer numerator/denominator")
        if den == 0:
            self_num = 1
            self_den = 0
        else:
            if den < 0:
                num, den = -num, -den
            if num < 0:
                raise ValidationError("exponent-nonnegative", "exponents are nonnegative")
            g = gcd(num, den)
            self_num, self_den = num // g, den // g
        object.__setattr__(self, "num", self_num)
        object.__setattr__(self, "den", self_den)

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("Exponent is immutable")

    @classmethod
    def infinity(cls) -> "Exponent":
        return cls(1, 0)

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    def as_fraction(self) -> Fraction:
        if self.den == 0:
            raise ValidationError("finite-exponent", "infinite exponent has no Fraction form")
        return Fraction(self.num, self.den)

    def reciprocal(self) -> Fraction:
        """1/E with the 1/infinity = 0 convention.  E must be nonzero or infinite."""
        if self.den == 0:
            return Fraction(0)
        if self.num == 0:
            raise ValidationError("nonzero-exponent", "reciprocal of zero exponent")
        return Fraction(self.den, self.num)

    def _pair_of(self, other):
        if isinstance(other, Exponent):
            return other.num, other.den
        if isinstance(other, int):
            return other, 1
        if isinstance(other, Fraction):
            return other.numerator, other.denominator
        return None

    def __eq__(self, other):
        pair = self._pair_of(other)
        if pair is None:
            return NotImplemented
        on, od = pair
        return self.num * od == on * self.den

    def __lt__(self, other):
        pair = self._pair_of(other)
        if pair is None:
            return NotImplemented
        on, od = pair
        return self.num * od < on * self.den

    def __le__(self, other):
        pair = self._pair_of(other)
        if pair is None:
            return NotImplemented
        on, od = pair
        return self.num * od <= on * self.den

    def __gt__(self, other):
        pair = self._pair_of(other)
        if pair is None:
            return NotImplemented
        on, od = pair
        return self.num * od > on * self.den

    def __ge__(self, other):
        pair = self._pair_of(other)
        if pair is None:
            return NotImplemented
        on, od = pair
        return self.num * od >= on * self.den

    def __hash__(self):
        if self.den == 0:
            return hash(("Exponent", "inf"))
        return hash(Fraction(self.num, self.den))

    def __str__(self):
        if self.den == 0:
            return "inf"
        return f"{self.num}/{self.den}"

    def __repr__(self):
        return f"Exponent({self.num}, {self.den})"


INFINITE = Exponent.infinity()


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q' or 'p' with decimal integers, q >= 1."""
    text = text.strip()
    try:
        if "/" in text:
            p_str, q_str = text.split("/", 1)
            p, q = int(p_str), int(q_str)
            if q < 1:
                raise ValueError
            return Fraction(p, q)
        return Fraction(int(text))
    except ValueError:
        raise ValidationError("rational-syntax", f"malformed rational {text!r}; expected 'p/q' or 'p'") from None


def format_rational(value) -> str:
    """Serialize an exact value as 'p/q' (q >= 1, lowest terms) or 'inf'."""
    if isinstance(value, Exponent):
        return str(value)
    if isinstance(value, int):
        value = Fraction(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    raise TypeError(f"not an exact value: {value!r}")
