"""Exact arithmetic on the extended nonnegative rationals [0, inf].

Every gauge and distance in this package takes values here.  Keeping the
codomain exact (Fraction or the distinguished infinity) is what turns
zero-distance tests and triangle checks into decision procedures instead
of tolerance judgements.
"""

from __future__ import annotations

from fractions import Fraction


def parse_rational(text: str) -> Fraction:
    """Parse a rational string like "3/2", "-1", "0.25"."""
    return Fraction(str(text))


class ExtNonNeg:
    """A nonnegative rational or +infinity.

    Addition absorbs infinity, comparison places infinity on top, and all
    operations are exact.  Instances are immutable and hashable.
    """

    __slots__ = ("_v",)

    def __init__(self, value):
        if value is None:
            self._v = None
            return
        if isinstance(value, ExtNonNeg):
            self._v = value._v
            return
        if isinstance(value, float):
            # floats enter only through the documented float mode
            v = Fraction(value)
        elif isinstance(value, str):
            if value.strip().lower() in ("inf", "infinity", "+inf"):
                self._v = None
                return
            v = Fraction(value)
        else:
            v = Fraction(value)
        if v < 0:
            raise ValueError(f"negative value not allowed: {value!r}")
        self._v = v

    @property
    def is_inf(self) -> bool:
        return self._v is None

    @property
    def frac(self) -> Fraction:
        if self._v is None:
            raise ValueError("infinite value has no finite representation")
        return self._v

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "ExtNonNeg") -> "ExtNonNeg":
        other = _coerce(other)
        if self._v is None or other._v is None:
            return INF
        return ExtNonNeg(self._v + other._v)

    __radd__ = __add__

    def scaled(self, factor: Fraction) -> "ExtNonNeg":
        """Multiply by a positive rational factor (inf stays inf)."""
        factor = Fraction(factor)
        if factor <= 0:
            raise ValueError("scaling factor must be positive")
        if self._v is None:
            return INF
        return ExtNonNeg(self._v * factor)

    def divided_by(self, divisor: Fraction) -> "ExtNonNeg":
        """Divide by a positive rational divisor (inf stays inf)."""
        divisor = Fraction(divisor)
        if divisor <= 0:
            raise ValueError("divisor must be positive")
        if self._v is None:
            return INF
        return ExtNonNeg(self._v / divisor)

    # -- comparisons ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, (ExtNonNeg, int, Fraction)):
            return NotImplemented
        other = _coerce(other)
        return self._v == other._v

    def __hash__(self):
        return hash(("ExtNonNeg", self._v))

    def __lt__(self, other) -> bool:
        other = _coerce(other)
        if self._v is None:
            return False
        if other._v is None:
            return True
        return self._v < other._v

    def __le__(self, other) -> bool:
        other = _coerce(other)
        if other._v is None:
            return True
        if self._v is None:
            return False
        return self._v <= other._v

    def __gt__(self, other) -> bool:
        return _coerce(other).__lt__(self)

    def __ge__(self, other) -> bool:
        return _coerce(other).__le__(self)

    # -- rendering ------------------------------------------------------

    def __str__(self) -> str:
        return "inf" if self._v is None else str(self._v)

    def __repr__(self) -> str:
        return f"ExtNonNeg({str(self)!r})"


def _coerce(x) -> ExtNonNeg:
    return x if isinstance(x, ExtNonNeg) else ExtNonNeg(x)


def enn(x) -> ExtNonNeg:
    """Shorthand constructor."""
    return _coerce(x)


ZERO = ExtNonNeg(0)
INF = ExtNonNeg(None)


def enn_min(a: ExtNonNeg, b: ExtNonNeg) -> ExtNonNeg:
    return a if a <= b else b


def enn_max(a: ExtNonNeg, b: ExtNonNeg) -> ExtNonNeg:
    return a if a >= b else b


def enn_sum(values) -> ExtNonNeg:
    total = ZERO
    for v in values:
        total = total + v
    return total


def exact_root(value: Fraction, degree: int) -> Fraction | None:
    """Exact nonnegative degree-th root of a nonnegative rational, or None
    if the root is irrational."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if value < 0:
        raise ValueError("value must be nonnegative")
    if degree == 1 or value in (0, 1):
        return Fraction(value)
    num = _int_root(value.numerator, degree)
    den = _int_root(value.denominator, degree)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _int_root(n: int, k: int) -> int | None:
    if n in (0, 1):
        return n
    lo, hi = 0, 1
    while hi**k < n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == n else None
