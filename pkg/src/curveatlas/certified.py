"""Exact arithmetic in Q(sqrt d) plus rational interval enclosures.

Floors and ceilings of near-integer irrationals are exactly where floating
point goes wrong, so every integer extraction here is either exact (sign
tests in Q(sqrt d) reduce to integer comparisons) or backed by an enclosure
that is refined until it no longer straddles the integer boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .errors import RefinementCapExceeded

REFINEMENT_START_BITS = 64
REFINEMENT_CAP_BITS = 1 << 14


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 0:
        raise ValueError("negative radicand")
    if k == 2:
        return math.isqrt(n)
    if k == 4:
        return math.isqrt(math.isqrt(n))
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def root_enclosure(x: Fraction, k: int, bits: int) -> tuple[Fraction, Fraction]:
    """[lo, hi] containing x ** (1/k), of width 2^-bits (exact when x is a perfect power)."""
    x = _frac(x)
    if x < 0:
        raise ValueError("negative radicand")
    scale = 1 << (k * bits)
    N = x.numerator * scale // x.denominator
    r = iroot(N, k)
    lo = Fraction(r, 1 << bits)
    if lo**k == x:
        return lo, lo
    return lo, Fraction(r + 1, 1 << bits)


def exact_root(x: Fraction, k: int) -> Optional[Fraction]:
    x = _frac(x)
    a, b = iroot(x.numerator, k), iroot(x.denominator, k)
    if a**k == x.numerator and b**k == x.denominator:
        return Fraction(a, b)
    return None


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _frac(self.lo))
        object.__setattr__(self, "hi", _frac(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, x)

    @staticmethod
    def _lift(x) -> "Interval":
        return x if isinstance(x, Interval) else Interval.point(x)

    def __add__(self, other):
        o = self._lift(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        prods = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        return Interval(min(prods), max(prods))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval division by an interval containing 0")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def square(self):
        if self.lo >= 0:
            return Interval(self.lo**2, self.hi**2)
        if self.hi <= 0:
            return Interval(self.hi**2, self.lo**2)
        return Interval(0, max(self.lo**2, self.hi**2))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x):
        return self.lo <= x <= self.hi


# ---------------------------------------------------------------------------


class Surd:
    """a + b*sqrt(d) with rational a, b and a positive integer d."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 1):
        a, b = _frac(a), _frac(b)
        if d < 1:
            raise ValueError("radicand must be positive")
        s = math.isqrt(d)
        if s * s == d:
            a, b, d = a + b * s, Fraction(0), 1
        if b == 0:
            d = 1
        self.a, self.b, self.d = a, b, d

    @classmethod
    def sqrt(cls, d: int) -> "Surd":
        return cls(0, 1, d)

    def _coerce(self, other) -> "Surd":
        if isinstance(other, Surd):
            if other.d != 1 and self.d != 1 and other.d != self.d:
                raise ValueError(f"mixing Q(sqrt {self.d}) and Q(sqrt {other.d})")
            return other
        return Surd(other)

    def _radicand(self, o: "Surd") -> int:
        return self.d if self.d != 1 else o.d

    def __add__(self, other):
        o = self._coerce(other)
        return Surd(self.a + o.a, self.b + o.b, self._radicand(o))

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        d = self._radicand(o)
        return Surd(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> "Surd":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return Surd(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = Surd(1), self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def sign(self) -> int:
        a, b, d = self.a, self.b, self.d
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = a * a - b * b * d
        return sa if diff > 0 else (-sa if diff < 0 else 0)

    def __eq__(self, other):
        try:
            return (self - other).sign() == 0
        except (ValueError, TypeError):
            return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def is_rational(self) -> bool:
        return self.b == 0

    def floor(self) -> int:
        n = math.floor(float(self)) if abs(float(self)) < 2**52 else _floor(self.enclose(64).lo)
        while self < n:
            n -= 1
        while self >= n + 1:
            n += 1
        return n

    def ceil(self) -> int:
        return -((-self).floor())

    def enclose(self, bits: int = REFINEMENT_START_BITS) -> Interval:
        if self.b == 0:
            return Interval.point(self.a)
        lo, hi = root_enclosure(Fraction(self.d), 2, bits)
        return self.a + self.b * Interval(lo, hi)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        if self.b == 0:
            return f"Surd({self.a})"
        return f"Surd({self.a} + {self.b}*sqrt({self.d}))"

    def text(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + ({self.b})*sqrt({self.d})"


def sqrt_power(q: int, half_exponent: int) -> Surd:
    """q ** (half_exponent / 2) as an exact Surd over Q(sqrt q)."""
    e, odd = divmod(half_exponent, 2)
    base = Surd(Fraction(q) ** e)
    return base * Surd.sqrt(q) if odd else base


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertifiedValue:
    """A real number known to lie in [lo, hi].

    ``surd`` carries the exact value when it lies in a quadratic field;
    ``refine`` recomputes the enclosure at a requested bit precision.
    """

    lo: Fraction
    hi: Fraction
    surd: Optional[Surd] = None
    refine: Optional[Callable[[int], Interval]] = None

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @classmethod
    def from_rational(cls, x) -> "CertifiedValue":
        x = _frac(x)
        return cls(x, x, Surd(x))

    @classmethod
    def from_surd(cls, s: Surd, bits: int = REFINEMENT_START_BITS) -> "CertifiedValue":
        iv = s.enclose(bits)
        return cls(iv.lo, iv.hi, s)

    @classmethod
    def from_function(cls, fn: Callable[[int], Interval], bits: int = REFINEMENT_START_BITS) -> "CertifiedValue":
        iv = fn(bits)
        return cls(iv.lo, iv.hi, None, fn)

    def _extract(self, op) -> int:
        if self.surd is not None:
            return self.surd.floor() if op is _floor else self.surd.ceil()
        if self.lo == self.hi:
            return op(self.lo)
        bits = REFINEMENT_START_BITS
        iv = Interval(self.lo, self.hi)
        while True:
            a, b = op(iv.lo), op(iv.hi)
            if a == b:
                return a
            bits *= 2
            if self.refine is None or bits > REFINEMENT_CAP_BITS:
                raise RefinementCapExceeded(f"enclosure [{float(iv.lo)}, {float(iv.hi)}] straddles an integer")
            iv = self.refine(bits)

    def floor(self) -> int:
        return self._extract(_floor)

    def ceil(self) -> int:
        return self._extract(_ceil)

    def sign(self) -> int:
        """Exact sign when possible; raises if an enclosure cannot separate from 0."""
        if self.surd is not None:
            return self.surd.sign()
        bits = REFINEMENT_START_BITS
        iv = Interval(self.lo, self.hi)
        while True:
            if iv.lo > 0:
                return 1
            if iv.hi < 0:
                return -1
            if iv.lo == iv.hi == 0:
                return 0
            bits *= 2
            if self.refine is None or bits > REFINEMENT_CAP_BITS:
                raise RefinementCapExceeded("enclosure cannot decide the sign")
            iv = self.refine(bits)

    def __float__(self):
        if self.surd is not None:
            return float(self.surd)
        return float((self.lo + self.hi) / 2)

    def to_json(self) -> dict:
        out = {"lo": str(self.lo), "hi": str(self.hi), "exact": self.exact, "approx": float(self)}
        if self.surd is not None and not self.exact:
            out["closed_form"] = self.surd.text()
        return out
