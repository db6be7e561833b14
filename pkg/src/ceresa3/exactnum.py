"""Exact scalars: rationals and the cyclotomic field Q(zeta_7).

Rationals are :class:`fractions.Fraction`; they are already kept in lowest
terms with a positive denominator.  :class:`Cyclo7` stores an element of
Q(zeta) on the power basis ``1, zeta, ..., zeta^5`` where zeta = exp(2 pi i/7).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

import mpmath

Rational = Fraction

DEGREE = 6  # phi(7)


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (or pass through ints and Fractions).

    Floats are rejected: they would silently smuggle rounding into exact code.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"malformed rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"malformed rational: {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational: {text!r}") from None
    if q == 0:
        raise ValueError(f"malformed rational: {text!r} (zero denominator)")
    return Fraction(p, q)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _reduce(coeffs: Sequence[Fraction]) -> tuple:
    """Reduce a polynomial in zeta modulo zeta^7 - 1 and 1 + zeta + ... + zeta^6."""
    c = [Fraction(0)] * 7
    for k, v in enumerate(coeffs):
        c[k % 7] += v
    top = c[6]
    return tuple(c[k] - top for k in range(DEGREE))


def _normalize(nums: Sequence[int], den: int) -> Tuple[Tuple[int, ...], int]:
    g = den
    for n in nums:
        if g == 1:
            break
        g = math.gcd(g, n)
    if den < 0:
        g = -g
    if g != 1:
        return tuple(n // g for n in nums), den // g
    return tuple(nums), den


class Cyclo7:
    """Immutable element of Q(zeta_7) in canonical power-basis form.

    Stored as six integer numerators over one positive common denominator,
    kept coprime; ``coeffs`` exposes the rational coefficients.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, coeffs: Iterable = (0,)):
        red = _reduce([parse_rational(v) for v in coeffs])
        den = 1
        for c in red:
            den = den * c.denominator // math.gcd(den, c.denominator)
        self.num, self.den = _normalize([c.numerator * (den // c.denominator) for c in red], den)
        self._hash = None

    @classmethod
    def _make(cls, nums: Sequence[int], den: int) -> "Cyclo7":
        obj = cls.__new__(cls)
        obj.num, obj.den = _normalize(nums, den)
        obj._hash = None
        return obj

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(n, self.den) for n in self.num)

    @classmethod
    def zeta(cls, k: int = 1) -> "Cyclo7":
        c = [0] * 7
        c[k % 7] = 1
        return cls(c)

    @classmethod
    def from_rational(cls, x) -> "Cyclo7":
        x = parse_rational(x)
        return cls._make((x.numerator, 0, 0, 0, 0, 0), x.denominator)

    @classmethod
    def sqrt_minus7(cls) -> "Cyclo7":
        """The Gauss sum zeta + zeta^2 + zeta^4 - zeta^3 - zeta^5 - zeta^6."""
        return cls([0, 1, 1, -1, 1, -1, -1])

    @staticmethod
    def _coerce(other):
        if isinstance(other, Cyclo7):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Cyclo7.from_rational(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return Cyclo7._make([a + b for a, b in zip(self.num, o.num)], self.den)
        d1, d2 = self.den, o.den
        return Cyclo7._make([a * d2 + b * d1 for a, b in zip(self.num, o.num)], d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo7._make([-a for a in self.num], self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Cyclo7):
            prod = [0] * 7
            for i, a in enumerate(self.num):
                if a:
                    for j, b in enumerate(other.num):
                        if b:
                            prod[(i + j) % 7] += a * b
            top = prod[6]
            return Cyclo7._make([prod[k] - top for k in range(DEGREE)], self.den * other.den)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = Fraction(other)
            return Cyclo7._make([a * other.numerator for a in self.num],
                                self.den * other.denominator)
        return NotImplemented

    __rmul__ = __mul__

    def galois(self, k: int) -> "Cyclo7":
        """Apply the automorphism zeta -> zeta^k (k prime to 7)."""
        if k % 7 == 0:
            raise ValueError("k must be prime to 7")
        c = [0] * 7
        for i, a in enumerate(self.num):
            c[(i * k) % 7] += a
        top = c[6]
        return Cyclo7._make([c[j] - top for j in range(DEGREE)], self.den)

    def conjugate(self) -> "Cyclo7":
        return self.galois(6)

    def norm(self) -> Fraction:
        n = self
        for k in range(2, 7):
            n = n * self.galois(k)
        return n.to_rational()

    def inverse(self) -> "Cyclo7":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_7)")
        if self.is_rational():
            return Cyclo7.from_rational(1 / self.to_rational())
        others = Cyclo7.from_rational(1)
        for k in range(2, 7):
            others = others * self.galois(k)
        n = (self * others).to_rational()
        return others * (1 / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Cyclo7.from_rational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.den == o.den and self.num == o.num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return any(self.num)

    def embed(self, precision: int = 15):
        """Numerical value under zeta -> exp(2 pi i/7).

        Returns a Python complex for ``precision <= 15`` and an
        ``mpmath.mpc`` beyond that, so the requested digits survive.
        """
        if precision < 1:
            raise ValueError("precision must be >= 1")
        with mpmath.workdps(precision + 10):
            z = mpmath.expjpi(mpmath.mpf(2) / 7)
            v = mpmath.fsum(mpmath.mpf(a.numerator) / a.denominator * z**k
                            for k, a in enumerate(self.coeffs))
            return complex(v) if precision <= 15 else +v

    def to_json(self) -> list:
        return [format_rational(a) for a in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "Cyclo7":
        if isinstance(data, (str, int)):
            return cls.from_rational(parse_rational(data))
        if len(data) != DEGREE:
            raise ValueError(f"Cyclo7 literal needs {DEGREE} coefficients, got {len(data)}")
        return cls(parse_rational(v) for v in data)

    def __repr__(self):
        terms = []
        for k, a in enumerate(self.coeffs):
            if not a:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            coef = format_rational(a)
            if mono and a == 1:
                terms.append(mono)
            elif mono and a == -1:
                terms.append("-" + mono)
            else:
                terms.append(coef + ("*" + mono if mono else ""))
        return "Cyclo7(" + (" + ".join(terms) if terms else "0") + ")"


def cyclo_mul(x: Cyclo7, y: Cyclo7) -> Cyclo7:
    return x * y


def cyclo_embed(x: Cyclo7, precision: int = 15) -> complex:
    return x.embed(precision)
