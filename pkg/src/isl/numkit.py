"""Exact dyadic arithmetic, bit budgets and the rational-cosine gate.

Everything here is exact: values are integers or :class:`fractions.Fraction`
underneath, and no operation rounds.  The only floating work is in
:func:`doubling_sequence`, which evaluates cosines with mpmath at a fixed
200-bit working precision.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath

WORKING_PRECISION = 200
CLUSTER_TOLERANCE = mpmath.mpf(2) ** -40

_DYADIC_RE = re.compile(r"^\s*(-?\d+)\s*/\s*2\^(\d+)\s*$")


@dataclass(frozen=True, order=False)
class Dyadic:
    """A rational ``mantissa / 2**exponent`` kept in canonical form.

    Canonical form: the mantissa is odd, or the exponent is zero (this covers
    zero and the even integers, which have no odd-mantissa representation
    with a non-negative exponent).
    """

    mantissa: int
    exponent: int = 0

    def __post_init__(self):
        m, e = int(self.mantissa), int(self.exponent)
        if e < 0:
            m, e = m << -e, 0
        if m == 0:
            e = 0
        else:
            shift = min((m & -m).bit_length() - 1, e)
            m >>= shift
            e -= shift
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    @classmethod
    def from_fraction(cls, q) -> "Dyadic":
        q = Fraction(q)
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} is not a dyadic rational")
        return cls(q.numerator, den.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Parse ``"m/2^e"`` or any plain fraction string with a power-of-two denominator."""
        match = _DYADIC_RE.match(text)
        if match:
            return cls(int(match.group(1)), int(match.group(2)))
        return cls.from_fraction(Fraction(text))

    @staticmethod
    def is_dyadic(q) -> bool:
        den = Fraction(q).denominator
        return den & (den - 1) == 0

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 1 << self.exponent)

    def __str__(self):
        return f"{self.mantissa}/2^{self.exponent}"

    def __repr__(self):
        return f"Dyadic({self.mantissa}, {self.exponent})"

    def __float__(self):
        return math.ldexp(self.mantissa, -self.exponent)

    def __hash__(self):
        return hash(self.to_fraction())

    def _coerce(self, other):
        if isinstance(other, Dyadic):
            return other
        if isinstance(other, int):
            return Dyadic(other, 0)
        if isinstance(other, Rational) and Dyadic.is_dyadic(other):
            return Dyadic.from_fraction(other)
        return None

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.mantissa == other.mantissa and self.exponent == other.exponent
        if isinstance(other, Rational):
            return self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other):
        return self.to_fraction() < Fraction(other.to_fraction() if isinstance(other, Dyadic) else other)

    def __le__(self, other):
        return self.to_fraction() <= Fraction(other.to_fraction() if isinstance(other, Dyadic) else other)

    def __gt__(self, other):
        return self.to_fraction() > Fraction(other.to_fraction() if isinstance(other, Dyadic) else other)

    def __ge__(self, other):
        return self.to_fraction() >= Fraction(other.to_fraction() if isinstance(other, Dyadic) else other)

    def __neg__(self):
        return Dyadic(-self.mantissa, self.exponent)

    def __abs__(self):
        return Dyadic(abs(self.mantissa), self.exponent)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        e = max(self.exponent, other.exponent)
        return Dyadic(
            (self.mantissa << (e - self.exponent)) + (other.mantissa << (e - other.exponent)), e
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return dyadic_mul(self, other)

    __rmul__ = __mul__

    def scale(self, power: int) -> "Dyadic":
        """Multiply by ``2**power`` (negative powers divide)."""
        return Dyadic(self.mantissa, self.exponent - power)

    def bits_needed(self) -> int:
        """Number of fractional binary digits in the canonical expansion."""
        return self.exponent


def dyadic_mul(x: Dyadic, y: Dyadic) -> Dyadic:
    return Dyadic(x.mantissa * y.mantissa, x.exponent + y.exponent)


@dataclass(frozen=True)
class BitBudget:
    """Global resolution: strings have length ``2**n``."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"bit budget must be an integer >= 2, got {self.n!r}")

    @property
    def length(self) -> int:
        return 1 << self.n


def _budget_n(b) -> int:
    return b.n if isinstance(b, BitBudget) else BitBudget(b).n


def fits_budget(x, b, bound=2) -> bool:
    """True when ``x`` has at most ``N`` fractional binary digits and ``|x| <= bound``.

    ``bound`` defaults to 2, the range of the E-operator ``alpha`` parameter;
    callers checking ``beta`` pass ``bound=4``.  Non-dyadic rationals never fit.
    """
    if not isinstance(x, Dyadic):
        if not Dyadic.is_dyadic(x):
            return False
        x = Dyadic.from_fraction(x)
    return x.exponent <= _budget_n(b) and abs(x.to_fraction()) <= bound


@dataclass(frozen=True)
class RationalAngle:
    """An angle stored as the reduced fraction ``num/den`` of pi."""

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den == 0:
            raise ZeroDivisionError("angle denominator is zero")
        q = Fraction(self.num, self.den)
        object.__setattr__(self, "num", q.numerator)
        object.__setattr__(self, "den", q.denominator)

    @classmethod
    def from_fraction(cls, q) -> "RationalAngle":
        q = Fraction(q)
        return cls(q.numerator, q.denominator)

    @classmethod
    def parse(cls, text: str) -> "RationalAngle":
        return cls.from_fraction(Fraction(text.strip()))

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def radians(self, prec: int = WORKING_PRECISION):
        with mpmath.workprec(prec):
            return mpmath.pi * self.num / self.den

    def __str__(self):
        return f"{self.num}/{self.den}"


@dataclass(frozen=True)
class RationalCos:
    value: Fraction


@dataclass(frozen=True)
class IrrationalCos:
    pass


def _cos_table(num: int, den: int) -> Fraction | None:
    # exact cos(pi*num/den) for the three denominators where it is rational
    if den == 1:
        return Fraction(1 if num % 2 == 0 else -1)
    if den == 2:
        return Fraction(0)
    if den == 3:
        return Fraction(1, 2) if num % 6 in (1, 5) else Fraction(-1, 2)
    return None


def niven_classify(r: RationalAngle) -> RationalCos | IrrationalCos:
    """Decide whether cos(pi*r) is rational, from the reduced denominator alone."""
    value = _cos_table(r.num, r.den)
    return IrrationalCos() if value is None else RationalCos(value)


@dataclass(frozen=True)
class DoublingSequence:
    angle: RationalAngle
    values: tuple
    distinct: int


def _cluster_count(values, tol) -> int:
    ordered = sorted(values)
    count = 0
    last = None
    for v in ordered:
        if last is None or v - last > tol:
            count += 1
        last = v
    return count


def doubling_sequence(r: RationalAngle, k_max: int) -> DoublingSequence:
    """Evaluate ``2 cos(2**k * phi)`` for ``k = 0..k_max`` and count distinct values.

    The angle ``2**k * phi`` is reduced modulo ``2*pi`` exactly before the
    cosine is taken, so no precision is lost for large ``k``.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    two_den = 2 * r.den
    values = []
    with mpmath.workprec(WORKING_PRECISION):
        for k in range(k_max + 1):
            reduced = (r.num * pow(2, k, two_den)) % two_den
            values.append(2 * mpmath.cos(mpmath.pi * reduced / r.den))
        distinct = _cluster_count(values, CLUSTER_TOLERANCE)
    return DoublingSequence(r, tuple(values), distinct)


def closure_counterexample(b) -> tuple[Dyadic, Dyadic]:
    """A pair that fits the budget whose product does not.

    ``x = 1 - 2**-N`` uses all ``N`` fractional digits; its square needs ``2N``.
    """
    n = _budget_n(b)
    x = Dyadic((1 << n) - 1, n)
    product = dyadic_mul(x, x)
    assert fits_budget(x, n) and not fits_budget(product, n)
    return x, x
