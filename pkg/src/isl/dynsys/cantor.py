"""Cantor sets on base-b digits, with exact measure and membership.

The depth-k iterate of the set built from ``allowed`` digits is the union of
intervals ``[0.d1...dk, 0.d1...dk + b**-k]`` with every ``di`` allowed.  The
ternary set is ``CantorSpec(3, (0, 2), k)``.

Points are exact: either a :class:`fractions.Fraction` or an eventually
periodic :class:`DigitStream`.  Digit positions are 0-indexed, so position
``i`` carries weight ``b**-(i+1)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

MAX_INTERVALS = 1 << 22


@dataclass(frozen=True)
class CantorSpec:
    base: int = 3
    allowed: tuple = (0, 2)
    depth: int = 0

    def __post_init__(self):
        allowed = tuple(sorted(set(int(d) for d in self.allowed)))
        if self.base < 3:
            raise ValueError("base must be >= 3")
        if not allowed or len(allowed) >= self.base or allowed[0] < 0 or allowed[-1] >= self.base:
            raise ValueError(f"allowed digits {self.allowed} must be a proper nonempty subset of 0..{self.base - 1}")
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        object.__setattr__(self, "allowed", allowed)

    def at_depth(self, depth: int) -> "CantorSpec":
        return CantorSpec(self.base, self.allowed, depth)


def ternary(depth: int = 0) -> CantorSpec:
    return CantorSpec(3, (0, 2), depth)


_STREAM_RE = re.compile(r"^(?:0\.)?([0-9]*)(?:\(([0-9]+)\))?$")


@dataclass(frozen=True)
class DigitStream:
    """``0.prefix(repeat)(repeat)...`` in ``base``; an empty ``repeat`` means trailing zeros."""

    prefix: tuple = ()
    repeat: tuple = ()
    base: int = 3

    def __post_init__(self):
        prefix, repeat = tuple(map(int, self.prefix)), tuple(map(int, self.repeat))
        if any(d < 0 or d >= self.base for d in prefix + repeat):
            raise ValueError(f"digit out of range for base {self.base}")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "repeat", repeat)

    @classmethod
    def parse(cls, text: str, base: int = 3) -> "DigitStream":
        """``"0202"``, ``"0.02(02)"`` (parenthesised part repeats forever)."""
        m = _STREAM_RE.match(text.strip())
        if not m:
            raise ValueError(f"cannot parse digit stream {text!r}")
        return cls(tuple(m.group(1)), tuple(m.group(2) or ()), base)

    def __str__(self):
        body = "".join(map(str, self.prefix))
        if self.repeat:
            body += "(" + "".join(map(str, self.repeat)) + ")"
        return "0." + (body or "0")

    def digit(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        if not self.repeat:
            return 0
        return self.repeat[(i - len(self.prefix)) % len(self.repeat)]

    def digits(self, n: int) -> tuple:
        return tuple(self.digit(i) for i in range(n))

    def value(self) -> Fraction:
        b = self.base
        v = Fraction(0)
        for i, d in enumerate(self.prefix):
            v += Fraction(d, b ** (i + 1))
        if self.repeat:
            period = len(self.repeat)
            block = sum(Fraction(d, b ** (j + 1)) for j, d in enumerate(self.repeat))
            v += block / b ** len(self.prefix) / (1 - Fraction(1, b ** period))
        return v

    def with_digit(self, i: int, d: int) -> "DigitStream":
        n = max(i + 1, len(self.prefix))
        digits = list(self.digits(n))
        digits[i] = d
        # keep the periodic tail aligned with its original phase
        if self.repeat:
            shift = (n - len(self.prefix)) % len(self.repeat)
            repeat = self.repeat[shift:] + self.repeat[:shift]
        else:
            repeat = ()
        return DigitStream(tuple(digits), repeat, self.base)

    def uses_only(self, allowed) -> bool:
        allowed = set(allowed)
        return all(d in allowed for d in self.prefix + self.repeat) and (bool(self.repeat) or 0 in allowed)


@dataclass(frozen=True, eq=False)
class CantorIntervals:
    spec: CantorSpec
    left: np.ndarray  # left endpoints times ``denominator``
    denominator: int
    measure: Fraction

    @property
    def width(self) -> Fraction:
        return Fraction(1, self.denominator)

    def __len__(self):
        return len(self.left)

    def intervals(self) -> list:
        w = self.width
        return [(Fraction(int(a), self.denominator), Fraction(int(a), self.denominator) + w) for a in self.left]


def cantor_measure(spec: CantorSpec) -> Fraction:
    return Fraction(len(spec.allowed), spec.base) ** spec.depth


def cantor_intervals(spec: CantorSpec, max_intervals: int = MAX_INTERVALS) -> CantorIntervals:
    count = len(spec.allowed) ** spec.depth
    if count > max_intervals:
        raise OverflowError(
            f"{count} intervals at depth {spec.depth}; raise max_intervals or use cantor_measure"
        )
    dtype = np.int64 if spec.base ** spec.depth < 2 ** 62 else object
    left = np.zeros(1, dtype=dtype)
    digits = np.array(spec.allowed, dtype=dtype)
    for _ in range(spec.depth):
        left = (left[:, None] * spec.base + digits[None, :]).ravel()
    return CantorIntervals(spec, left, spec.base ** spec.depth, cantor_measure(spec))


def cantor_membership(x, spec: CantorSpec) -> bool:
    """Is ``x`` in the depth-k iterate?

    Points with two base-b expansions are members if either expansion uses
    only allowed digits, so interval endpoints belong to the set.
    """
    if isinstance(x, DigitStream):
        x = x.value()
    x = Fraction(x)
    if not (0 <= x <= 1):
        return False
    b = spec.base
    frontier = {x}
    for _ in range(spec.depth):
        nxt = set()
        for y in frontier:
            t = y * b
            for d in spec.allowed:
                if d <= t <= d + 1:
                    nxt.add(t - d)
        if not nxt:
            return False
        frontier = nxt
    return True


def ternary_to_binary_map(x: DigitStream) -> DigitStream:
    """Replace each ternary digit 2 by 1 and read the result in binary.

    ``ternary_to_binary_map(x).value()`` is the image point in [0, 1].
    """
    if x.base != 3:
        raise ValueError("expected a base-3 stream")
    if 1 in x.prefix or 1 in x.repeat:
        raise ValueError("digit 1 does not occur in the ternary Cantor set")
    return DigitStream(tuple(d // 2 for d in x.prefix), tuple(d // 2 for d in x.repeat), 2)


def dyadic_integer_map(d) -> DigitStream:
    """Send binary digits ``d0 d1 ...`` to the ternary point ``0.e0 e1 ...`` with ``e = 2d``."""
    if not isinstance(d, DigitStream):
        d = DigitStream(tuple(d), (), 2)
    if d.base != 2:
        raise ValueError("expected binary digits")
    return DigitStream(tuple(2 * v for v in d.prefix), tuple(2 * v for v in d.repeat), 3)


class DepthTooShallow(ValueError):
    """No neighbour within epsilon at this depth; ask again with a deeper spec."""


def _as_member(x, spec: CantorSpec) -> DigitStream:
    if not isinstance(x, DigitStream):
        x = DigitStream(tuple(x), (), spec.base)
    if x.base != spec.base:
        raise ValueError("stream base does not match spec")
    if not x.uses_only(spec.allowed):
        raise ValueError(f"{x} uses digits outside {spec.allowed}")
    return x


def _nearest_other(d: int, allowed) -> int:
    return min((a for a in allowed if a != d), key=lambda a: (abs(a - d), a))


def perfect_set_neighbor(x, epsilon, spec: CantorSpec) -> DigitStream:
    """Another member within ``epsilon`` of ``x``, differing in exactly one digit.

    Tries positions ``0 .. depth-1`` in turn and returns the first change of
    size below ``epsilon``.
    """
    if len(spec.allowed) < 2:
        raise ValueError("a single allowed digit gives isolated points")
    x = _as_member(x, spec)
    epsilon = Fraction(epsilon)
    for i in range(spec.depth):
        d = x.digit(i)
        alt = _nearest_other(d, spec.allowed)
        if Fraction(abs(alt - d), spec.base ** (i + 1)) < epsilon:
            return x.with_digit(i, alt)
    raise DepthTooShallow(f"no single-digit change below {epsilon} within depth {spec.depth}")


def perturb_on_set(x, position: int, spec: CantorSpec, digit: int | None = None) -> DigitStream:
    """Change digit ``position`` to another allowed digit; membership is kept."""
    x = _as_member(x, spec)
    current = x.digit(position)
    if digit is None:
        digit = _nearest_other(current, spec.allowed)
    if digit not in spec.allowed or digit == current:
        raise ValueError(f"digit {digit} is not another allowed digit")
    return x.with_digit(position, digit)


def on_set_neighbors(x, spec: CantorSpec) -> list:
    """Every single-digit on-set change up to ``spec.depth``."""
    x = _as_member(x, spec)
    return [
        x.with_digit(i, d)
        for i in range(spec.depth)
        for d in spec.allowed
        if d != x.digit(i)
    ]


@dataclass(frozen=True)
class OffSetPerturbation:
    point: Fraction
    offset: Fraction
    member: bool


def perturb_off_set(x, magnitude, spec: CantorSpec, rng=None, offset=None) -> OffSetPerturbation:
    """Add an offset drawn uniformly from ``[-magnitude, magnitude]`` (or the given one).

    Lebesgue-random noise leaves the set almost surely; membership is
    checked exactly at ``spec.depth``.
    """
    if isinstance(x, DigitStream):
        x = x.value()
    if offset is None:
        rng = np.random.default_rng(rng)
        offset = Fraction(float(rng.uniform(-float(magnitude), float(magnitude))))
    offset = Fraction(offset)
    y = Fraction(x) + offset
    return OffSetPerturbation(y, offset, cantor_membership(y, spec))


def cantor_sample(spec: CantorSpec, n: int, rng=None) -> np.ndarray:
    """``n`` points drawn from the natural (uniform-digit) measure on the depth-k iterate."""
    rng = np.random.default_rng(rng)
    digits = rng.choice(np.array(spec.allowed), size=(n, spec.depth))
    weights = float(spec.base) ** -np.arange(1, spec.depth + 1)
    return digits @ weights + rng.random(n) * float(spec.base) ** -spec.depth
