"""Bit strings of length 2**N, quaternionic generators and the E(alpha, beta) family.

A string is split into halves ``(u, v)``.  The generators act as::

    negation   (u, v) -> (~u, ~v)
    i          (u, v) -> (v, ~u)
    j          (u, v) -> (i(v), i(u))
    k          = i o j

which satisfy ``i*i = j*j = k*k = -1`` and ``i*j = -(j*i) = k`` on every
string of length >= 4.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numkit import BitBudget, Dyadic, fits_budget


class StructureError(ValueError):
    """A string or operator has the wrong shape for the requested action."""


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True, eq=False)
class BitString:
    bits: np.ndarray
    n_bits: int

    def __post_init__(self):
        arr = np.asarray(self.bits, dtype=np.uint8)
        if arr.ndim != 1 or arr.size != (1 << self.n_bits):
            raise StructureError(f"expected {1 << self.n_bits} bits, got shape {arr.shape}")
        if arr.size and arr.max() > 1:
            raise StructureError("bits must be 0 or 1")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    @classmethod
    def zeros(cls, n_bits: int) -> "BitString":
        return cls(np.zeros(1 << n_bits, dtype=np.uint8), n_bits)

    @classmethod
    def ones(cls, n_bits: int) -> "BitString":
        return cls(np.ones(1 << n_bits, dtype=np.uint8), n_bits)

    @classmethod
    def from_bits(cls, bits) -> "BitString":
        arr = np.asarray(bits, dtype=np.uint8)
        if not _is_pow2(arr.size) or arr.size < 4:
            raise StructureError(f"length {arr.size} is not a power of two >= 4")
        return cls(arr, arr.size.bit_length() - 1)

    @classmethod
    def from_hex(cls, text: str, n_bits: int) -> "BitString":
        length = 1 << n_bits
        if len(text) != length // 4:
            raise StructureError(f"expected {length // 4} hex digits, got {len(text)}")
        raw = bytes.fromhex(text + ("0" if len(text) % 2 else ""))
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[:length]
        return cls(bits, n_bits)

    def to_hex(self) -> str:
        # most significant (first) position leads
        return np.packbits(self.bits).tobytes().hex()[: self.bits.size // 4]

    def __len__(self):
        return self.bits.size

    def __eq__(self, other):
        if not isinstance(other, BitString):
            return NotImplemented
        return self.n_bits == other.n_bits and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.n_bits, self.bits.tobytes()))

    def count_zeros(self) -> int:
        return int(self.bits.size - np.count_nonzero(self.bits))

    def __repr__(self):
        body = "".join(map(str, self.bits[:32]))
        return f"BitString(N={self.n_bits}, {body}{'...' if len(self) > 32 else ''})"


def zero_frequency(s: BitString) -> Dyadic:
    return Dyadic(s.count_zeros(), s.n_bits)


# ---------------------------------------------------------------------------
# quaternionic generators

def _neg(x):
    return x ^ 1


def _i(x):
    h = x.size // 2
    return np.concatenate((x[h:], x[:h] ^ 1))


def _j(x):
    h = x.size // 2
    return np.concatenate((_i(x[h:]), _i(x[:h])))


def _k(x):
    return _i(_j(x))


_GENERATORS = {
    "1": lambda x: x,
    "-1": _neg,
    "i": _i,
    "j": _j,
    "k": _k,
}


@dataclass(frozen=True)
class GeneratorWord:
    """A product of generators, e.g. ``("i", "j")`` for ``i*j``.

    The word is read as an operator product: the rightmost symbol acts
    first, so ``GeneratorWord(("i", "j"))`` equals ``k``.
    """

    word: tuple

    def __post_init__(self):
        word = tuple(self.word)
        if not word:
            raise StructureError("generator word is empty")
        bad = [g for g in word if g not in _GENERATORS]
        if bad:
            raise StructureError(f"unknown generators {bad}")
        object.__setattr__(self, "word", word)

    @classmethod
    def parse(cls, text: str) -> "GeneratorWord":
        """``"ij"``, ``"-1 k"``, ``"1"``: whitespace optional between letters."""
        tokens = []
        rest = text.replace(" ", "")
        while rest:
            if rest.startswith("-1"):
                tokens.append("-1")
                rest = rest[2:]
            elif rest[0] == "-":
                tokens.extend(["-1", rest[1]])
                rest = rest[2:]
            else:
                tokens.append(rest[0])
                rest = rest[1:]
        return cls(tuple(tokens))

    def __mul__(self, other: "GeneratorWord") -> "GeneratorWord":
        return GeneratorWord(self.word + other.word)


def apply_generator(g, s: BitString) -> BitString:
    if isinstance(g, str):
        g = GeneratorWord.parse(g)
    if not _is_pow2(len(s)) or len(s) < 4:
        raise StructureError(f"generators need a power-of-two length >= 4, got {len(s)}")
    x = s.bits
    for sym in reversed(g.word):
        x = _GENERATORS[sym](x)
    return BitString(x, s.n_bits)


# ---------------------------------------------------------------------------
# E(alpha, beta)

def bit_reversal_order(n_bits: int) -> np.ndarray:
    """Positions ``0..2**n-1`` in van der Corput (bit-reversed) order."""
    idx = np.arange(1 << n_bits, dtype=np.int64)
    rev = np.zeros_like(idx)
    for b in range(n_bits):
        rev |= ((idx >> b) & 1) << (n_bits - 1 - b)
    return rev


@dataclass(frozen=True)
class EOperator:
    alpha: Dyadic
    beta: Dyadic
    n_bits: int

    def __post_init__(self):
        BitBudget(self.n_bits)
        alpha = self.alpha if isinstance(self.alpha, Dyadic) else Dyadic.from_fraction(self.alpha)
        beta = self.beta if isinstance(self.beta, Dyadic) else Dyadic.from_fraction(self.beta)
        if not (0 <= alpha <= 2):
            raise ValueError(f"alpha={alpha} outside [0, 2]")
        if not (0 <= beta < 4):
            raise ValueError(f"beta={beta} outside [0, 4)")
        if not fits_budget(alpha, self.n_bits) or not fits_budget(beta, self.n_bits, bound=4):
            raise ValueError(f"alpha={alpha}, beta={beta} exceed the {self.n_bits}-bit budget")
        if alpha.exponent > self.n_bits - 1:
            raise ValueError(f"alpha * 2^(N-1) must be an integer (alpha={alpha}, N={self.n_bits})")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def negations(self) -> int:
        """How many positions get negated: ``alpha/2 * 2**N``."""
        return self.alpha.mantissa << (self.n_bits - 1 - self.alpha.exponent)

    @property
    def rotation(self) -> int:
        """Cyclic shift ``floor(beta/4 * 2**N)``."""
        return int(self.beta.to_fraction() * (1 << self.n_bits) // 4)

    @property
    def negated_positions(self) -> np.ndarray:
        return bit_reversal_order(self.n_bits)[: self.negations]


def _check_size(e: EOperator, s: BitString):
    if s.n_bits != e.n_bits:
        raise StructureError(f"operator budget N={e.n_bits} but string has N={s.n_bits}")


def apply_E(e: EOperator, s: BitString) -> BitString:
    _check_size(e, s)
    x = s.bits.copy()
    x[e.negated_positions] ^= 1
    return BitString(np.roll(x, e.rotation), s.n_bits)


def invert_E(e: EOperator, s: BitString) -> BitString:
    """Undo :func:`apply_E`: rotate back, then re-negate the same positions."""
    _check_size(e, s)
    x = np.roll(s.bits, -e.rotation).copy()
    x[e.negated_positions] ^= 1
    return BitString(x, s.n_bits)


