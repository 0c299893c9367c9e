"""Single-qubit descriptors for E-operator strings.

A state ``cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>`` is carried as the pair
``(cos^2(theta/2), phi/pi)``.  theta is never stored: it is generically
irrational, whereas ``cos^2(theta/2) = |1 - alpha/2|`` is dyadic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .bitstring import BitString, EOperator, apply_E, zero_frequency
from .numkit import BitBudget, Dyadic, RationalAngle, fits_budget


@dataclass(frozen=True)
class QubitState:
    cos_half_sq: Dyadic
    phase: RationalAngle
    n_bits: int

    def __post_init__(self):
        BitBudget(self.n_bits)
        if not (0 <= self.cos_half_sq <= 1):
            raise ValueError(f"cos^2(theta/2)={self.cos_half_sq} outside [0, 1]")
        if not fits_budget(self.cos_half_sq, self.n_bits):
            raise ValueError(f"cos^2(theta/2)={self.cos_half_sq} exceeds the {self.n_bits}-bit budget")
        beta = 2 * self.phase.to_fraction()
        if not (0 <= beta < 4) or not fits_budget(beta, self.n_bits, bound=4):
            raise ValueError(f"phase {self.phase} is not beta/2 for a representable beta")

    @property
    def sin_half_sq(self) -> Dyadic:
        return Dyadic(1) - self.cos_half_sq

    @property
    def cos_theta(self) -> Dyadic:
        return self.cos_half_sq.scale(1) - 1

    def to_json(self) -> dict:
        return {
            "cos_half_sq": str(self.cos_half_sq),
            "phase_over_pi": f"{self.phase.num}/{self.phase.den}",
            "N": self.n_bits,
        }

    @classmethod
    def from_json(cls, obj) -> "QubitState":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(
            Dyadic.parse(obj["cos_half_sq"]),
            RationalAngle.parse(obj["phase_over_pi"]),
            int(obj["N"]),
        )


@dataclass(frozen=True)
class Undefinable:
    """Verdict for a state with no sample space at the given budget."""

    reason: str


def e_to_state(e: EOperator) -> QubitState:
    cos_half_sq = abs(Dyadic(1) - e.alpha.scale(-1))
    phase = RationalAngle.from_fraction(e.beta.to_fraction() / 2)
    return QubitState(cos_half_sq, phase, e.n_bits)


def state_to_e(cos_half_sq, phase, b) -> EOperator | Undefinable:
    """Invert :func:`e_to_state`, or return :class:`Undefinable`.

    ``cos_half_sq`` may be any rational; values outside ``[0, 1]`` raise
    ``ValueError`` (a malformed request, not a verdict).  ``phase`` is taken
    modulo 2.
    """
    n = b.n if isinstance(b, BitBudget) else BitBudget(b).n
    c = cos_half_sq.to_fraction() if isinstance(cos_half_sq, Dyadic) else Fraction(cos_half_sq)
    if not (0 <= c <= 1):
        raise ValueError(f"cos^2(theta/2)={c} outside [0, 1]")
    p = phase.to_fraction() if isinstance(phase, RationalAngle) else Fraction(phase)
    p %= 2

    if not Dyadic.is_dyadic(c):
        return Undefinable(f"cos^2(theta/2)={c} is not a dyadic rational")
    if not Dyadic.is_dyadic(p):
        return Undefinable(f"phi/pi={p} is not a dyadic rational")
    alpha = Dyadic.from_fraction(2 * (1 - c))
    beta = Dyadic.from_fraction(2 * p)
    if alpha.exponent > n - 1:
        return Undefinable(f"cos^2(theta/2)={c} needs more than {n} bits")
    if not fits_budget(beta, n, bound=4):
        return Undefinable(f"beta={beta} needs more than {n} bits")
    return EOperator(alpha, beta, n)


def born_probability(e: EOperator) -> Dyadic:
    """Probability of outcome 0, read off the string ``E(000...0)``."""
    return zero_frequency(apply_E(e, BitString.zeros(e.n_bits)))
