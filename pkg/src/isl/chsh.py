"""CHSH experiment harness for the finite-precision hidden-variable model.

Directions ``a1, a2`` (Alice) and ``b1, b2`` (Bob) are described by pairwise
cosines, not coordinates.  A correlation is *definable* only when the cosine of
its pair is a dyadic rational within the bit budget.  In the four-sub-ensemble
protocol each setting pair is snapped to the budget on its own ensemble, so
all four correlations exist and ``S`` can reach ``2*sqrt(2)``.  A single common
ensemble only supports two of them.

Correlation sign convention: symbol 0 means the outcomes agree, so
``Corr = +cos(theta)``.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from types import MappingProxyType
from typing import Mapping

import mpmath
import numpy as np

from .bitstring import BitString, EOperator, apply_E
from .hilbert import Undefinable
from .numkit import (
    BitBudget,
    Dyadic,
    IrrationalCos,
    RationalAngle,
    RationalCos,
    fits_budget,
    niven_classify,
)

CORRELATION_PAIRS = ("a1b1", "a1b2", "a2b1", "a2b2")
SIDE_PAIRS = ("a1a2", "b1b2")

DEFINABLE = "Definable"
NON_DYADIC = "NonDyadic"
OVER_BUDGET = "OverBudget"

STANDARD_ANGLES = (0.0, 90.0, 45.0, 135.0)


class ConfigError(ValueError):
    pass


class DegenerateTriangle(ValueError):
    pass


class ProtocolError(RuntimeError):
    """Sub-experiments share an ensemble where the protocol requires disjoint ones."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Dyadic):
        return value.to_fraction()
    if isinstance(value, mpmath.mpf):
        if not mpmath.isfinite(value):
            raise ValueError(f"non-finite value {value}")
        sign, man, exp, _ = value._mpf_
        q = Fraction(int(man)) * Fraction(2) ** exp
        return -q if sign else q
    return Fraction(value)


def snap_to_dyadic(cos_value, b) -> Dyadic:
    """Nearest multiple of ``2**-N``; exact ties go toward zero."""
    n = b.n if isinstance(b, BitBudget) else int(b)
    if n < 0:
        raise ValueError("negative bit count")
    v = _as_fraction(cos_value)
    if not (-1 <= v <= 1):
        raise ValueError(f"cosine {float(v)} outside [-1, 1]")
    scaled = v * (1 << n)
    lo = math.floor(scaled)
    rem = scaled - lo
    if rem > Fraction(1, 2) or (rem == Fraction(1, 2) and scaled < 0):
        lo += 1
    return Dyadic(lo, n)


# ---------------------------------------------------------------------------
# spherical cosine rule

@dataclass(frozen=True)
class ExactRational:
    """Third-side cosine is a dyadic rational."""

    value: Fraction


@dataclass(frozen=True)
class NonDyadic:
    """Third-side cosine is rational but its denominator is not a power of two."""

    value: Fraction


@dataclass(frozen=True)
class IrrationalVerdict:
    """Third-side cosine is irrational; ``basis`` names the argument used."""

    approx: float
    basis: str


Irrational = IrrationalVerdict


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def _classify_rational(value: Fraction):
    return ExactRational(value) if Dyadic.is_dyadic(value) else NonDyadic(value)


def triangle_third_cosine(cos_s1, cos_s2, apex: RationalAngle):
    """Cosine of the side opposite ``apex`` in a spherical triangle.

    ``cos t3 = cos s1 cos s2 + sin s1 sin s2 cos(apex)``, decided exactly.
    With ``P = sin^2 s1 sin^2 s2`` and ``x = sqrt(P) cos(apex)``, the result is
    rational iff ``x`` is.  When both ``sqrt(P)`` and ``cos(apex)`` are
    irrational, ``x`` can still be rational; ``x**2 = P (1 + cos 2apex) / 2``
    settles it.
    """
    c1, c2 = _as_fraction(cos_s1), _as_fraction(cos_s2)
    for c in (c1, c2):
        if not (-1 <= c <= 1):
            raise ValueError(f"cosine {c} outside [-1, 1]")
        if abs(c) == 1:
            raise DegenerateTriangle("a side of zero or pi length does not span a triangle")
    a = apex.to_fraction()
    if not (0 < a < 1):
        raise ValueError(f"apex angle {apex} pi outside (0, pi)")

    base = c1 * c2
    p = (1 - c1 * c1) * (1 - c2 * c2)
    root = _rational_sqrt(p)
    cos_apex = niven_classify(apex)
    with mpmath.workprec(128):
        approx = float(
            mpmath.mpf(base.numerator) / base.denominator
            + mpmath.sqrt(mpmath.mpf(p.numerator) / p.denominator) * mpmath.cos(apex.radians(128))
        )

    if isinstance(cos_apex, RationalCos):
        if cos_apex.value == 0:
            return _classify_rational(base)
        if root is not None:
            return _classify_rational(base + root * cos_apex.value)
        return IrrationalVerdict(approx, "irrational sine product times nonzero rational cos(apex)")

    if root is not None:
        return IrrationalVerdict(approx, "rational sine product times irrational cos(apex)")
    doubled = niven_classify(RationalAngle.from_fraction(2 * a))
    if isinstance(doubled, IrrationalCos):
        return IrrationalVerdict(approx, "square of the second term is irrational (cos(2 apex) irrational)")
    x = _rational_sqrt(p * (1 + doubled.value) / 2)
    if x is None:
        return IrrationalVerdict(approx, "square of the second term is not a rational square")
    sign = 1 if a < Fraction(1, 2) else -1
    return _classify_rational(base + sign * x)


# ---------------------------------------------------------------------------
# configurations

@dataclass(frozen=True)
class ExactDyadicCos:
    value: Dyadic


def _descriptor(value):
    if isinstance(value, (ExactDyadicCos, NonDyadic, IrrationalVerdict)):
        return value
    if isinstance(value, ExactRational):
        return ExactDyadicCos(Dyadic.from_fraction(value.value))
    if isinstance(value, float):
        return IrrationalVerdict(value, "supplied as a floating value")
    q = _as_fraction(value)
    return ExactDyadicCos(Dyadic.from_fraction(q)) if Dyadic.is_dyadic(q) else NonDyadic(q)


def _descriptor_value(d) -> float:
    if isinstance(d, ExactDyadicCos):
        return float(d.value)
    if isinstance(d, NonDyadic):
        return float(d.value)
    return d.approx


def _split(pair: str) -> tuple[str, str]:
    return pair[:2], pair[2:]


def _pair_key(x: str, y: str) -> str:
    order = {"a1": 0, "a2": 1, "b1": 2, "b2": 3}
    x, y = sorted((x, y), key=order.__getitem__)
    return x + y


def _other(label: str) -> str:
    return label[0] + ("2" if label[1] == "1" else "1")


@dataclass(frozen=True)
class CHSHConfig:
    """Pairwise angle data for the four directions.

    ``cosines`` maps pair keys (``"a1a2"``, ``"a1b1"`` ...) to descriptors.
    Correlation pairs may be left out when they follow from the cosine rule:
    ``chosen`` names the pair realised by a common ensemble and ``apex`` gives
    the angle (as a fraction of pi) subtended at its two endpoints.
    """

    cosines: Mapping[str, object]
    n_bits: int
    apex: Mapping[str, RationalAngle] = field(default_factory=dict)
    chosen: str | None = None
    snap_error: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        BitBudget(self.n_bits)
        cos = {k: _descriptor(v) for k, v in self.cosines.items()}
        for side in SIDE_PAIRS:
            d = cos.get(side)
            if not isinstance(d, ExactDyadicCos) or not fits_budget(d.value, self.n_bits):
                raise ConfigError(f"cos({side}) must be a dyadic rational within {self.n_bits} bits, got {d}")
        for key, d in cos.items():
            if not (-1 <= _descriptor_value(d) <= 1):
                raise ConfigError(f"cos({key}) outside [-1, 1]")
        if self.chosen is not None and self.chosen not in CORRELATION_PAIRS:
            raise ConfigError(f"unknown chosen pair {self.chosen!r}")
        object.__setattr__(self, "cosines", MappingProxyType(cos))
        object.__setattr__(self, "apex", MappingProxyType(dict(self.apex)))
        object.__setattr__(self, "snap_error", MappingProxyType(dict(self.snap_error)))

    @classmethod
    def from_pair_data(cls, cos_a1a2, cos_b1b2, cos_chosen, cos_opposite, n_bits,
                       apex_alice=None, apex_bob=None, chosen="a1b1"):
        """Given sides plus the apex angles at both ends of the chosen pair.

        The two remaining correlation pairs are left for the cosine rule.
        """
        a, b = _split(chosen)
        default = RationalAngle(1, 1 << n_bits)
        cosines = {
            "a1a2": cos_a1a2,
            "b1b2": cos_b1b2,
            chosen: cos_chosen,
            _pair_key(_other(a), _other(b)): cos_opposite,
        }
        apex = {a: apex_alice or default, b: apex_bob or default}
        return cls(cosines, n_bits, apex=apex, chosen=chosen)

    @classmethod
    def from_angles(cls, a1, a2, b1, b2, n_bits, chosen="a1b1", apex=None):
        """Directions as planar angles in degrees, snapped to ``N - 1`` bits.

        Planar points subtend a zero apex angle, which the model does not
        admit; the apex defaults to the smallest representable angle
        ``pi / 2**N`` at both ends of the chosen pair.
        """
        deg = {"a1": a1, "a2": a2, "b1": b1, "b2": b2}
        a, b = _split(chosen)
        given = ["a1a2", "b1b2", chosen, _pair_key(_other(a), _other(b))]
        cosines, errors = {}, {}
        for key in given:
            x, y = _split(key)
            theta = math.radians(deg[y] - deg[x])
            snapped = snap_to_dyadic(math.cos(theta), snap_bits(n_bits))
            cosines[key] = snapped
            errors[key] = abs(math.acos(max(-1.0, min(1.0, float(snapped)))) - math.acos(math.cos(theta)))
        if apex is None:
            apex = RationalAngle(1, 1 << n_bits)
        return cls(cosines, n_bits, apex={a: apex, b: apex}, chosen=chosen, snap_error=errors)

    def resolved(self) -> dict:
        """All four correlation descriptors, filling gaps with the cosine rule."""
        return {p: d for p, (d, _) in self._resolve().items()}

    def _resolve(self) -> dict:
        out = {}
        for pair in CORRELATION_PAIRS:
            if pair in self.cosines:
                out[pair] = (self.cosines[pair], None)
                continue
            out[pair] = self._derive(pair)
        return out

    def _derive(self, pair):
        if self.chosen is None or self.chosen not in self.cosines:
            raise ConfigError(f"cos({pair}) missing and no chosen pair to derive it from")
        a, b = _split(pair)
        ca, cb = _split(self.chosen)
        # the apex is the chosen-pair endpoint NOT shared with the missing pair;
        # there the chosen side meets that party's own a1a2 / b1b2 side
        if a == ca and b != cb:
            vertex, side = cb, "b1b2"
        elif b == cb and a != ca:
            vertex, side = ca, "a1a2"
        else:
            raise ConfigError(f"cos({pair}) cannot be derived from chosen pair {self.chosen}")
        c_side = self.cosines[side].value
        chosen_d = self.cosines[self.chosen]
        if not isinstance(chosen_d, ExactDyadicCos):
            raise ConfigError(f"chosen pair {self.chosen} must itself be dyadic")
        c_chosen = chosen_d.value
        if vertex not in self.apex:
            raise ConfigError(f"no apex angle recorded at {vertex}")
        for c, other_c in ((c_side, c_chosen), (c_chosen, c_side)):
            if abs(c) == 1:
                # degenerate triangle: the third side equals (or opposes) the other one
                value = other_c.to_fraction() * c.to_fraction()
                return ExactDyadicCos(Dyadic.from_fraction(value)), None
        result = triangle_third_cosine(c_side, c_chosen, self.apex[vertex])
        return _descriptor(result), (vertex, self.apex[vertex], result)


def snap_bits(n_bits: int) -> int:
    """Resolution used when snapping cosines for strings of length ``2**N``.

    A product string realises ``(1 + cos)/2`` exactly only if ``cos`` has at
    most ``N - 1`` fractional bits.
    """
    return n_bits - 1


def standard_config(n_bits: int, chosen="a1b1") -> CHSHConfig:
    return CHSHConfig.from_angles(*STANDARD_ANGLES, n_bits=n_bits, chosen=chosen)


@dataclass(frozen=True)
class DefinabilityReport:
    verdicts: Mapping[str, str]
    exceptions: tuple
    chosen: str | None
    details: Mapping[str, object]

    @property
    def definable(self) -> tuple:
        return tuple(p for p in CORRELATION_PAIRS if self.verdicts[p] == DEFINABLE)

    @property
    def definable_count(self) -> int:
        return len(self.definable)

    def to_json(self) -> dict:
        return {
            "chosen": self.chosen,
            "verdicts": dict(self.verdicts),
            "definable_count": self.definable_count,
            "niven_exceptions": list(self.exceptions),
            "derivations": {
                p: {"apex_vertex": v, "apex_over_pi": str(ang), "result": _result_json(r)}
                for p, (v, ang, r) in self.details.items()
            },
        }


def _result_json(r) -> dict:
    if isinstance(r, ExactRational):
        return {"kind": "ExactRational", "value": str(r.value)}
    if isinstance(r, NonDyadic):
        return {"kind": "NonDyadic", "value": str(r.value)}
    return {"kind": "Irrational", "approx": r.approx, "basis": r.basis}


def joint_definability(cfg: CHSHConfig) -> DefinabilityReport:
    verdicts, details, exceptions = {}, {}, []
    for pair, (d, derivation) in cfg._resolve().items():
        if isinstance(d, ExactDyadicCos):
            verdicts[pair] = DEFINABLE if fits_budget(d.value, cfg.n_bits) else OVER_BUDGET
        else:
            verdicts[pair] = NON_DYADIC
        if derivation is not None:
            details[pair] = derivation
            if isinstance(derivation[2], ExactRational):
                exceptions.append(pair)
    return DefinabilityReport(
        MappingProxyType(verdicts), tuple(exceptions), cfg.chosen, MappingProxyType(details)
    )


# ---------------------------------------------------------------------------
# sub-experiments

@dataclass(frozen=True)
class SubExperiment:
    pair: str
    label: int
    product: BitString
    cos_theta: Dyadic
    operator: EOperator

    @property
    def hidden_variables(self) -> Counter:
        """The ensemble as ``{(label, position): 1}`` counts."""
        return Counter((self.label, i) for i in range(len(self.product)))


def build_subexperiment(pair: str, cos_theta, b, seed: int) -> SubExperiment | Undefinable:
    """Product string with zero-frequency ``(1 + cos)/2`` on ensemble ``seed``.

    The seed fixes the frequency-preserving rotation ``beta`` and labels the
    ensemble; different seeds give disjoint ensembles.
    """
    n = b.n if isinstance(b, BitBudget) else BitBudget(b).n
    q = _as_fraction(cos_theta)
    if not (-1 <= q <= 1):
        raise ValueError(f"cosine {q} outside [-1, 1]")
    if not Dyadic.is_dyadic(q):
        return Undefinable(f"cos({pair})={q} is not a dyadic rational")
    c = Dyadic.from_fraction(q)
    if c.exponent > n - 1:
        return Undefinable(f"cos({pair})={c} needs more than {n - 1} bits for a 2^{n} string")
    rng = np.random.default_rng(seed)
    beta = Dyadic(int(rng.integers(0, 4 << n)), n)
    op = EOperator(Dyadic(1) - c, beta, n)
    return SubExperiment(pair, int(seed), apply_E(op, BitString.zeros(n)), c, op)


def corr(sub: SubExperiment) -> Dyadic:
    zeros = sub.product.count_zeros()
    return Dyadic(2 * zeros - len(sub.product), sub.product.n_bits)


def s_value(c11, c12, c21, c22) -> Fraction:
    f = [_as_fraction(c) for c in (c11, c12, c21, c22)]
    return abs(f[0] - f[1]) + abs(f[2] + f[3])


@dataclass(frozen=True)
class CHSHReport:
    correlations: Mapping[str, Dyadic]
    S: Fraction
    definability: Mapping[str, str]
    mi_violation: Fraction
    n_bits: int
    seeds: Mapping[str, int]
    snap_error: Mapping[str, float] = field(default_factory=dict)
    common_ensemble: Mapping[str, object] = field(default_factory=dict)

    @property
    def exceeds_local_bound(self) -> bool:
        """True when S > 2: no single-ensemble local model can produce it."""
        return self.S > 2

    def recompute_S(self) -> Fraction:
        c = self.correlations
        return s_value(c["a1b1"], c["a1b2"], c["a2b1"], c["a2b2"])

    def to_json(self) -> dict:
        out = {
            "correlations": {k: str(v) for k, v in self.correlations.items()},
            "S": f"{self.S.numerator}/{self.S.denominator}",
            "S_float": float(self.S),
            "exceeds_local_bound": self.exceeds_local_bound,
            "definability": dict(self.definability),
            "mi_violation": f"{self.mi_violation.numerator}/{self.mi_violation.denominator}",
            "N": self.n_bits,
            "seeds": dict(self.seeds),
        }
        if self.snap_error:
            out["snap_error_rad"] = dict(self.snap_error)
        if self.common_ensemble:
            out["common_ensemble"] = dict(self.common_ensemble)
        return out


def chsh_statistic(s11, s12, s21, s22, ensembles=None) -> CHSHReport:
    """Exact S from four sub-experiments on pairwise disjoint ensembles.

    ``ensembles`` optionally supplies the lambda-distribution per setting pair
    used for the measurement-independence metric; by default each pair sees
    only its own sub-ensemble.
    """
    subs = {"a1b1": s11, "a1b2": s12, "a2b1": s21, "a2b2": s22}
    labels = [s.label for s in subs.values()]
    if len(set(labels)) != 4:
        raise ProtocolError(f"ensemble labels must be pairwise distinct, got {labels}")
    correlations = {p: corr(s) for p, s in subs.items()}
    if ensembles is None:
        ensembles = {p: {s.label: len(s.product)} for p, s in subs.items()}
    return CHSHReport(
        correlations=MappingProxyType(correlations),
        S=s_value(*correlations.values()),
        definability=MappingProxyType({p: DEFINABLE for p in subs}),
        mi_violation=mi_violation(ensembles),
        n_bits=s11.product.n_bits,
        seeds=MappingProxyType({p: s.label for p, s in subs.items()}),
    )


def protocol_seeds(seed: int) -> dict:
    return {p: 4 * seed + k for k, p in enumerate(CORRELATION_PAIRS)}


def invariant_set_ensembles(subs: Mapping[str, SubExperiment], reports: Mapping[str, DefinabilityReport]):
    """lambda-distributions per setting pair in the invariant-set model.

    Ensemble ``k`` belongs to the state of the universe in which pair ``k`` was
    chosen; a setting pair draws its lambdas from every ensemble on which it is
    definable.  Each ensemble is uniform over its ``2**N`` positions, so it is
    recorded as one block of that weight.
    """
    out = {}
    for pair in CORRELATION_PAIRS:
        out[pair] = {
            subs[k].label: len(subs[k].product)
            for k in CORRELATION_PAIRS
            if reports[k].verdicts[pair] == DEFINABLE
        }
    return out


def run_chsh(angles_deg=STANDARD_ANGLES, n_bits: int = 20, seed: int = 0, apex=None) -> CHSHReport:
    """Snap, build the four disjoint sub-experiments and evaluate S."""
    a1, a2, b1, b2 = angles_deg
    seeds = protocol_seeds(seed)
    subs, snap_error, common = {}, {}, {}
    for pair in CORRELATION_PAIRS:
        cfg = CHSHConfig.from_angles(a1, a2, b1, b2, n_bits, chosen=pair, apex=apex)
        common[pair] = joint_definability(cfg)
        c = cfg.cosines[pair].value
        snap_error[pair] = cfg.snap_error[pair]
        sub = build_subexperiment(pair, c, n_bits, seeds[pair])
        assert not isinstance(sub, Undefinable)
        subs[pair] = sub
    report = chsh_statistic(
        subs["a1b1"], subs["a1b2"], subs["a2b1"], subs["a2b2"],
        ensembles=invariant_set_ensembles(subs, common),
    )
    return CHSHReport(
        correlations=report.correlations,
        S=report.S,
        definability=report.definability,
        mi_violation=report.mi_violation,
        n_bits=n_bits,
        seeds=report.seeds,
        snap_error=MappingProxyType(snap_error),
        common_ensemble=MappingProxyType({k: dict(r.verdicts) for k, r in common.items()}),
    )


def run_chsh_from_cosines(cosines: Mapping[str, object], n_bits: int, seed: int = 0):
    """Like :func:`run_chsh` with cosines given exactly.

    Returns a dict of :class:`Undefinable` verdicts if any pair cannot be
    realised at the budget.
    """
    seeds = protocol_seeds(seed)
    subs = {p: build_subexperiment(p, cosines[p], n_bits, seeds[p]) for p in CORRELATION_PAIRS}
    bad = {p: s for p, s in subs.items() if isinstance(s, Undefinable)}
    if bad:
        return bad
    return chsh_statistic(subs["a1b1"], subs["a1b2"], subs["a2b1"], subs["a2b2"])


# ---------------------------------------------------------------------------
# local hidden-variable baseline and measurement independence

def deterministic_strategies() -> np.ndarray:
    """All 16 outcome tables ``(A(a1), A(a2), B(b1), B(b2))`` with entries +-1."""
    return np.array(list(product((1, -1), repeat=4)), dtype=np.int64)


def local_hv_baseline(tables, weights=None):
    """S for a local model: lambda picks a table, independent of the settings.

    Exact (a ``Fraction``) when the weights are rational or omitted, float
    otherwise.
    """
    tables = np.atleast_2d(np.asarray(tables, dtype=np.int64))
    if tables.shape[1] != 4 or not np.all(np.abs(tables) == 1):
        raise ValueError("tables must be rows of four +-1 outcomes")
    if weights is None:
        weights = [Fraction(1, len(tables))] * len(tables)
    weights = list(weights)
    if len(weights) != len(tables):
        raise ValueError("one weight per table")
    exact = all(isinstance(w, (int, Fraction)) for w in weights)
    if exact:
        if sum(weights) != 1:
            raise ValueError("weights must sum to 1")
        e = {
            (i, j): sum(w * int(t[i] * t[2 + j]) for w, t in zip(weights, tables))
            for i in (0, 1) for j in (0, 1)
        }
        return abs(e[0, 0] - e[0, 1]) + abs(e[1, 0] + e[1, 1])
    w = np.asarray(weights, dtype=float)
    if w.min() < 0 or not math.isclose(w.sum(), 1.0, rel_tol=0, abs_tol=1e-9):
        raise ValueError("weights must be a probability vector")
    e = {(i, j): float(w @ (tables[:, i] * tables[:, 2 + j])) for i in (0, 1) for j in (0, 1)}
    return abs(e[0, 0] - e[0, 1]) + abs(e[1, 0] + e[1, 1])


def baseline_ensembles(n_lambda: int, seed: int = 0, pairs=CORRELATION_PAIRS) -> dict:
    """lambda samples for the conventional model: one draw shared by every setting."""
    lam = np.random.default_rng(seed).integers(0, 16, size=n_lambda)
    return {p: lam for p in pairs}


def _counts(ensemble) -> dict:
    if isinstance(ensemble, Mapping):
        return dict(ensemble)
    arr = np.asarray(ensemble)
    if arr.ndim == 1 and arr.dtype.kind in "iub":
        values, counts = np.unique(arr, return_counts=True)
        return dict(zip(values.tolist(), counts.tolist()))
    return dict(Counter(map(lambda x: x if not isinstance(x, np.ndarray) else tuple(x), ensemble)))


def total_variation(p: Mapping, q: Mapping) -> Fraction:
    n_p, n_q = sum(p.values()), sum(q.values())
    if n_p <= 0 or n_q <= 0:
        raise ValueError("empty ensemble")
    diff = sum(abs(p.get(k, 0) * n_q - q.get(k, 0) * n_p) for k in set(p) | set(q))
    return Fraction(diff, 2 * n_p * n_q)


def mi_violation(ensembles: Mapping[str, object]) -> Fraction:
    """Largest total-variation distance between lambda-distributions of two settings.

    Each entry is either a sample of hashable lambdas or a ``{lambda: weight}``
    mapping.  0 means measurement independence holds on the data.
    """
    if len(ensembles) < 2:
        raise ValueError("need at least two setting pairs")
    counts = {k: _counts(v) for k, v in ensembles.items()}
    return max(total_variation(counts[x], counts[y]) for x, y in combinations(counts, 2))
