"""Crepancy decisions for Gorenstein cyclic quotient types.

Three independent routes are provided for the family ``1/r(1,d,c,...,c)``:

* the full remainder polynomial (all coefficient ages equal to 1),
* the ``R_2`` chain alone (only the iterated ``x_2`` terms are inspected),
* the Hirzebruch-Jung expansion of ``r/d`` (entries congruent to 2 mod n-2).

``cross_check`` runs all three and reports whether they agree.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from math import gcd
from typing import List, Optional, Tuple, Union

from .fraction import ProperFraction
from .hj import HJExpansion, dlr_criterion, hj_expand
from .lattice import point_in_overlattice
from .polynomial import (
    RemainderPolynomial,
    Term,
    all_ages_one,
    iterated_terms,
    remainder_polynomial,
)

__all__ = [
    "Decision",
    "Verdict",
    "TwoParameterType",
    "GeneralTwoParameter",
    "CaseTag",
    "ChainStep",
    "CrossCheck",
    "NormalizedDecision",
    "classify",
    "case1_verdict",
    "case2_verdict",
    "standard_form",
    "decide_case",
    "decide_general",
    "decide_normalized",
    "decide_two_parameter",
    "r2_chain",
    "decide_fast",
    "cross_check",
]


class Decision(str, enum.Enum):
    CREPANT = "Crepant"
    NOT_CREPANT = "NotCrepant"
    INDETERMINATE = "Indeterminate"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    """A decision with its witness.

    ``witness`` holds the age-1 coefficients behind a Crepant decision,
    either as terms or as the whole remainder polynomial (expanded lazily).
    ``offending`` is the iterated term of age >= 2 behind NotCrepant.
    """

    decision: Decision
    offending: Optional[Term] = None
    reason: str = ""
    witness: Union[Tuple[Term, ...], RemainderPolynomial] = ()

    @property
    def crepant(self) -> bool:
        return self.decision is Decision.CREPANT

    @property
    def coefficients(self) -> Tuple[Term, ...]:
        return tuple(self.witness)

    @property
    def n_coefficients(self) -> int:
        return len(self.witness)

    def to_dict(self) -> dict:
        return {
            "decision": self.decision.value,
            "coefficients": [t.to_dict() for t in self.coefficients],
            "offending": None if self.offending is None else self.offending.to_dict(),
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Verdict":
        off = data.get("offending")
        return cls(
            Decision(data["decision"]),
            None if off is None else Term.from_dict(off),
            data.get("reason", ""),
            tuple(Term.from_dict(t) for t in data.get("coefficients", [])),
        )


@dataclass(frozen=True)
class TwoParameterType:
    """The type ``1/r(1, d, c, ..., c)`` with ``n - 2`` copies of ``c``."""

    n: int
    r: int
    d: int
    c: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"two-parameter types need n >= 3, got {self.n}")
        if not (0 <= self.d < self.r and 0 <= self.c < self.r):
            raise ValueError(f"weights out of range for r={self.r}: d={self.d}, c={self.c}")
        if 1 + self.d + (self.n - 2) * self.c != self.r:
            raise ValueError(
                f"Gorenstein relation fails: 1 + {self.d} + {self.n - 2}*{self.c} != {self.r}")
        if self.r < 2:
            raise ValueError("r must be at least 2")

    @property
    def fraction(self) -> ProperFraction:
        return ProperFraction(self.r, (1, self.d) + (self.c,) * (self.n - 2))

    @classmethod
    def from_fraction(cls, f: ProperFraction) -> Optional["TwoParameterType"]:
        """Read off ``(n, r, d, c)`` when ``f`` already has the standard shape."""
        a = f.a
        if len(a) < 3 or a[0] != 1 or len(set(a[2:])) != 1 or sum(a) != f.r:
            return None
        return cls(len(a), f.r, a[1], a[2])

    def __str__(self):
        return str(self.fraction)


@dataclass(frozen=True)
class GeneralTwoParameter:
    """The type ``1/r(a, b, 1, ..., 1)`` with ``r = a + b + (n - 2)``."""

    n: int
    r: int
    a: int
    b: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"need n >= 3, got {self.n}")
        if not (1 <= self.a < self.r and 1 <= self.b < self.r):
            raise ValueError(f"weights out of range for r={self.r}: a={self.a}, b={self.b}")
        if self.a + self.b + self.n - 2 != self.r:
            raise ValueError(f"r must equal a + b + (n - 2), got {self.r}")

    @property
    def weights(self) -> Tuple[int, ...]:
        return (self.a, self.b) + (1,) * (self.n - 2)


@dataclass(frozen=True)
class CaseTag:
    case: int
    d: int = 1
    d1: int = 1
    d2: int = 1


def classify(g: GeneralTwoParameter) -> CaseTag:
    """Case 1: GCD(r,a,b) > 1.  Case 3: a or b is a unit mod r.  Case 2: neither.

    Case 2 requires *both* GCD(r,a) > 1 and GCD(r,b) > 1.  With only one of
    them above 1 a weight is a unit and the type belongs to case 3; the
    junior-point test is not valid there (1/9(3,4,1,1) has the point
    (0,3,3,3)/9 yet admits no crepant triangulation).
    """
    d = gcd(g.r, g.a, g.b)
    d1, d2 = gcd(g.r, g.a), gcd(g.r, g.b)
    if d > 1:
        return CaseTag(1, d=d, d1=d1, d2=d2)
    if d1 > 1 and d2 > 1:
        return CaseTag(2, d1=d1, d2=d2)
    return CaseTag(3, d1=d1, d2=d2)


def case1_verdict(g: GeneralTwoParameter) -> Verdict:
    tag = classify(g)
    if tag.case != 1:
        raise ValueError(f"{g} is case {tag.case}, not case 1")
    return Verdict(Decision.CREPANT,
                   reason=f"GCD(r,a,b) = {tag.d} > 1; crepant by Davis-Logvinenko-Reid")


def case2_verdict(g: GeneralTwoParameter) -> Verdict:
    """Crepant iff ``(0,k_1,r_1,...,r_1)/r`` and ``(k_2,0,r_2,...,r_2)/r`` are junior points of N'.

    Here ``r = r_i d_i`` and ``r = k_i + r_i (n - 2)``.
    """
    tag = classify(g)
    if tag.case != 2:
        raise ValueError(f"{g} is case {tag.case}, not case 2")
    n, r = g.n, g.r
    checked = []
    for i, di in ((1, tag.d1), (2, tag.d2)):
        ri = r // di
        ki = r - ri * (n - 2)
        point = (0, ki) if i == 1 else (ki, 0)
        point = point + (ri,) * (n - 2)
        ok = ki >= 0 and point_in_overlattice(point, r, g.weights)
        checked.append(f"d_{i}={di}: point {point}/{r} {'present' if ok else 'missing'}")
        if not ok:
            return Verdict(Decision.NOT_CREPANT,
                           reason=f"required junior point {point}/{r} is not in N' (k_{i}={ki})")
    return Verdict(Decision.CREPANT, reason="; ".join(checked))


def standard_form(g: GeneralTwoParameter) -> Optional[TwoParameterType]:
    """Rewrite a case-3 type as ``1/r(1,d,c,...,c)`` if some generator allows it.

    Tries every generator ``k*w`` with ``k`` a unit mod ``r`` and every
    coordinate order; returns ``None`` when no junior generator of that
    shape exists.
    """
    n, r = g.n, g.r
    for k in range(1, r):
        if gcd(k, r) != 1:
            continue
        w = [k * x % r for x in g.weights]
        if 1 not in w or sum(w) != r:
            continue
        rest = list(w)
        rest.remove(1)
        for c in sorted(set(rest)):
            if rest.count(c) >= n - 2:
                others = list(rest)
                for _ in range(n - 2):
                    others.remove(c)
                return TwoParameterType(n, r, others[0], c)
    return None


def decide_case(g: GeneralTwoParameter) -> Verdict:
    """Dispatch on the case of ``1/r(a,b,1,...,1)``."""
    tag = classify(g)
    if tag.case == 1:
        return case1_verdict(g)
    if tag.case == 2:
        return case2_verdict(g)
    t = standard_form(g)
    if t is not None:
        return decide_two_parameter(t)
    # the general test is sound for every junior generator and unit rotation
    for k in range(1, g.r):
        if gcd(k, g.r) != 1:
            continue
        w = tuple(k * x % g.r for x in g.weights)
        if sum(w) != g.r:
            continue
        for _, f in _rotations(ProperFraction(g.r, w)):
            v = decide_general(f)
            if v.decision is not Decision.INDETERMINATE:
                return replace(v, reason=f"remainder test on the generator {f}")
    return Verdict(Decision.INDETERMINATE,
                   reason="no generator has shape (1,d,c,...,c) and the general test is inconclusive")


def _offending(terms: List[Term]) -> Optional[Term]:
    bad = [t for t in terms if t.age >= 2]
    if not bad:
        return None
    return min(bad, key=lambda t: (len(t.word), t.word))


def decide_general(f: ProperFraction) -> Verdict:
    """Apply the sufficient test (all ages 1) and the necessary test (iterated age >= 2)."""
    if not f.is_semi_unimodular:
        raise ValueError(f"{f} is not semi-unimodular")
    if f.a[0] != 1:
        raise ValueError(f"{f}: the unit weight must sit in position 1")
    if sum(f.a) != f.r:
        raise ValueError(f"{f} is not Gorenstein (numerators sum to {sum(f.a)}, not {f.r})")
    p = remainder_polynomial(f)
    if all_ages_one(p):
        return Verdict(Decision.CREPANT, witness=p)
    bad = _offending(iterated_terms(p))
    if bad is not None:
        return Verdict(Decision.NOT_CREPANT, offending=bad)
    return Verdict(Decision.INDETERMINATE,
                   reason="some mixed term has age != 1 but every iterated term has age 1")


@dataclass(frozen=True)
class NormalizedDecision:
    verdict: Verdict
    fraction: ProperFraction
    permutation: Tuple[int, ...]
    two_parameter: Optional[TwoParameterType] = None


def _rotations(f: ProperFraction):
    for j, x in enumerate(f.a):
        if x == 1:
            perm = (j,) + tuple(k for k in range(f.n) if k != j)
            yield perm, ProperFraction(f.r, tuple(f.a[k] for k in perm))


def decide_normalized(f: ProperFraction) -> NormalizedDecision:
    """Move a unit weight to position 1, then decide.

    A rotation that exposes the two-parameter shape is preferred.  Inputs
    outside the hypotheses (no unit weight, numerators not summing to r)
    yield ``Indeterminate`` instead of raising.  ``permutation`` lists the
    original 0-based coordinate for each new position.
    """
    identity = tuple(range(f.n))
    rotations = list(_rotations(f))
    if not rotations:
        return NormalizedDecision(
            Verdict(Decision.INDETERMINATE, reason="not semi-unimodular: no weight equals 1"),
            f, identity)
    if sum(f.a) != f.r:
        perm, g = rotations[0]
        return NormalizedDecision(
            Verdict(Decision.INDETERMINATE,
                    reason=f"not Gorenstein: numerators sum to {sum(f.a)}, not {f.r}"),
            g, perm)
    for perm, g in rotations:
        t = TwoParameterType.from_fraction(g) if g.n >= 3 else None
        if t is not None:
            return NormalizedDecision(decide_two_parameter(t), g, perm, t)
    perm, g = rotations[0]
    return NormalizedDecision(decide_general(g), g, perm)


def decide_two_parameter(t: TwoParameterType) -> Verdict:
    return decide_general(t.fraction)


@dataclass(frozen=True)
class ChainStep:
    """One application of ``R_2`` to ``(r; 1, d, c, ..., c)``."""

    n: int
    r: int
    d: int
    c: int
    image: ProperFraction
    q: int

    @property
    def ok(self) -> bool:
        return self.image.age == 1


def r2_chain(t: TwoParameterType) -> List[ChainStep]:
    """Follow the iterated ``x_2`` terms, stopping after the first age failure."""
    steps = []
    n, r, d, c = t.n, t.r, t.d, t.c
    while d >= 2:
        d2, c2 = (-r) % d, c % d
        image = ProperFraction(d, (1, d2) + (c2,) * (n - 2))
        step = ChainStep(n, r, d, c, image, (-r) // d)
        steps.append(step)
        if not step.ok:
            break
        r, d, c = d, d2, c2
    return steps


def decide_fast(t: TwoParameterType) -> Verdict:
    steps = r2_chain(t)
    if steps and not steps[-1].ok:
        last = steps[-1]
        return Verdict(Decision.NOT_CREPANT, offending=Term((2,) * len(steps), last.image))
    return Verdict(Decision.CREPANT,
                   reason="every iterated x2 coefficient has age 1",
                   witness=tuple(Term((2,) * (k + 1), s.image) for k, s in enumerate(steps)))


@dataclass(frozen=True)
class CrossCheck:
    t: TwoParameterType
    poly: Verdict
    fast: Verdict
    hj: Optional[HJExpansion] = None
    dlr: Optional[bool] = None
    skipped: Optional[str] = None
    agree: bool = field(default=True)

    @property
    def skip(self) -> bool:
        return self.skipped is not None


def cross_check(t: TwoParameterType) -> CrossCheck:
    """Run the polynomial, fast and HJ routes; never resolves a disagreement."""
    poly = decide_two_parameter(t)
    fast = decide_fast(t)
    agree = poly.decision == fast.decision and poly.decision is not Decision.INDETERMINATE
    if t.d < 1 or gcd(t.r, t.d) != 1:
        reason = "d = 0" if t.d < 1 else f"GCD(r, d) = {gcd(t.r, t.d)} > 1"
        return CrossCheck(t, poly, fast, skipped=reason, agree=agree)
    e = hj_expand(t.r, t.d)
    dlr = dlr_criterion(e, t.n)
    agree = agree and dlr == poly.crepant
    return CrossCheck(t, poly, fast, e, dlr, agree=agree)
