"""n-dimensional proper fractions and the remainder maps acting on them.

A proper fraction ``a/r`` is the pair of a denominator ``r >= 1`` and an
integer vector ``a`` with ``0 <= a_i < r``.  It is *not* a rational vector:
``(2,2)/4`` and ``(1,1)/2`` are different objects because they stand for
different group types.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Union

__all__ = [
    "ProperFraction",
    "INFINITY",
    "MaybeFraction",
    "new_proper_fraction",
    "age",
    "is_semi_unimodular",
    "remainder_map",
    "parse_fraction",
]


class _Infinity:
    """The value of a remainder map taken along a zero component."""

    _instance = None
    __slots__ = ()

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "∞"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


class ProperFraction:
    __slots__ = ("r", "a")

    def __init__(self, r: int, a: Iterable[int]):
        a = tuple(a)
        if isinstance(r, bool) or not isinstance(r, int):
            raise TypeError(f"denominator must be an int, got {r!r}")
        if r < 1:
            raise ValueError(f"denominator must be positive, got {r}")
        if not a:
            raise ValueError("a proper fraction needs at least one numerator")
        if not all(type(x) is int for x in a):
            raise TypeError(f"numerators must be ints, got {a!r}")
        if min(a) < 0 or max(a) >= r:
            raise ValueError(f"numerators {a} not all in [0, {r})")
        self.r = r
        self.a = a

    @classmethod
    def _unchecked(cls, r: int, a: tuple) -> "ProperFraction":
        obj = object.__new__(cls)
        obj.r = r
        obj.a = a
        return obj

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def age(self) -> Fraction:
        return Fraction(sum(self.a), self.r)

    @property
    def is_semi_unimodular(self) -> bool:
        return 1 in self.a

    @property
    def is_zero(self) -> bool:
        """True for the excluded coefficient ``(0,...,0)/1``."""
        return self.r == 1

    def remainder(self, i: int) -> "MaybeFraction":
        """Apply the i-th remainder map (1-based index).

        Every numerator is reduced modulo ``a_i``; slot ``i`` receives
        ``(-r) mod a_i``.  A zero component gives ``INFINITY``.
        """
        if not 1 <= i <= len(self.a):
            raise IndexError(f"index {i} out of range 1..{len(self.a)}")
        m = self.a[i - 1]
        if m == 0:
            return INFINITY
        # Python's % already returns the representative in [0, m)
        b = list(map(m.__rmod__, self.a))
        b[i - 1] = -self.r % m
        return ProperFraction._unchecked(m, tuple(b))

    def to_dict(self) -> dict:
        return {"r": self.r, "a": list(self.a)}

    @classmethod
    def from_dict(cls, data: dict) -> "ProperFraction":
        return cls(data["r"], data["a"])

    def display(self) -> str:
        """Format as ``(a1,...,an)/r``."""
        return "(" + ",".join(map(str, self.a)) + f")/{self.r}"

    def __str__(self):
        return f"{self.r}:" + ",".join(map(str, self.a))

    def __repr__(self):
        return f"ProperFraction({self.r}; {', '.join(map(str, self.a))})"

    def __eq__(self, other):
        if not isinstance(other, ProperFraction):
            return NotImplemented
        return self.r == other.r and self.a == other.a

    def __hash__(self):
        return hash((self.r, self.a))

    def __reduce__(self):
        return (ProperFraction, (self.r, self.a))


MaybeFraction = Union[ProperFraction, _Infinity]


def new_proper_fraction(r: int, a: Iterable[int]) -> ProperFraction:
    return ProperFraction(r, a)


def age(f: ProperFraction) -> Fraction:
    return f.age


def is_semi_unimodular(f: ProperFraction) -> bool:
    return f.is_semi_unimodular


def remainder_map(f: MaybeFraction, i: int) -> MaybeFraction:
    if f is INFINITY:
        return INFINITY
    return f.remainder(i)


_TYPE_RE = re.compile(r"^(\d+):(\d+(?:,\d+)*)$")


def parse_fraction(text: str) -> ProperFraction:
    """Parse the canonical text form ``"r:a1,a2,...,an"``.

    Whitespace anywhere is ignored; anything else that does not fit the
    pattern raises ``ValueError``.
    """
    compact = re.sub(r"\s+", "", text)
    m = _TYPE_RE.match(compact)
    if m is None:
        raise ValueError(f"cannot parse type string {text!r}; expected 'r:a1,...,an'")
    r = int(m.group(1))
    a = [int(x) for x in m.group(2).split(",")]
    return ProperFraction(r, a)
