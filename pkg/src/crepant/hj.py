"""Hirzebruch-Jung (minus-sign) continued fractions and the congruence test."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

__all__ = ["HJExpansion", "hj_expand", "hj_evaluate", "dlr_criterion", "first_entry"]


@dataclass(frozen=True)
class HJExpansion:
    """Entries of ``r/d = a_1 - 1/(a_2 - 1/(... - 1/a_s))``."""

    entries: Tuple[int, ...]
    r: Optional[int] = field(default=None, compare=False)
    d: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if not self.entries:
            raise ValueError("an HJ expansion has at least one entry")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, k):
        return self.entries[k]


def _check_pair(r: int, d: int):
    if not 0 < d < r:
        raise ValueError(f"need 0 < d < r, got r={r}, d={d}")


def hj_expand(r: int, d: int) -> HJExpansion:
    _check_pair(r, d)
    entries = []
    num, den = r, d
    while den:
        a = (num + den - 1) // den
        entries.append(a)
        num, den = den, a * den - num
    return HJExpansion(tuple(entries), r, d)


def hj_evaluate(e) -> Fraction:
    """Evaluate an expansion right to left; raises ZeroDivisionError if malformed."""
    entries = e.entries if isinstance(e, HJExpansion) else tuple(e)
    if not entries:
        raise ValueError("empty expansion")
    value = Fraction(entries[-1])
    for a in reversed(entries[:-1]):
        value = a - 1 / value
    return value


def dlr_criterion(e, n: int) -> bool:
    """True iff every entry is congruent to 2 modulo ``n - 2``."""
    if n < 3:
        raise ValueError(f"dimension must be at least 3, got {n}")
    m = n - 2
    return all((a - 2) % m == 0 for a in e)


def first_entry(r: int, d: int) -> int:
    """``-q`` for ``q`` the floor quotient of ``-r`` by ``d``; equals ceil(r/d)."""
    _check_pair(r, d)
    q = (-r) // d
    return -q
