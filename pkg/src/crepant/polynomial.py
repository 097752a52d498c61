"""Expansion of the remainder polynomial into its finite term map.

The polynomial of ``a/r`` assigns to every word ``(i_1, ..., i_l)`` the
coefficient ``R_{i_l} ... R_{i_1}(a/r)``.  Words whose coefficient is
``INFINITY`` or the zero fraction ``(0,...,0)/1`` are dropped, together with
everything below them: ``R_i`` fixes ``INFINITY`` and maps the zero fraction
to itself, so no descendant could ever be kept.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from .fraction import ProperFraction

__all__ = [
    "Word",
    "Term",
    "RemainderPolynomial",
    "OutsideHypothesesWarning",
    "remainder_polynomial",
    "iterated_terms",
    "all_ages_one",
    "max_age_witness",
    "word_key",
    "format_word",
]

Word = Tuple[int, ...]


class OutsideHypothesesWarning(UserWarning):
    """The input is not semi-unimodular; no crepancy guarantee applies to its expansion."""


def word_key(word: Word):
    """Canonical order: shorter words first, then lexicographic."""
    return (len(word), word)


def format_word(word: Word) -> str:
    if not word:
        return "1"
    return ".".join(f"x{i}" for i in word)


def is_iterated(word: Word) -> bool:
    return len(set(word)) <= 1


@dataclass(frozen=True)
class Term:
    word: Word
    coefficient: ProperFraction

    @property
    def age(self) -> Fraction:
        return self.coefficient.age

    @property
    def is_iterated(self) -> bool:
        return is_iterated(self.word)

    def to_dict(self) -> dict:
        a = self.age
        return {
            "word": list(self.word),
            "coeff": self.coefficient.to_dict(),
            "age": {"num": a.numerator, "den": a.denominator},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Term":
        return cls(tuple(data["word"]), ProperFraction.from_dict(data["coeff"]))

    def __str__(self):
        return f"{format_word(self.word)} : {self.coefficient.display()} age={self.age}"


Key = Tuple[int, Tuple[int, ...]]


class RemainderPolynomial:
    """Word -> coefficient map of a remainder polynomial.

    The expansion is held as a DAG on distinct coefficients (a coefficient's
    subtree depends only on the coefficient), so age checks and iterated
    chains never touch the much larger set of words.  The full word map is
    materialized on first access, in canonical word order.
    """

    def __init__(self, source: ProperFraction, children: Dict[Key, Tuple[Tuple[int, Key], ...]],
                 within_hypotheses: bool = True):
        self.source = source
        self.within_hypotheses = within_hypotheses
        self._children = children
        self._nodes: Dict[Key, ProperFraction] = {}
        self._terms: Optional[Dict[Word, ProperFraction]] = None

    def _node(self, key: Key) -> ProperFraction:
        f = self._nodes.get(key)
        if f is None:
            f = self._nodes[key] = ProperFraction._unchecked(*key)
        return f

    @property
    def _root(self) -> Optional[Key]:
        return (self.source.r, self.source.a) if self._children else None

    @classmethod
    def from_terms(cls, source: ProperFraction, terms: Dict[Word, ProperFraction],
                   within_hypotheses: bool = True) -> "RemainderPolynomial":
        children: Dict[Key, list] = {}
        for w in sorted(terms, key=word_key):
            f = terms[w]
            children.setdefault((f.r, f.a), [])
            if w:
                g = terms[w[:-1]]
                edge = (w[-1], (f.r, f.a))
                if edge not in children[(g.r, g.a)]:
                    children[(g.r, g.a)].append(edge)
        return cls(source, {k: tuple(sorted(v)) for k, v in children.items()},
                   within_hypotheses)

    @property
    def terms(self) -> Dict[Word, ProperFraction]:
        if self._terms is None:
            out: Dict[Word, ProperFraction] = {}
            if self._children:
                stack = [((), self._root)]
                while stack:
                    word, key = stack.pop()
                    out[word] = self._node(key)
                    for i, k in self._children[key]:
                        stack.append((word + (i,), k))
            self._terms = {w: out[w] for w in sorted(out, key=word_key)}
        return dict(self._terms)

    def coefficients(self) -> List[ProperFraction]:
        """Distinct coefficients, in no particular order."""
        return [self._node(k) for k in self._children]

    def children(self, f: ProperFraction) -> List[Tuple[int, ProperFraction]]:
        return [(i, self._node(k)) for i, k in self._children.get((f.r, f.a), ())]

    def _graded(self) -> List[Key]:
        # denominators strictly decrease along every edge
        return sorted(self._children, key=lambda k: k[0])

    def __len__(self):
        counts: Dict[Key, int] = {}
        for k in self._graded():
            counts[k] = 1 + sum(counts[c] for _, c in self._children[k])
        return counts.get(self._root, 0)

    def __iter__(self) -> Iterator[Term]:
        for w, f in self.terms.items():
            yield Term(w, f)

    def __getitem__(self, word) -> ProperFraction:
        key = self._root
        for i in word:
            if key is None:
                break
            key = dict(self._children[key]).get(i)
        if key is None:
            raise KeyError(tuple(word))
        return self._node(key)

    def __contains__(self, word) -> bool:
        try:
            self[word]
        except KeyError:
            return False
        return True

    def __eq__(self, other):
        if not isinstance(other, RemainderPolynomial):
            return NotImplemented
        return self.source == other.source and self._children == other._children

    def max_length(self) -> int:
        depth: Dict[Key, int] = {}
        for k in self._graded():
            depth[k] = max((1 + depth[c] for _, c in self._children[k]), default=0)
        return depth.get(self._root, 0)

    def chain(self, i: int) -> List[Term]:
        """The iterated terms x_i, x_i x_i, ... (constant term excluded)."""
        out = []
        key = self._root
        word: Word = ()
        while key is not None:
            key = dict(self._children[key]).get(i)
            if key is not None:
                word += (i,)
                out.append(Term(word, self._node(key)))
        return out

    def to_dict(self) -> dict:
        return {
            "source": self.source.to_dict(),
            "terms": [t.to_dict() for t in self],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RemainderPolynomial":
        source = ProperFraction.from_dict(data["source"])
        terms = {}
        for item in data["terms"]:
            t = Term.from_dict(item)
            terms[t.word] = t.coefficient
        return cls.from_terms(source, terms, within_hypotheses=source.is_semi_unimodular)

    def to_text(self) -> str:
        return "\n".join(str(t) for t in self)

    def __repr__(self):
        return f"RemainderPolynomial({self.source!r}, {len(self)} terms)"


def remainder_polynomial(f: ProperFraction) -> RemainderPolynomial:
    """Expand every remainder-map composition of ``f`` that stays finite and nonzero."""
    within = f.is_semi_unimodular
    if not within and not f.is_zero:
        warnings.warn(
            f"{f} is not semi-unimodular; no crepancy guarantee applies",
            OutsideHypothesesWarning,
            stacklevel=2,
        )
    children: Dict[Key, Tuple[Tuple[int, Key], ...]] = {}
    if f.is_zero:
        return RemainderPolynomial(f, children, within)
    stack = [(f.r, f.a)]
    while stack:
        key = stack.pop()
        if key in children:
            continue
        r, a = key
        kids = []
        for i, m in enumerate(a):
            # m == 0 gives INFINITY and m == 1 the zero fraction: both excluded
            if m < 2:
                continue
            b = [x % m for x in a]
            b[i] = -r % m
            child = (m, tuple(b))
            kids.append((i + 1, child))
            if child not in children:
                stack.append(child)
        children[key] = tuple(kids)
    return RemainderPolynomial(f, children, within)


def iterated_terms(p: RemainderPolynomial) -> List[Term]:
    """Terms whose word repeats a single index; the constant term is included.

    Returned in canonical word order.
    """
    if not len(p.coefficients()):
        return []
    out = [Term((), p.source)]
    for i in range(1, p.source.n + 1):
        out.extend(p.chain(i))
    return sorted(out, key=lambda t: word_key(t.word))


def all_ages_one(p: RemainderPolynomial) -> bool:
    # age == 1 exactly when the numerators sum to the denominator
    return all(sum(a) == r for r, a in p._children)


def max_age_witness(p: RemainderPolynomial) -> Optional[Tuple[Fraction, Term]]:
    """A term of maximal age; ties go to the first word in canonical order."""
    coeffs = p.coefficients()
    if not coeffs:
        return None
    top = max(f.age for f in coeffs)
    # breadth-first in lexicographic order visits words in canonical order
    level = [((), p.source)]
    while level:
        for word, f in level:
            if f.age == top:
                return top, Term(word, f)
        level = [(w + (i,), g) for w, f in level for i, g in p.children(f)]
    raise AssertionError("maximum age not reached")
