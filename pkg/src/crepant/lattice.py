"""Overlattice points, basic simplices and a search for crepant triangulations.

Points of ``N' = Z^n + Z * w/r`` are stored as integer vectors scaled by
``r``.  A simplicial cone is basic in ``N'`` exactly when the absolute
determinant of its scaled generators is ``r^(n-1)``: ``N'`` contains
``Z^n`` with index ``r``, so a basis of ``N'`` spans volume ``1/r``.

``search_triangulation`` looks for a face-to-face triangulation of the
junior simplex by basic simplices on age-1 points.  It is small-scale
and exhaustive, and serves as a geometric check on the algebraic criteria.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

__all__ = [
    "LatticePoint",
    "Simplex",
    "Triangulation",
    "NoWitnessFound",
    "SearchLimits",
    "det",
    "enumerate_group",
    "unit_vectors",
    "age_of_point",
    "is_primitive",
    "discrepancy",
    "junior_points",
    "is_basic",
    "point_in_overlattice",
    "search_triangulation",
    "validate_triangulation",
]


def det(rows: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    m = [list(row) for row in rows]
    size = len(m)
    if any(len(row) != size for row in m):
        raise ValueError("determinant needs a square matrix")
    sign, prev = 1, 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for s in range(k + 1, size):
                if m[s][k] != 0:
                    m[k], m[s] = m[s], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1] if size else 1


@dataclass(frozen=True, order=True)
class LatticePoint:
    scaled: Tuple[int, ...]
    r: int

    def __post_init__(self):
        object.__setattr__(self, "scaled", tuple(self.scaled))

    @property
    def n(self) -> int:
        return len(self.scaled)

    @property
    def age(self) -> Fraction:
        return Fraction(sum(self.scaled), self.r)

    def __str__(self):
        return "(" + ",".join(map(str, self.scaled)) + f")/{self.r}"


def point_in_overlattice(scaled: Sequence[int], r: int, weights: Sequence[int]) -> bool:
    """True iff ``scaled == k * weights (mod r)`` for some ``k`` in ``0..r-1``."""
    if len(scaled) != len(weights):
        raise ValueError("dimension mismatch")
    target = [x % r for x in scaled]
    return any(all(k * w % r == t for w, t in zip(weights, target)) for k in range(r))


def enumerate_group(r: int, weights: Sequence[int]) -> List[LatticePoint]:
    return [LatticePoint(tuple(k * w % r for w in weights), r) for k in range(r)]


def unit_vectors(r: int, n: int) -> List[LatticePoint]:
    return [LatticePoint(tuple(r if j == i else 0 for j in range(n)), r) for i in range(n)]


def age_of_point(p: LatticePoint) -> Fraction:
    return p.age


def is_primitive(p: LatticePoint, weights: Sequence[int]) -> bool:
    """No ``p/m`` with ``m >= 2`` lies in N'."""
    if not any(p.scaled):
        return False
    if not point_in_overlattice(p.scaled, p.r, weights):
        raise ValueError(f"{p} is not a point of N'")
    g = 0
    for x in p.scaled:
        g = _gcd(g, x)
    for m in range(2, g + 1):
        if g % m == 0 and point_in_overlattice([x // m for x in p.scaled], p.r, weights):
            return False
    return True


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def discrepancy(p: LatticePoint, weights: Sequence[int]) -> Fraction:
    if not is_primitive(p, weights):
        raise ValueError(f"{p} is not primitive in N'")
    return p.age - 1


def junior_points(r: int, weights: Sequence[int]) -> List[LatticePoint]:
    """Group elements of age exactly 1 (the unit vectors are not among them)."""
    return [p for p in enumerate_group(r, weights) if sum(p.scaled) == r]


@dataclass(frozen=True)
class Simplex:
    vertices: Tuple[LatticePoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.vertices) != self.vertices[0].n:
            raise ValueError("a simplex needs exactly n vertices")
        if self.determinant == 0:
            raise ValueError("degenerate simplex")

    @property
    def r(self) -> int:
        return self.vertices[0].r

    @property
    def determinant(self) -> int:
        return det([v.scaled for v in self.vertices])

    @property
    def volume(self) -> Fraction:
        """Volume in units of a basic simplex of N'."""
        n = self.vertices[0].n
        return Fraction(abs(self.determinant), self.r ** (n - 1))


def is_basic(s: Simplex) -> bool:
    n = s.vertices[0].n
    return abs(s.determinant) == s.r ** (n - 1)


@dataclass(frozen=True)
class Triangulation:
    simplices: Tuple[Simplex, ...]
    weights: Tuple[int, ...]
    r: int

    @property
    def volume(self) -> int:
        v = sum((s.volume for s in self.simplices), Fraction(0))
        return int(v) if v.denominator == 1 else v

    def to_dict(self) -> dict:
        return {
            "simplices": [[list(v.scaled) for v in s.vertices] for s in self.simplices],
            "volume": self.volume,
            "exhaustive": True,
        }

    @classmethod
    def from_dict(cls, data: dict, weights: Sequence[int], r: int) -> "Triangulation":
        simplices = tuple(Simplex(tuple(LatticePoint(tuple(v), r) for v in s))
                          for s in data["simplices"])
        return cls(simplices, tuple(weights), r)

    def __len__(self):
        return len(self.simplices)


@dataclass(frozen=True)
class NoWitnessFound:
    exhaustive: bool
    nodes: int = 0

    def to_dict(self) -> dict:
        return {"simplices": [], "volume": 0, "exhaustive": self.exhaustive}


@dataclass(frozen=True)
class SearchLimits:
    max_n: int = 4
    max_r: int = 12
    max_nodes: int = 2_000_000


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def _on_boundary(points: Sequence[Tuple[int, ...]]) -> bool:
    """All points share a zero coordinate, i.e. they span a cone in the boundary of the orthant."""
    n = len(points[0])
    return any(all(p[j] == 0 for p in points) for j in range(n))


def _cone_signs(cols: Sequence[Tuple[int, ...]], p: Sequence[int]) -> List[int]:
    """Signs of the barycentric (Cramer) coordinates of ``p``, relative to the cone's orientation."""
    d0 = det(cols)
    out = []
    for i in range(len(cols)):
        rep = list(cols)
        rep[i] = tuple(p)
        out.append(_sign(det(rep)) * _sign(d0))
    return out


def _generic_point(simplices: List[Tuple[Tuple[int, ...], ...]], n: int) -> Tuple[int, ...]:
    """An interior direction not lying on any facet hyperplane of the candidates."""
    rng = random.Random(20240607)
    for _ in range(1000):
        p = tuple(rng.randint(10_000, 1_000_000) for _ in range(n))
        if all(0 not in _cone_signs(s, p) for s in simplices):
            return p
    raise RuntimeError("could not find a generic point")


def search_triangulation(r: int, weights: Sequence[int],
                         limits: Optional[SearchLimits] = None
                         ) -> Union[Triangulation, NoWitnessFound]:
    """Backtracking search for a basic age-1 triangulation of the junior simplex.

    The first simplex is the one containing a fixed generic direction; after
    that every open interior facet must be closed by exactly one simplex on
    its far side.  Together with the volume bound this enumerates every
    face-to-face triangulation, so an unbounded run that finds nothing is a
    genuine refutation.
    """
    limits = limits or SearchLimits()
    weights = tuple(w % r for w in weights)
    n = len(weights)
    if n > limits.max_n or r > limits.max_r:
        raise ValueError(f"search limited to n <= {limits.max_n}, r <= {limits.max_r}; "
                         f"got n={n}, r={r}")

    points = unit_vectors(r, n) + sorted(junior_points(r, weights))
    coords = [p.scaled for p in points]
    target = r ** (n - 1)
    gen = tuple(w % r for w in weights)

    cands = []
    for idx in itertools.combinations(range(len(points)), n):
        dv = det([coords[i] for i in idx])
        if abs(dv) == target:
            cands.append(idx)
    cands.sort(key=lambda idx: (gen not in [coords[i] for i in idx], idx))

    # facet -> side sign of the apex, for each candidate
    sides: List[Dict[Tuple[int, ...], int]] = []
    by_facet: Dict[Tuple[int, ...], List[int]] = {}
    for ci, idx in enumerate(cands):
        s = {}
        for apex in idx:
            facet = tuple(i for i in idx if i != apex)
            s[facet] = _sign(det([coords[i] for i in facet] + [coords[apex]]))
            by_facet.setdefault(facet, []).append(ci)
        sides.append(s)
    boundary = {f: _on_boundary([coords[i] for i in f]) for f in by_facet}

    if not cands:
        return NoWitnessFound(exhaustive=True)

    p = _generic_point([tuple(coords[i] for i in idx) for idx in cands], n)
    starts = [ci for ci, idx in enumerate(cands)
              if all(s > 0 for s in _cone_signs([coords[i] for i in idx], p))]

    used: Dict[Tuple[int, ...], Tuple[int, int]] = {}  # facet -> (count, side sign)
    chosen: List[int] = []
    nodes = 0
    truncated = False

    def place(ci) -> bool:
        for facet, sgn in sides[ci].items():
            cnt, prev = used.get(facet, (0, 0))
            if cnt >= 2 or (cnt == 1 and (boundary[facet] or prev == sgn)):
                return False
        for facet, sgn in sides[ci].items():
            cnt, _ = used.get(facet, (0, 0))
            used[facet] = (cnt + 1, sgn)
        chosen.append(ci)
        return True

    def unplace(ci, saved):
        chosen.pop()
        for facet in sides[ci]:
            if saved[facet] is None:
                del used[facet]
            else:
                used[facet] = saved[facet]

    def open_facet():
        best = None
        for facet, (cnt, _) in used.items():
            if cnt == 1 and not boundary[facet]:
                # the most constrained facet first
                k = len(by_facet[facet])
                if best is None or (k, facet) < best[0]:
                    best = ((k, facet), facet)
        return None if best is None else best[1]

    def backtrack() -> bool:
        nonlocal nodes, truncated
        nodes += 1
        if nodes > limits.max_nodes:
            truncated = True
            return False
        if len(chosen) > r:
            return False
        facet = open_facet()
        if facet is None:
            return len(chosen) == r
        need = -used[facet][1]
        for ci in by_facet[facet]:
            if sides[ci][facet] != need or ci in chosen:
                continue
            saved = {f: used.get(f) for f in sides[ci]}
            if place(ci):
                if backtrack():
                    return True
                unplace(ci, saved)
            if truncated:
                return False
        return False

    for ci in starts:
        saved = {f: used.get(f) for f in sides[ci]}
        place(ci)
        if backtrack():
            tri = Triangulation(
                tuple(Simplex(tuple(points[i] for i in cands[c])) for c in chosen),
                weights, r)
            problems = validate_triangulation(tri)
            if problems:
                raise AssertionError(f"search produced an invalid witness: {problems}")
            return tri
        unplace(ci, saved)
        if truncated:
            break
    return NoWitnessFound(exhaustive=not truncated, nodes=nodes)


def validate_triangulation(tri: Triangulation, samples: int = 200) -> List[str]:
    """Re-check a witness from scratch; returns a list of problems (empty if valid).

    Checks basicness, age 1 of new vertices, membership in N', total volume,
    facet pairing with opposite orientation, and exact single coverage of
    random interior directions.
    """
    problems = []
    r, weights = tri.r, tri.weights
    n = len(weights)
    total = Fraction(0)
    facets: Dict[FrozenSet[Tuple[int, ...]], List[Tuple[Tuple[int, ...], Tuple[int, ...]]]] = {}
    for s in tri.simplices:
        verts = [v.scaled for v in s.vertices]
        d = det(verts)
        if abs(d) != r ** (n - 1):
            problems.append(f"simplex {verts} has |det| {abs(d)} != {r ** (n - 1)}")
        total += Fraction(abs(d), r ** (n - 1))
        for v in verts:
            is_unit = sorted(v) == [0] * (n - 1) + [r]
            if not is_unit:
                if sum(v) != r:
                    problems.append(f"vertex {v} does not have age 1")
                if not point_in_overlattice(v, r, weights):
                    problems.append(f"vertex {v} is not in N'")
        for k in range(n):
            facet = tuple(sorted(verts[:k] + verts[k + 1:]))
            facets.setdefault(frozenset(facet), []).append((facet, verts[k]))
    if total != r:
        problems.append(f"volumes sum to {total}, expected {r}")
    for key, uses in facets.items():
        facet = uses[0][0]
        on_boundary = _on_boundary(facet)
        if on_boundary and len(uses) != 1:
            problems.append(f"boundary facet {facet} used {len(uses)} times")
        elif not on_boundary:
            if len(uses) != 2:
                problems.append(f"interior facet {facet} used {len(uses)} times")
            else:
                s1 = _sign(det(list(facet) + [uses[0][1]]))
                s2 = _sign(det(list(facet) + [uses[1][1]]))
                if s1 == s2:
                    problems.append(f"simplices on facet {facet} overlap")
    rng = random.Random(7)
    cols = [[v.scaled for v in s.vertices] for s in tri.simplices]
    for _ in range(samples):
        p = [rng.randint(1, 10 ** 6) for _ in range(n)]
        signs = [_cone_signs(c, p) for c in cols]
        if any(0 in s for s in signs):
            continue
        hits = sum(all(x > 0 for x in s) for s in signs)
        if hits != 1:
            problems.append(f"direction {p} covered {hits} times")
            break
    return problems
