"""Acceptance suite: one recorded pass/fail line per criterion."""

import subprocess
import sys
import time
from fractions import Fraction
from functools import lru_cache
from math import gcd

import pytest

from crepant.criteria import (
    Decision,
    TwoParameterType,
    cross_check,
    decide_fast,
    decide_general,
    decide_two_parameter,
    r2_chain,
)
from crepant.fraction import ProperFraction, parse_fraction, remainder_map
from crepant.hj import first_entry, hj_evaluate, hj_expand
from crepant.lattice import (
    NoWitnessFound,
    SearchLimits,
    Triangulation,
    search_triangulation,
    validate_triangulation,
)
from crepant.polynomial import all_ages_one, iterated_terms, remainder_polynomial

PF = ProperFraction


@lru_cache(maxsize=None)
def compositions(total, parts):
    """All tuples of ``parts`` non-negative ints summing to ``total``."""
    if parts == 1:
        return ((total,),)
    return tuple((h,) + tail for h in range(total + 1)
                 for tail in compositions(total - h, parts - 1))


def two_parameter_types(n, rmax):
    for r in range(2, rmax + 1):
        for c in range((r - 1) // (n - 2) + 1):
            d = r - 1 - (n - 2) * c
            if c < r and d < r:
                yield TwoParameterType(n, r, d, c)


def test_golden_remainder_maps(acceptance):
    f = PF(8, [1, 2, 5, 7])
    ok = (remainder_map(f, 2) == PF(2, [1, 0, 1, 1])
          and remainder_map(f, 3) == PF(5, [1, 2, 2, 2]))
    acceptance("1 golden remainder maps of 8:1,2,5,7", ok)
    assert ok


def test_golden_polynomial(acceptance):
    expected = {
        (): PF(15, [1, 2, 6, 6]),
        (2,): PF(2, [1, 1, 0, 0]),
        (3,): PF(6, [1, 2, 3, 0]),
        (4,): PF(6, [1, 2, 0, 3]),
        (3, 2): PF(2, [1, 0, 1, 0]),
        (3, 3): PF(3, [1, 2, 0, 0]),
        (4, 2): PF(2, [1, 0, 0, 1]),
        (4, 4): PF(3, [1, 2, 0, 0]),
        (3, 3, 2): PF(2, [1, 1, 0, 0]),
        (4, 4, 2): PF(2, [1, 1, 0, 0]),
    }
    iterated = [(), (2,), (3,), (4,), (3, 3), (4, 4)]
    p = remainder_polynomial(PF(15, [1, 2, 6, 6]))
    its = iterated_terms(p)
    ok = (p.terms == expected
          and [t.word for t in its] == iterated
          and all(t.coefficient == expected[t.word] for t in its))
    acceptance("2 golden polynomial of 15:1,2,6,6", ok, f"{len(p)} terms, {len(its)} iterated")
    assert ok


def test_integer_age_sweep(acceptance):
    t0 = time.perf_counter()
    checked = bad = 0
    for n in (3, 4, 5):
        for r in range(2, 61):
            for rest in compositions(r - 1, n - 1):
                f = PF(r, (1,) + rest)
                for i, x in enumerate(f.a, 1):
                    if x:
                        g = f.remainder(i)
                        checked += 1
                        # integer age <=> numerators sum to a multiple of r
                        if sum(g.a) % g.r:
                            bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 10
    acceptance("3 integer ages under remainder maps", ok,
               f"{checked} maps, {bad} exceptions, {elapsed:.1f}s")
    assert bad == 0
    assert elapsed < 10


def test_three_dimensional_sweep(acceptance):
    t0 = time.perf_counter()
    failures = []
    count = 0
    for r in range(3, 201):
        for a in range(1, r - 1):
            b = r - 1 - a
            count += 1
            if decide_general(PF(r, [1, a, b])).decision is not Decision.CREPANT:
                failures.append((r, a, b))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 30
    acceptance("4 all 3-dimensional Gorenstein types crepant", ok,
               f"{count} types, {len(failures)} exceptions, {elapsed:.1f}s")
    assert not failures
    assert elapsed < 30


@pytest.fixture(scope="module")
def equivalence_sweep():
    t0 = time.perf_counter()
    rows = []
    for n in (4, 5, 6):
        for t in two_parameter_types(n, 300):
            if t.d >= 1 and gcd(t.r, t.d) == 1:
                rows.append((t, cross_check(t), r2_chain(t)))
    return rows, time.perf_counter() - t0


@pytest.mark.slow
def test_equivalence_sweep(acceptance, equivalence_sweep):
    rows, elapsed = equivalence_sweep
    bad = []
    for t, chk, _ in rows:
        p = remainder_polynomial(t.fraction)
        poly = all_ages_one(p)
        fast = decide_fast(t).crepant
        if not (chk.agree and poly == chk.dlr == fast):
            bad.append(t)
    ok = not bad and elapsed < 120
    acceptance("5 age criterion, HJ congruence and fast path agree", ok,
               f"{len(rows)} types, {len(bad)} disagreements, {elapsed:.1f}s")
    assert not bad
    assert elapsed < 120


def test_hj_round_trip(acceptance):
    t0 = time.perf_counter()
    bad = []
    for r in range(2, 501):
        for d in range(1, r):
            e = hj_expand(r, d)
            if hj_evaluate(e) != Fraction(r, d) or first_entry(r, d) != e.entries[0]:
                bad.append((r, d))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 30
    acceptance("6 HJ round trip and first entry", ok,
               f"{len(bad)} exceptions, {elapsed:.1f}s")
    assert not bad
    assert elapsed < 30


@pytest.mark.slow
def test_chain_identity(acceptance, equivalence_sweep):
    rows, _ = equivalence_sweep
    steps = bad = 0
    for _, _, chain in rows:
        for s in chain:
            if s.ok:
                steps += 1
                if (s.c - s.c % s.d) * (s.n - 2) + 2 * s.d != -s.d * s.q:
                    bad += 1
    acceptance("7 integer identity on successful fast-path steps", bad == 0,
               f"{steps} steps, {bad} exceptions")
    assert bad == 0


@pytest.mark.slow
def test_lattice_oracle(acceptance):
    t0 = time.perf_counter()
    bad = []
    seen = 0
    r7 = None
    for t in two_parameter_types(4, 11):
        v = decide_two_parameter(t)
        res = search_triangulation(t.r, t.fraction.a)
        seen += 1
        if v.decision is Decision.CREPANT:
            good = (isinstance(res, Triangulation) and res.volume == t.r
                    and not validate_triangulation(res))
            if t.r == 7 and good:
                r7 = len(res)
                good = r7 == 7
        else:
            good = isinstance(res, NoWitnessFound) and res.exhaustive
        if not good:
            bad.append(t)
    elapsed = time.perf_counter() - t0
    ok = not bad and r7 == 7 and elapsed < 300
    acceptance("8 triangulation oracle matches verdicts for n=4, r<=11", ok,
               f"{seen} types, {len(bad)} mismatches, r=7 witness has {r7} simplices, "
               f"{elapsed:.1f}s")
    assert not bad
    assert r7 == 7
    assert elapsed < 300


@pytest.mark.parametrize("text, crepant, witness", [
    ("15:1,2,6,6", True, None),
    ("9:1,2,3,3", False, ((2,), PF(2, [1, 1, 1, 1]))),
    ("7:1,4,1,1", True, None),
])
def test_specific_verdicts(acceptance, text, crepant, witness):
    t = TwoParameterType.from_fraction(parse_fraction(text))
    chk = cross_check(t)
    res = search_triangulation(t.r, t.fraction.a, SearchLimits(max_r=t.r))
    found = isinstance(res, Triangulation) and not validate_triangulation(res)
    ok = (chk.agree and chk.dlr is crepant and chk.poly.crepant is crepant
          and chk.fast.crepant is crepant and found is crepant)
    if witness is not None:
        o = chk.poly.offending
        ok = ok and o is not None and (o.word, o.coefficient) == witness
    acceptance(f"9 verdict for {text}", ok, chk.poly.decision.value)
    assert ok


def test_scan_is_deterministic(acceptance):
    cmd = [sys.executable, "-m", "crepant", "scan", "--dim", "4", "--rmax", "100", "--json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    ok = first == second and len(first) > 0
    acceptance("10 scan output is byte-identical across runs", ok,
               f"{len(first)} bytes")
    assert ok
