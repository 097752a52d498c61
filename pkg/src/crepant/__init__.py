"""Exact tests for crepant resolutions of Gorenstein cyclic quotient singularities.

The main entry points are :func:`remainder_polynomial`, :func:`decide_two_parameter`
and :func:`cross_check`; the lattice oracle lives in :mod:`crepant.lattice`.
"""

from .criteria import (
    CaseTag,
    Decision,
    GeneralTwoParameter,
    TwoParameterType,
    Verdict,
    case1_verdict,
    case2_verdict,
    classify,
    cross_check,
    decide_case,
    decide_fast,
    decide_general,
    decide_normalized,
    decide_two_parameter,
    r2_chain,
)
from .fraction import INFINITY, ProperFraction, parse_fraction, remainder_map
from .hj import HJExpansion, dlr_criterion, first_entry, hj_evaluate, hj_expand
from .polynomial import (
    RemainderPolynomial,
    Term,
    all_ages_one,
    iterated_terms,
    max_age_witness,
    remainder_polynomial,
)

__version__ = "0.1.0"
