from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from wildcount.counts import (BRANCHES, CountResult, QueryParams, b_exponent, printed_closed_form,
                              cyclotomic_factor_degrees, dispatch, divisor_sum_specialization,
                              region, main_sum_count, main_sum_terms, unramified_p2_count)
from wildcount.errors import BranchError, ConsistencyError, ParameterError


def Q(p, fb, f, n, e=None):
    return QueryParams(p, n if e is None else e, fb, n, f)


def test_params_validation():
    with pytest.raises(ParameterError):
        QueryParams(4, 1, 1, 1, 1)
    with pytest.raises(ParameterError):
        QueryParams(3, 0, 1, 1, 1)
    with pytest.raises(ParameterError):
        QueryParams(3, 1, 1, True, 1)


def test_b_exponent_examples():
    assert (b_exponent(2, 3), b_exponent(1, 5), b_exponent(4, 3)) == (1, 0, 2)


def test_main_sum_examples():
    assert main_sum_count(Q(3, 1, 1, 2)).value == 10
    assert main_sum_count(Q(5, 1, 1, 2)).value == 26
    assert main_sum_count(Q(3, 1, 2, 2)).value == 40
    assert main_sum_count(Q(2, 1, 1, 3)).value == 5
    scale, terms = main_sum_terms(Q(3, 1, 2, 2))
    assert scale == 27
    assert sorted(terms.values()) == [Fraction(1, 27), Fraction(1, 9), Fraction(1, 3), 1]


def test_main_sum_annotations():
    res = main_sum_count(Q(3, 1, 2, 2))
    assert res.details["full_term"] == 1 and res.details["proper_count"] == 39
    assert "includes-full-subgroup-term" in res.flags
    assert main_sum_count(Q(3, 1, 1, 3)).status == "zero"
    with pytest.raises(BranchError):
        main_sum_count(Q(3, 1, 1, 3, e=2))


def test_main_sum_level_one():
    # b = 0: every term is |h ∩ t| / |h|
    assert main_sum_count(Q(3, 1, 1, 1)).value == 3 * (1 + Fraction(1, 3))


def test_cyclotomic_examples():
    z = cyclotomic_factor_degrees(2, 3)
    assert z.factors == ((1, 1), (2, 1)) and z.a == (1, 0, 1)
    z = cyclotomic_factor_degrees(3, 2)
    assert z.a == (1, 1)
    z = cyclotomic_factor_degrees(7, 1)
    assert z.a == (1,) and z.d == 0
    z = cyclotomic_factor_degrees(2, 4)   # (x - 1)^4
    assert z.unipotent_mult == 4 and z.m_factors == () and z.a == (1,)
    z = cyclotomic_factor_degrees(3, 6)   # (x - 1)^3 (x + 1)^3
    assert z.factors == ((1, 3), (1, 3)) and z.a == (1, 1, 1, 1)
    with pytest.raises(ParameterError):
        cyclotomic_factor_degrees(2, 65)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3, 5, 7, 11]), st.integers(1, 64))
def test_zeta_invariants(p, f):
    z = cyclotomic_factor_degrees(p, f)
    assert sum(d * m for d, m in z.factors) == f
    assert z.a[0] == 1
    total = 1
    for _, m in z.m_factors:
        total *= m + 1
    assert sum(z.a) == total
    assert z.d == f - z.unipotent_mult


@pytest.mark.filterwarnings("ignore::DeprecationWarning")
def test_cyclotomic_degrees_match_factorization():
    sympy = pytest.importorskip("sympy")
    x = sympy.symbols("x")
    for p, f in product((2, 3, 5), range(1, 13)):
        _, facs = sympy.factor_list(x ** f - 1, modulus=p)
        got = sorted((sympy.degree(g, x), m) for g, m in facs)
        assert got == sorted(cyclotomic_factor_degrees(p, f).factors)


def test_printed_form_examples():
    assert printed_closed_form(Q(3, 1, 1, 2)).value == 3
    assert printed_closed_form(Q(3, 1, 2, 2)).value == 12
    r = printed_closed_form(Q(2, 1, 3, 3))
    assert r.details["zeta"] == "5/4"
    with pytest.raises(BranchError):
        printed_closed_form(Q(3, 1, 1, 1))   # divides by p^0 - 1
    with pytest.raises(BranchError):
        printed_closed_form(Q(3, 2, 1, 2))


def test_divisor_sum_examples():
    assert divisor_sum_specialization(Q(3, 1, 1, 2)).value == 10
    assert divisor_sum_specialization(Q(3, 1, 2, 2)).value == 40
    assert divisor_sum_specialization(Q(2, 1, 3, 3)).value == main_sum_count(Q(2, 1, 3, 3)).value
    with pytest.raises(BranchError):
        divisor_sum_specialization(Q(3, 1, 1, 3))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_divisor_sum_equals_main_sum(p):
    for f, n in product(range(1, 7), range(1, 5)):
        if n % p:
            q = Q(p, 1, f, n)
            assert divisor_sum_specialization(q).value == main_sum_count(q).value


def test_unramified_p2_examples():
    assert unramified_p2_count(1).value == 4
    assert unramified_p2_count(2).value == 8
    assert {unramified_p2_count(QueryParams(2, 1, 2, 2, f)).value for f in range(1, 6)} == {8}
    with pytest.raises(BranchError):
        unramified_p2_count(QueryParams(2, 1, 1, 3, 1))


def test_dispatch_examples():
    r = dispatch(QueryParams(3, 3, 1, 3, 1))
    assert (r.status, r.value, r.branch) == ("zero", 0, "p-divides-n")
    r = dispatch(QueryParams(5, 1, 1, 2, 1))
    assert (r.status, r.branch) == ("zero", "small-e-zero")
    r = dispatch(QueryParams(3, 2, 1, 3, 1))
    assert (r.status, r.value) == ("out_of_range", None)
    assert dispatch(QueryParams(2, 1, 2, 2, 5)).value == 8
    assert dispatch(QueryParams(3, 2, 1, 2, 1)).value == 10


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([2, 3, 5, 7, 11]), st.integers(1, 8), st.integers(1, 3),
       st.integers(1, 9), st.integers(1, 3))
def test_dispatch_totality(p, e, fb, n, f):
    params = QueryParams(p, e, fb, n, f)
    branch = region(params)
    assert branch in BRANCHES
    expected = ("p-divides-n" if e >= n and n % p == 0 else
                "main-sum" if e >= n else
                "small-e-zero" if p > e + 1 else
                "p2-unramified" if (p, e, n) == (2, 1, 2) else "open-region")
    assert branch == expected


def test_count_result_contract_and_json():
    with pytest.raises(ConsistencyError):
        CountResult("zero", 3, "p-divides-n")
    with pytest.raises(ConsistencyError):
        CountResult("out_of_range", 1, "open-region")
    with pytest.raises(ParameterError):
        CountResult("maybe", 1, "x")
    for res in [dispatch(QueryParams(3, 2, 1, 2, 2)), dispatch(QueryParams(3, 2, 1, 3, 1)),
                printed_closed_form(Q(2, 1, 3, 3)), dispatch(QueryParams(3, 3, 1, 3, 1))]:
        assert CountResult.from_json(res.to_json()) == res
