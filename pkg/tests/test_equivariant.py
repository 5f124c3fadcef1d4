import pytest

from wildcount.equivariant import (FunctionalEquationInstance, b_exponent, canonical_witness,
                                   check_witness, squares_pair_count, squares_related, equivariant_brute_count,
                                   equivariant_closed_count, within_budget)
from wildcount.errors import BranchError, ParameterError, ResourceError
from wildcount.ff import build_field
from wildcount.partitions import Partition
from wildcount.subspaces import Subspace, enumerate_all_subspaces, enumerate_invariant_subspaces


def inst(p, m, n, q=None, h=None):
    F = build_field(p, m)
    return FunctionalEquationInstance(F, q or p, n, h if h is not None else Subspace.zero(F))


def test_b_exponent():
    assert b_exponent(2, 3) == 1
    assert b_exponent(1, 7) == 0
    assert b_exponent(4, 3) == 2
    with pytest.raises(ParameterError):
        b_exponent(0, 2)


def test_closed_form_examples():
    assert equivariant_closed_count(2, 2, 2, 1) == 0
    assert equivariant_closed_count(5, 3, 5, 0) == 1
    assert equivariant_closed_count(3, 2, 3, 1) == 3
    # the zero quotient carries one solution even when p | n
    assert equivariant_closed_count(2, 2, 2, 0) == 1


def test_brute_force_examples():
    count, sols = equivariant_brute_count(inst(3, 1, 2), keep=5)
    assert count == 3
    # f(a) = 2a^2 + ca for c in F_3
    assert sorted(sols) == sorted([[0] + [(2 * a * a + c * a) % 3 for a in (1, 2)] for c in range(3)])
    assert equivariant_brute_count(inst(2, 1, 3)) == 2
    for m in (1, 2):
        F = build_field(2, m)
        for h in enumerate_invariant_subspaces(F, 2):
            want = 1 if h.codim == 0 else 0
            assert equivariant_brute_count(FunctionalEquationInstance(F, 2, 2, h)) == want


def test_brute_force_degenerate_level():
    assert equivariant_brute_count(inst(3, 1, 1)) == 1


def test_budget_refusal_is_explicit():
    big = inst(5, 2, 3)
    assert not within_budget(big)
    with pytest.raises(ResourceError):
        equivariant_brute_count(big)


def test_instance_validation():
    F = build_field(3, 2)
    with pytest.raises(ParameterError):
        FunctionalEquationInstance(F, 3, 2, Subspace.span(F, [4]))
    with pytest.raises(ParameterError):
        FunctionalEquationInstance(F, 3, 0, Subspace.zero(F))
    with pytest.raises(ParameterError):
        FunctionalEquationInstance(F, 3, 2, Subspace.zero(build_field(3, 1)))


@pytest.mark.parametrize("p,m,n", [(3, 1, 2), (3, 2, 2), (5, 1, 3), (2, 2, 3), (3, 1, 4)])
def test_brute_matches_closed_on_every_h(p, m, n):
    F = build_field(p, m)
    for q in sorted({p, p ** m}):
        for h in enumerate_invariant_subspaces(F, q):
            i = FunctionalEquationInstance(F, q, n, h)
            if within_budget(i):
                assert equivariant_brute_count(i) == equivariant_closed_count(p, n, q, h.codim)


def test_witness_examples():
    w = canonical_witness(inst(3, 1, 2))
    assert w.poly.terms == {Partition((1, 1)): 2}
    assert [w([a]) for a in range(3)] == [0, 2, 2]       # 2a^2, not a^2
    assert w.satisfies_relation() and w.is_equivariant()
    w = canonical_witness(inst(2, 1, 3))
    assert w.poly.terms == {Partition((2, 1)): 1, Partition((1, 1, 1)): 1}
    for a1 in (0, 1):
        for a2 in (0, 1):
            assert w([a1, a2]) == (a1 * a2 + a1 ** 3) % 2
    assert w.satisfies_relation()
    with pytest.raises(BranchError):
        canonical_witness(inst(2, 1, 2))


@pytest.mark.parametrize("p,m,n", [(3, 2, 2), (2, 1, 3), (3, 1, 2), (5, 1, 2)])
def test_witness_is_a_brute_force_solution(p, m, n):
    i = inst(p, m, n)
    w = canonical_witness(i)
    count, sols = equivariant_brute_count(i, keep=10_000)
    dom = i.domain()
    values = [w(dom.coeffs(x)) for x in dom.elements()]
    assert values in sols


def test_witness_over_larger_fields():
    for p, m, n in [(3, 2, 2), (2, 2, 3), (5, 1, 4), (2, 1, 5)]:
        assert check_witness(inst(p, m, n))


def test_squares_pair_examples():
    F = build_field(2, 2)
    t = Subspace.span(F, [1])
    assert squares_related(t, t)
    assert squares_pair_count(F, t, t, "closed") == squares_pair_count(F, t, t, "brute") == 2
    full, zero = Subspace.full(F), Subspace.zero(F)
    assert not squares_related(zero, full)
    assert squares_pair_count(F, zero, full, "closed") == squares_pair_count(F, zero, full, "brute") == 0
    for hp in enumerate_all_subspaces(F):
        assert squares_pair_count(F, full, hp, "brute") == 1
    with pytest.raises(ParameterError):
        squares_pair_count(build_field(3, 1), Subspace.zero(build_field(3, 1)),
                      Subspace.zero(build_field(3, 1)))
