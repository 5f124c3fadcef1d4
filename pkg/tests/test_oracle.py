import pytest

from wildcount.equivariant import FunctionalEquationInstance, canonical_witness, equivariant_closed_count
from wildcount.errors import ConsistencyError, ParameterError, ResourceError
from wildcount.ff import build_field
from wildcount.oracle import (FiberData, UnitSubgroup, enumerate_valid_subgroups, fiber_assemble,
                              fiber_extract, oracle_report, oracle_total_count, unit_group_ops)
from wildcount.subspaces import Subspace, enumerate_invariant_subspaces
from wildcount.unitgroup import TruncUnitGroup, enumerate_subgroups, generated_subgroup


def test_unit_group_examples():
    G = unit_group_ops(2, build_field(2, 1))
    one_plus_t = G.encode([1, 0])
    assert G.coeffs(G.mul(one_plus_t, one_plus_t)) == [0, 1]
    G3 = unit_group_ops(3, build_field(3, 1))
    assert G3.coeffs(G3.inv(G3.encode([1, 0, 0]))) == [2, 1, 2]   # 1 - T + T^2 - T^3
    G2 = unit_group_ops(3, build_field(2, 1))
    assert G2.coeffs(G2.inv(G2.encode([1, 0, 0]))) == [1, 1, 1]
    # (1 + aT)^p = 1 + a^p T^p at level n > p
    F = build_field(2, 2)
    G = unit_group_ops(3, F)
    for a in F.elements():
        assert G.coeffs(G.power(G.encode([a, 0, 0]), 2)) == [0, F.mul(a, a), 0]


@pytest.mark.parametrize("p,m,n", [(2, 1, 3), (2, 2, 2), (3, 1, 3), (3, 2, 2), (2, 1, 5)])
def test_group_axioms_exhaustive(p, m, n):
    G = unit_group_ops(n, build_field(p, m), cap=512)
    els = list(G.elements())
    for x in els:
        assert G.mul(x, G.inv(x)) == G.identity
        assert G.mul(x, G.identity) == x
    sample = els[:: max(1, len(els) // 24)]
    for x in sample:
        for y in sample:
            assert G.mul(x, y) == G.mul(y, x)
            for z in sample[:6]:
                assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))


def test_truncation_is_a_homomorphism_with_additive_kernel():
    F = build_field(3, 1)
    G = unit_group_ops(3, F)
    low = TruncUnitGroup(F, 2)
    kernel = [x for x in G.elements() if G.truncate(x) == 0]
    assert len(kernel) == F.order
    for x in G.elements():
        for y in G.elements():
            assert G.truncate(G.mul(x, y)) == low.mul(G.truncate(x), G.truncate(y))
    for a in kernel:
        for b in kernel:
            assert G.top(G.mul(a, b)) == F.add(G.top(a), G.top(b))


def test_group_cap():
    with pytest.raises(ResourceError):
        unit_group_ops(6, build_field(5, 1))


def test_subgroup_enumeration_counts():
    # Z/9 has 3 subgroups, (Z/3)^2 has 6
    z9 = lambda a, b: (a + b) % 9
    assert len(enumerate_subgroups(range(9), z9, 0)) == 3
    z33 = lambda a, b: (a % 3 + b % 3) % 3 + 3 * ((a // 3 + b // 3) % 3)
    assert len(enumerate_subgroups(range(9), z33, 0)) == 6
    assert generated_subgroup([3], z9, 0) == frozenset({0, 3, 6})


def test_valid_subgroup_examples():
    F3 = build_field(3, 1)
    assert len(enumerate_valid_subgroups(2, F3, 3)) == 3
    assert len(enumerate_valid_subgroups(2, F3, 3, include_full=True)) == 4
    F2 = build_field(2, 1)
    subs = enumerate_valid_subgroups(3, F2, 2)
    assert len(subs) == 2
    assert all(fiber_extract(H).h == Subspace.zero(F2) for H in subs)
    # level 1: everything surjects onto the trivial group
    F4 = build_field(2, 2)
    assert (len(enumerate_valid_subgroups(1, F4, 2, include_full=True))
            == len(enumerate_invariant_subspaces(F4, 2)))


def test_valid_subgroups_are_closed_invariant_surjective():
    F = build_field(3, 2)
    for H in enumerate_valid_subgroups(2, F, 3):
        assert H.is_subgroup() and H.is_invariant() and H.is_surjective()
        assert H.order < H.group.order


def test_fiber_extract_examples():
    F = build_field(3, 1)
    G = unit_group_ops(2, F)
    kernel_only = UnitSubgroup.from_elements(G, [G.with_top(x, a) for x in range(3) for a in range(3)])
    fd = fiber_extract(kernel_only)
    assert fd.h == Subspace.full(F) and set(fd.table.values()) == {0}
    for a in range(3):
        H = UnitSubgroup.from_elements(G, generated_subgroup([G.encode([1, a])], G.mul, 0))
        fd = fiber_extract(H)
        assert fd.h == Subspace.zero(F) and fd((0,)) == 0
        # the table solves the relation: it is 2x^2 + cx for some c
        assert any(all(fd((x,)) == (2 * x * x + c * x) % 3 for x in range(3)) for c in range(3))
    not_surjective = UnitSubgroup.from_elements(G, [G.with_top(0, a) for a in range(3)])
    with pytest.raises(ParameterError):
        fiber_extract(not_surjective)


def test_fiber_assemble_examples():
    F = build_field(3, 1)
    full = fiber_assemble(FiberData(Subspace.full(F), {(x,): 0 for x in range(3)}), 2)
    assert full.order == 9
    w = canonical_witness(FunctionalEquationInstance(F, 3, 2, Subspace.zero(F)))
    H = fiber_assemble(FiberData(Subspace.zero(F), {(x,): w([x]) for x in range(3)}), 2)
    assert H.order == 3 and H.is_subgroup() and H.is_invariant()
    bad = FiberData(Subspace.zero(F), {(0,): 0, (1,): 1, (2,): 1})
    with pytest.raises(ConsistencyError, match="relation fails"):
        fiber_assemble(bad, 2)


@pytest.mark.parametrize("p,m,n", [(3, 1, 2), (2, 1, 3), (2, 2, 3), (5, 1, 2)])
def test_fiber_roundtrip_and_per_h_counts(p, m, n):
    F = build_field(p, m)
    valid = enumerate_valid_subgroups(n, F, p, include_full=True)
    tally = {}
    for H in valid:
        fd = fiber_extract(H)
        assert fiber_assemble(fd, n, p) == H
        tally[fd.h] = tally.get(fd.h, 0) + 1
    for h in enumerate_invariant_subspaces(F, p):
        assert tally.get(h, 0) == equivariant_closed_count(p, n, p, h.codim)


def test_oracle_total_examples():
    assert oracle_total_count(3, 1, 1, 2, include_full=True) == 10
    assert oracle_total_count(3, 1, 1, 2, include_full=False) == 9
    assert oracle_total_count(2, 1, 1, 3, include_full=True) == 5
    assert oracle_total_count(2, 1, 1, 3, include_full=False) == 4
    # p | n: nothing proper survives
    assert oracle_total_count(2, 1, 1, 2, include_full=False) == 0
    assert oracle_total_count(3, 1, 1, 3, include_full=False) == 0
    rep = oracle_report(3, 1, 2, 2)
    assert rep.total == 39 and rep.subgroups == 15
