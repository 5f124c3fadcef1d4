"""Exhaustive extension counts in the truncated-polynomial model of (1+m)/(1+m^{n+1}).

A subgroup H of the level-n unit group U_n is *valid* when it is stable
under the q-power map, maps onto U_{n-1} under truncation, and is proper.
Each valid H is determined by its fiber data: the subgroup h of k0 cut out
by the kernel of truncation, and a coset-valued function on U_{n-1}.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import ConsistencyError, ParameterError
from .ff import FieldSpec, build_field
from .subspaces import Subspace, fixed_coset_count
from .unitgroup import (DEFAULT_GROUP_CAP, DEFAULT_SUBGROUP_CAP, TruncUnitGroup,
                        coset_partition, enumerate_subgroups, generated_subgroup)


def unit_group_ops(n: int, spec: FieldSpec, q: int | None = None,
                   cap: int = DEFAULT_GROUP_CAP) -> TruncUnitGroup:
    return TruncUnitGroup(spec, n, q, cap=cap)


@dataclass(frozen=True)
class UnitSubgroup:
    group: TruncUnitGroup = field(repr=False, compare=False)
    elements: tuple[int, ...]
    generators: tuple[int, ...] = field(compare=False)

    @classmethod
    def from_elements(cls, group: TruncUnitGroup, elems) -> "UnitSubgroup":
        elems = tuple(sorted(elems))
        gens: list[int] = []
        span = frozenset({group.identity})
        for x in elems:
            if x not in span:
                gens.append(x)
                span = generated_subgroup(gens, group.mul, group.identity)
        return cls(group, elems, tuple(gens))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self._set

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = frozenset(self.elements)
            object.__setattr__(self, "_cached_set", s)
        return s

    def is_subgroup(self) -> bool:
        G, s = self.group, self._set
        return (G.identity in s and all(G.inv(x) in s for x in s)
                and all(G.mul(x, y) in s for x in s for y in s))

    def is_invariant(self) -> bool:
        return all(self.group.frob(x) in self for x in self.generators)

    def is_surjective(self) -> bool:
        G = self.group
        return len({G.truncate(x) for x in self.elements}) == G.Q ** (G.n - 1)


def enumerate_valid_subgroups(n: int, spec: FieldSpec, q: int | None = None,
                              include_full: bool = False, cap: int = DEFAULT_GROUP_CAP,
                              subgroup_cap: int = DEFAULT_SUBGROUP_CAP) -> list[UnitSubgroup]:
    """All q-power-stable subgroups of U_n that surject onto U_{n-1}; proper unless include_full."""
    if n < 1:
        raise ParameterError("level must be at least 1")
    G = unit_group_ops(n, spec, q, cap)
    period = G.galois_period()
    subs = enumerate_subgroups(G.elements(), G.mul, G.identity, act=G.frob,
                               period=period, cap=subgroup_cap)
    lower = G.Q ** (n - 1)
    out = []
    for s in subs:
        if len(s) == G.order and not include_full:
            continue
        if len({G.truncate(x) for x in s}) != lower:
            continue
        out.append(UnitSubgroup.from_elements(G, s))
    return out


# -- fiber data ---------------------------------------------------------------

@dataclass(frozen=True)
class FiberData:
    """h and the coset-valued table, keyed by the coefficient tuple (a_1..a_{n-1})."""

    h: Subspace
    table: dict

    def __call__(self, lower: tuple) -> int:
        return self.table[tuple(lower)]

    def __eq__(self, other):
        return isinstance(other, FiberData) and self.h == other.h and self.table == other.table

    def __hash__(self):
        return hash((self.h, tuple(sorted(self.table.items()))))


def fiber_extract(H: UnitSubgroup) -> FiberData:
    G = H.group
    F = G.spec
    n = G.n
    kernel = [G.top(x) for x in H.elements if G.truncate(x) == 0]
    h = Subspace.span(F, kernel)
    if len(kernel) != h.size:
        raise ConsistencyError("kernel of truncation is not an additive subgroup")
    fibers: dict[int, set] = {}
    for x in H.elements:
        fibers.setdefault(G.truncate(x), set()).add(G.top(x))
    if len(fibers) != G.Q ** (n - 1):
        raise ParameterError("subgroup does not surject onto the lower level")
    lower_group = TruncUnitGroup(F, n - 1, G.q, cap=G.order)
    table = {}
    for low, tops in fibers.items():
        reps = {h.reduce(t) for t in tops}
        if len(reps) != 1 or len(tops) != h.size:
            raise ConsistencyError(f"fiber over {lower_group.coeffs(low)} is not a single coset of h")
        table[tuple(lower_group.coeffs(low))] = reps.pop()
    return FiberData(h, table)


def fiber_assemble(fd: FiberData, n: int, q: int | None = None) -> UnitSubgroup:
    """Rebuild the subgroup {1 + sum a_i T^i + (f(a) + h) T^n}; checks the relation first."""
    h = fd.h
    F = h.ambient
    G = TruncUnitGroup(F, n, q, cap=max(DEFAULT_GROUP_CAP, F.order ** n))
    low = TruncUnitGroup(F, n - 1, G.q, cap=G.order)
    if len(fd.table) != low.order:
        raise ParameterError("table does not cover the lower level")
    f = [fd.table[tuple(low.coeffs(x))] for x in low.elements()]
    if f[0] != 0:
        raise ConsistencyError("table at the identity is not h")
    for x in low.elements():
        for y in low.elements():
            if y < x:
                continue
            lhs = h.reduce(F.add(F.add(f[x], f[y]), low.cross_term(x, y)))
            if lhs != f[low.mul(x, y)]:
                raise ConsistencyError(
                    f"relation fails at a={tuple(low.coeffs(x))}, b={tuple(low.coeffs(y))}")
        if f[low.frob(x)] != h.reduce(F.pow(f[x], G.q)):
            raise ConsistencyError(f"table is not equivariant at {tuple(low.coeffs(x))}")
    hs = h.elements()
    elems = [G.with_top(x, F.add(f[x], a)) for x in low.elements() for a in hs]
    return UnitSubgroup.from_elements(G, elems)


# -- totals -------------------------------------------------------------------

def fixed_cosets(G: TruncUnitGroup, H: UnitSubgroup) -> int:
    """Number of cosets gH with frob(g) in gH, by direct enumeration of U_n/H."""
    label = coset_partition(G.elements(), frozenset(H.elements), G.mul)
    return sum(1 for g, rep in label.items() if g == rep and label[G.frob(g)] == rep)


@dataclass
class OracleReport:
    p: int
    f_base: int
    f: int
    n: int
    include_full: bool
    total: int
    subgroups: int
    per_h: dict  # h -> (valid subgroups, fixed cosets per subgroup)


def oracle_report(p: int, f_base: int, f: int, n: int, include_full: bool = False,
                  cap: int = DEFAULT_GROUP_CAP) -> OracleReport:
    if f_base < 1 or f < 1:
        raise ParameterError("inertia degrees must be positive")
    spec = build_field(p, f_base * f)
    q = p ** f_base
    G = unit_group_ops(n, spec, q, cap)
    total = 0
    tally: Counter = Counter()
    fixed_by_h: dict = {}
    subs = enumerate_valid_subgroups(n, spec, q, include_full, cap)
    for H in subs:
        h = fiber_extract(H).h
        c = fixed_cosets(G, H)
        expected = fixed_coset_count(spec, h, q, mode="closed")
        if c != expected:
            raise ConsistencyError(f"{c} fixed cosets of U_n/H, but {expected} in k0/h")
        tally[h] += 1
        fixed_by_h[h] = c
        total += c
    per_h = {h: (tally[h], fixed_by_h[h]) for h in tally}
    return OracleReport(p, f_base, f, n, include_full, total, len(subs), per_h)


def oracle_total_count(p: int, f_base: int, f: int, n: int, include_full: bool = False,
                       cap: int = DEFAULT_GROUP_CAP) -> int:
    return oracle_report(p, f_base, f, n, include_full, cap).total
