"""The truncated unit group (1 + T k0[T]) / (1 + T^{n+1} k0[T]) and subgroup closure.

A unit 1 + a_1 T + ... + a_n T^n is encoded as the int sum a_i Q^{i-1},
Q = |k0|, so dropping the top coefficient is reduction mod Q^{n-1}.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .errors import ParameterError, ResourceError
from .ff import FieldSpec

DEFAULT_GROUP_CAP = 4096
DEFAULT_SUBGROUP_CAP = 200_000


class TruncUnitGroup:
    """Level-n truncated units over ``spec``; Galois acts by the q-power map coefficientwise."""

    def __init__(self, spec: FieldSpec, n: int, q: int | None = None, cap: int = DEFAULT_GROUP_CAP):
        if n < 0:
            raise ParameterError("level must be nonnegative")
        self.spec = spec
        self.n = n
        self.q = spec.order if q is None else q
        spec.relative_degree(self.q)
        self.Q = spec.order
        self.order = self.Q ** n
        if self.order > cap:
            raise ResourceError(f"|U_{n}| = {self.order} exceeds the group cap {cap}", cap)
        self._mul_cache: dict = {}

    def __repr__(self):
        return f"TruncUnitGroup({self.spec!r}, n={self.n}, q={self.q})"

    identity = 0

    def elements(self) -> range:
        return range(self.order)

    def coeffs(self, x: int) -> list[int]:
        out = []
        for _ in range(self.n):
            out.append(x % self.Q)
            x //= self.Q
        return out

    def encode(self, coeffs) -> int:
        x = 0
        for c in reversed(list(coeffs)):
            x = x * self.Q + c
        return x

    def mul(self, x: int, y: int) -> int:
        key = (x, y) if x <= y else (y, x)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        F = self.spec
        a, b = self.coeffs(x), self.coeffs(y)
        z = []
        for i in range(self.n):
            acc = F.add(a[i], b[i])
            for j in range(i):
                if a[j] and b[i - 1 - j]:
                    acc = F.add(acc, F.mul(a[j], b[i - 1 - j]))
            z.append(acc)
        out = self.encode(z)
        self._mul_cache[key] = out
        return out

    def power(self, x: int, k: int) -> int:
        acc = self.identity
        for _ in range(k):
            acc = self.mul(acc, x)
        return acc

    def inv(self, x: int) -> int:
        """Inverse series: solve (1 + sum a_i T^i)(1 + sum b_i T^i) = 1 term by term."""
        F = self.spec
        a = self.coeffs(x)
        b = []
        for i in range(self.n):
            acc = a[i]
            for j in range(i):
                acc = F.add(acc, F.mul(a[j], b[i - 1 - j]))
            b.append(F.neg(acc))
        return self.encode(b)

    def frob(self, x: int, times: int = 1) -> int:
        F = self.spec
        e = self.q ** times
        return self.encode([F.pow(c, e) for c in self.coeffs(x)])

    def truncate(self, x: int) -> int:
        """Image in the level n-1 group."""
        return x % (self.Q ** (self.n - 1)) if self.n else 0

    def top(self, x: int) -> int:
        """Coefficient of T^n."""
        return x // (self.Q ** (self.n - 1)) if self.n else 0

    def with_top(self, lower: int, top: int) -> int:
        return lower + top * self.Q ** (self.n - 1)

    def cross_term(self, x: int, y: int) -> int:
        """T^{n+1} coefficient of x*y at this level: sum_{i=1}^{n} x_i y_{n+1-i}."""
        F = self.spec
        a, b = self.coeffs(x), self.coeffs(y)
        acc = 0
        for i in range(self.n):
            if a[i] and b[self.n - 1 - i]:
                acc = F.add(acc, F.mul(a[i], b[self.n - 1 - i]))
        return acc

    def galois_period(self) -> int:
        """Order of the q-power map on k0."""
        return self.spec.relative_degree(self.q)[1]


# -- subgroups of finite abelian groups --------------------------------------

def generated_subgroup(gens: Iterable[int], mul: Callable, identity: int) -> frozenset:
    elems = {identity}
    frontier = [identity]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


def product_set(a: frozenset, b: frozenset, mul: Callable) -> frozenset:
    return frozenset(mul(x, y) for x in a for y in b)


def enumerate_subgroups(elements: Iterable[int], mul: Callable, identity: int,
                        act: Callable | None = None, period: int = 1,
                        cap: int = DEFAULT_SUBGROUP_CAP) -> list[frozenset]:
    """All subgroups of an abelian group stable under ``act`` (an automorphism of order dividing period).

    Starts from the stable closures of single elements, then closes under
    joins (product sets, valid because the group is abelian) to a fixpoint.
    """
    seen = set()
    atoms = {}
    for u in elements:
        if u in seen:
            continue
        orbit = [u]
        if act is not None:
            for _ in range(period - 1):
                orbit.append(act(orbit[-1]))
        seen.update(orbit)
        sub = generated_subgroup(orbit, mul, identity)
        atoms.setdefault(sub, None)
    atom_list = sorted(atoms, key=len)
    trivial = frozenset({identity})
    found = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for sub in frontier:
            for atom in atom_list:
                if atom <= sub:
                    continue
                j = product_set(sub, atom, mul)
                if j not in found:
                    found.add(j)
                    nxt.append(j)
                    if len(found) > cap:
                        raise ResourceError(f"more than {cap} subgroups", cap)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def coset_partition(group_elements: Iterable[int], sub: frozenset, mul: Callable) -> dict[int, int]:
    """Map each element to the least element of its coset."""
    label: dict[int, int] = {}
    for g in sorted(group_elements):
        if g in label:
            continue
        for h in sub:
            label[mul(g, h)] = g
    return label
