"""Galois-equivariant solutions f: k0^{n-1} -> k0/h of the twisted additivity relation

    f(a) + f(b) + sum_{i=1}^{n-1} a_i b_{n-i}  ==  f(a * b)   (mod h),

where a * b multiplies 1 + sum a_i T^i and 1 + sum b_i T^i modulo T^n.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import BranchError, ParameterError, ResourceError
from .ff import FieldSpec
from .partitions import LOG_SIGN, ModPTable, g_mod_p
from .subspaces import Subspace
from .unitgroup import TruncUnitGroup

DEFAULT_BUDGET = 10**6


def b_exponent(n: int, p: int) -> int:
    """Number of exponents 1 <= j < n prime to p."""
    if n < 1:
        raise ParameterError("n must be positive")
    return n - 1 - (n - 1) // p


def equivariant_closed_count(p: int, n: int, q: int, codim: int) -> int:
    """Closed-form number of equivariant solutions.

    The zero quotient (codim 0) always carries exactly one solution, even
    when p | n; the vanishing for p | n applies to proper h only.
    """
    if codim == 0:
        return 1
    if n % p == 0:
        return 0
    return q ** (b_exponent(n, p) * codim)


@dataclass(frozen=True)
class FunctionalEquationInstance:
    spec: FieldSpec
    q: int
    n: int
    h: Subspace

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("n must be positive")
        if self.h.ambient != self.spec:
            raise ParameterError("h lives in a different field")
        if not self.h.is_invariant(self.q):
            raise ParameterError("h is not stable under the q-power map")

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def degenerate(self) -> bool:
        """n = 1: the domain is a single point."""
        return self.n == 1

    def domain(self) -> TruncUnitGroup:
        return TruncUnitGroup(self.spec, self.n - 1, self.q, cap=10**9)


# -- exhaustive search with propagation --------------------------------------

class _RelationSearch:
    """Count maps f: D -> k0/h with f(x*y) = f(x) + f(y) + cross(x, y) mod h.

    D is a finite abelian group (ids 0..N-1, identity 0) with an action
    sigma of finite order.  Values are assigned one orbit at a time; every
    completed pair forces or checks the value at the product, so a branch
    dies as soon as it contradicts the relation.
    """

    def __init__(self, size, op, cross, orbits, act_value, candidates, reduce, add,
                 node_budget=None, keep=0):
        self.size = size
        self.op = op
        self.cross = cross
        self.orbits = orbits
        self.orbit_of = {}
        for k, orb in enumerate(orbits):
            for x in orb:
                self.orbit_of[x] = k
        self.act_value = act_value
        self.candidates = candidates
        self.reduce = reduce
        self.add = add
        self.node_budget = node_budget
        self.keep = keep
        self.values = [None] * size
        self.trail: list[int] = []
        self.nodes = 0
        self.count = 0
        self.solutions: list[list[int]] = []

    def _set_orbit(self, x, v) -> bool:
        orb = self.orbits[self.orbit_of[x]]
        i0 = orb.index(x)
        s = len(orb)
        if self.reduce(self.act_value(v, s)) != v:
            return False
        for i in range(s):
            y = orb[(i0 + i) % s]
            w = self.reduce(self.act_value(v, i))
            cur = self.values[y]
            if cur is None:
                self.values[y] = w
                self.trail.append(y)
            elif cur != w:
                return False
        return True

    def _propagate(self, start) -> bool:
        qi = start
        while qi < len(self.trail):
            x = self.trail[qi]
            vx = self.values[x]
            for y in self.trail[: qi + 1]:
                c = self.op(x, y)
                need = self.reduce(self.add(self.add(vx, self.values[y]), self.cross(x, y)))
                cur = self.values[c]
                if cur is None:
                    if not self._set_orbit(c, need):
                        return False
                elif cur != need:
                    return False
            qi += 1
        return True

    def _undo(self, mark):
        for y in self.trail[mark:]:
            self.values[y] = None
        del self.trail[mark:]

    def run(self) -> int:
        self._search(0, 0)
        return self.count

    def _search(self, processed, next_orbit):
        k = next_orbit
        while k < len(self.orbits) and self.values[self.orbits[k][0]] is not None:
            k += 1
        if k == len(self.orbits):
            self.count += 1
            if len(self.solutions) < self.keep:
                self.solutions.append(list(self.values))
            return
        rep = self.orbits[k][0]
        for v in self.candidates(len(self.orbits[k])):
            self.nodes += 1
            if self.node_budget is not None and self.nodes > self.node_budget:
                raise ResourceError(f"search exceeded {self.node_budget} nodes", self.node_budget)
            mark = len(self.trail)
            if self._set_orbit(rep, v) and self._propagate(processed):
                self._search(len(self.trail), k + 1)
            self._undo(mark)


def _domain_orbits(group: TruncUnitGroup) -> list[list[int]]:
    seen = set()
    orbits = []
    for x in group.elements():
        if x in seen:
            continue
        orb = [x]
        y = group.frob(x)
        while y != x:
            orb.append(y)
            y = group.frob(y)
        seen.update(orb)
        orbits.append(orb)
    return orbits


def candidate_exponent(inst: FunctionalEquationInstance) -> tuple[int, int]:
    """(|k0/h|, number of Galois orbits on k0^{n-1}); candidates = base ** exponent."""
    if inst.degenerate:
        return 1, 0
    return inst.p ** inst.h.codim, len(_domain_orbits(inst.domain()))


def within_budget(inst: FunctionalEquationInstance, budget: int = DEFAULT_BUDGET) -> bool:
    base, exp = candidate_exponent(inst)
    total = 1
    for _ in range(exp):
        total *= base
        if total > budget:
            return False
    return True


def _make_search(inst: FunctionalEquationInstance, keep=0, node_budget=None) -> _RelationSearch:
    F, h, q = inst.spec, inst.h, inst.q
    dom = inst.domain()
    reps = h.coset_representatives()
    reduced = [h.reduce(x) for x in F.elements()]
    coeffs = [dom.coeffs(x) for x in dom.elements()]
    act_cache: dict = {}

    def act_value(v, i):
        key = (v, i)
        w = act_cache.get(key)
        if w is None:
            w = act_cache[key] = F.pow(v, q ** i)
        return w

    def candidates(orbit_size):
        return [v for v in reps if h.reduce(F.pow(v, q ** orbit_size)) == v]

    lift = dom.n + 1

    def cross(x, y):
        # T^{n} coefficient of the product of two level-(n-1) units
        a, b = coeffs[x], coeffs[y]
        acc = 0
        for i in range(1, lift):
            ai, bj = a[i - 1], b[lift - i - 1]
            if ai and bj:
                acc = F.add(acc, F.mul(ai, bj))
        return acc

    return _RelationSearch(dom.order, dom.mul, cross, _domain_orbits(dom), act_value,
                           candidates, reduced.__getitem__, F.add, node_budget=node_budget, keep=keep)


def equivariant_brute_count(inst: FunctionalEquationInstance, budget: int = DEFAULT_BUDGET,
                      keep: int = 0):
    """Exact count of equivariant solutions by exhaustive (pruned) enumeration.

    Refuses with ResourceError when the unpruned candidate space exceeds
    ``budget``.  With ``keep > 0`` returns (count, solutions) where each
    solution is a list of coset representatives indexed by domain element.
    """
    if inst.degenerate:
        return (1, [[0]]) if keep else 1
    if inst.h.codim == 0:
        # k0/h is a point: the one constant map satisfies the relation trivially
        return (1, [[0] * inst.domain().order]) if keep else 1
    if not within_budget(inst, budget):
        base, exp = candidate_exponent(inst)
        raise ResourceError(f"{base}^{exp} candidate functions exceed the budget {budget}", budget)
    search = _make_search(inst, keep=keep)
    count = search.run()
    return (count, search.solutions) if keep else count


def solution_table(inst: FunctionalEquationInstance, values: list[int]) -> dict:
    """Solution as {coefficient tuple: coset representative}."""
    dom = inst.domain()
    return {tuple(dom.coeffs(x)): v for x, v in enumerate(values)}


# -- the canonical solution --------------------------------------------------

@dataclass(frozen=True)
class Witness:
    """Polynomial solution with F_p coefficients, read off the log coefficients."""

    inst: FunctionalEquationInstance
    poly: ModPTable

    def __call__(self, xs) -> int:
        return self.inst.h.reduce(self.poly.evaluate(self.inst.spec, list(xs)))

    def satisfies_relation(self, samples: int | None = None, seed: int = 0) -> bool:
        dom = self.inst.domain()
        F = self.inst.spec
        h = self.inst.h
        n = self.inst.n
        value = {}

        def f(x):
            v = value.get(x)
            if v is None:
                v = value[x] = self(dom.coeffs(x))
            return v

        def ok(x, y):
            a, b = dom.coeffs(x), dom.coeffs(y)
            cross = 0
            for i in range(1, n):
                cross = F.add(cross, F.mul(a[i - 1], b[n - i - 1]))
            lhs = F.add(F.add(f(x), f(y)), cross)
            return h.reduce(lhs) == f(dom.mul(x, y))

        if samples is None:
            return all(ok(x, y) for x in dom.elements() for y in dom.elements())
        rng = random.Random(seed)
        return all(ok(rng.randrange(dom.order), rng.randrange(dom.order)) for _ in range(samples))

    def is_equivariant(self) -> bool:
        dom = self.inst.domain()
        F, q = self.inst.spec, self.inst.q
        return all(self(dom.coeffs(dom.frob(x))) == self.inst.h.reduce(F.pow(self(dom.coeffs(x)), q))
                   for x in dom.elements())


def canonical_witness(inst: FunctionalEquationInstance) -> Witness:
    """The solution -(c_n - x_n), c_n the standard log coefficient, reduced mod p.

    With the package's (-1)^len table this is exactly the table itself minus
    its {n} term (LOG_SIGN = -1 flips the sign back).
    """
    n, p = inst.n, inst.p
    if n % p == 0:
        raise BranchError(f"p={p} divides n={n}: there is no polynomial solution")
    table = g_mod_p(n, p)
    poly = table if -LOG_SIGN == 1 else table.negated()
    return Witness(inst, poly)


def check_witness(inst: FunctionalEquationInstance, limit: int = DEFAULT_BUDGET, seed: int = 0) -> bool:
    w = canonical_witness(inst)
    pairs = inst.spec.order ** (2 * (inst.n - 1))
    return w.satisfies_relation(None if pairs <= limit else 20_000, seed)


# -- characteristic 2, n = 2 refinement --------------------------------------

def squares_related(h: Subspace, hprime: Subspace) -> bool:
    """h ~ h': x^2 lies in h for every x in h' (squaring is additive, so a basis suffices)."""
    F = h.ambient
    return all(F.mul(x, x) in h for x in hprime.basis)


def squares_pair_count(spec: FieldSpec, h: Subspace, hprime: Subspace, mode: str = "closed",
                  node_budget: int = DEFAULT_BUDGET) -> int:
    """Number of f: h' -> k0/h with f(a+b) = f(a) + f(b) + ab mod h."""
    F = spec
    if F.p != 2:
        raise ParameterError("only defined in characteristic 2")
    if mode == "closed":
        if not squares_related(h, hprime):
            return 0
        return 2 ** (hprime.dim * h.codim)
    if mode != "brute":
        raise ParameterError(f"unknown mode {mode!r}")
    elems = hprime.elements()
    index = {x: i for i, x in enumerate(elems)}
    reps = h.coset_representatives()
    search = _RelationSearch(
        len(elems),
        lambda i, j: index[F.add(elems[i], elems[j])],
        lambda i, j: F.mul(elems[i], elems[j]),
        [[i] for i in range(len(elems))],
        lambda v, k: v,
        lambda size: reps,
        h.reduce,
        F.add,
        node_budget=node_budget,
    )
    return search.run()
