"""F_p-subspaces of a finite field and the Frobenius-stable ones among them.

A field element doubles as an F_p-vector (its coefficient list).  Subspaces
are kept in reduced echelon form with pivots taken at the highest nonzero
coordinate, so two subspaces are equal iff their basis tuples are equal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import ConsistencyError, ParameterError, ResourceError
from .ff import FieldSpec

DEFAULT_SUBSPACE_CAP = 10**6


# -- echelon forms on coefficient lists ---------------------------------------

def _pivot(row: list[int]) -> int:
    for i in range(len(row) - 1, -1, -1):
        if row[i]:
            return i
    return -1


def echelon(rows, p: int) -> list[list[int]]:
    """Reduced echelon basis, pivots at the top coordinate, sorted by pivot descending."""
    basis: list[list[int]] = []
    for row in rows:
        row = [c % p for c in row]
        for b in basis:
            j = _pivot(b)
            if row[j]:
                c = row[j]
                row = [(x - c * y) % p for x, y in zip(row, b)]
        j = _pivot(row)
        if j < 0:
            continue
        inv = pow(row[j], -1, p)
        row = [x * inv % p for x in row]
        reduced = []
        for b in basis:
            if b[j]:
                c = b[j]
                b = [(x - c * y) % p for x, y in zip(b, row)]
            reduced.append(b)
        basis = reduced + [row]
    basis.sort(key=_pivot, reverse=True)
    return basis


def nullspace(columns: list[list[int]], p: int) -> list[list[int]]:
    """Kernel of the linear map whose i-th basis image is columns[i]."""
    m = len(columns)
    # row-reduce the augmented [image | identity] and keep rows with zero image
    width = len(columns[0]) if columns else 0
    aug = [list(col) + [1 if j == i else 0 for j in range(m)] for i, col in enumerate(columns)]
    # pivots must come from the image part first: reverse so image sits on top
    rows = [r[width:] + r[:width] for r in aug]
    ech = echelon(rows, p)
    return [r[:m] for r in ech if _pivot(r) < m]


# -- subspaces ---------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    ambient: FieldSpec
    basis: tuple[int, ...]  # echelon rows as field elements
    _pivots: tuple[int, ...] = field(default=(), compare=False, repr=False)

    @classmethod
    def span(cls, ambient: FieldSpec, vectors) -> "Subspace":
        rows = echelon([ambient.to_coeffs(v) for v in vectors], ambient.p)
        return cls(ambient, tuple(ambient.from_coeffs(r) for r in rows),
                   tuple(_pivot(r) for r in rows))

    @classmethod
    def zero(cls, ambient: FieldSpec) -> "Subspace":
        return cls(ambient, ())

    @classmethod
    def full(cls, ambient: FieldSpec) -> "Subspace":
        return cls.span(ambient, [ambient.p ** i for i in range(ambient.m)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.ambient.m - self.dim

    @property
    def size(self) -> int:
        return self.ambient.p ** self.dim

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"Subspace({self.ambient!r}, dim={self.dim}, basis={list(self.basis)})"

    def reduce(self, x: int) -> int:
        """Canonical representative of the coset x + self."""
        F = self.ambient
        v = F.to_coeffs(x)
        for b, j in zip(self.basis, self._pivots):
            c = v[j]
            if c:
                bv = F.to_coeffs(b)
                v = [(a - c * y) % F.p for a, y in zip(v, bv)]
        return F.from_coeffs(v)

    def __contains__(self, x: int) -> bool:
        return self.reduce(x) == 0

    def elements(self) -> list[int]:
        F = self.ambient
        out = [0]
        for b in self.basis:
            multiples = [F.scale(c, b) for c in range(F.p)]
            out = [F.add(x, y) for x in out for y in multiples]
        return sorted(out)

    def coset_representatives(self) -> list[int]:
        return [x for x in self.ambient.elements() if self.reduce(x) == x]

    def join(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.ambient, self.basis + other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: echelon (u | u), (v | 0); rows with empty top half span the meet."""
        F = self.ambient
        m = F.m
        rows = [F.to_coeffs(u) + F.to_coeffs(u) for u in self.basis]
        rows += [[0] * m + F.to_coeffs(v) for v in other.basis]
        ech = echelon(rows, F.p)
        meet = [F.from_coeffs(r[:m]) for r in ech if _pivot(r) < m]
        return Subspace.span(F, meet)

    def issubset(self, other: "Subspace") -> bool:
        return all(b in other for b in self.basis)

    def image(self, fn) -> "Subspace":
        return Subspace.span(self.ambient, [fn(b) for b in self.basis])

    def is_invariant(self, q: int) -> bool:
        F = self.ambient
        return all(F.pow(b, q) in self for b in self.basis)


# -- Frobenius-stable subspaces ----------------------------------------------

def _apply(matrix_cols, vec, p):
    out = [0] * len(vec)
    for c, col in zip(vec, matrix_cols):
        if c:
            for i, y in enumerate(col):
                out[i] += c * y
    return [x % p for x in out]


@lru_cache(maxsize=64)
def _invariant_cached(spec: FieldSpec, q: int, cap: int) -> tuple[Subspace, ...]:
    F = spec
    fp, r = F.relative_degree(q)
    frob = F.linear_map_matrix(lambda x: F.pow(x, q))
    seen = bytearray(F.order)
    atoms: dict[tuple, Subspace] = {}
    for x in F.elements():
        if x == 0 or seen[x]:
            continue
        vecs = [F.to_coeffs(x)]
        for _ in range(r - 1):
            vecs.append(_apply(frob, vecs[-1], F.p))
        # orbit and scalar multiples share the same cyclic closure
        for v in vecs:
            y = F.from_coeffs(v)
            for c in range(1, F.p):
                seen[F.scale(c, y)] = 1
        sub = Subspace.span(F, [F.from_coeffs(v) for v in vecs])
        atoms.setdefault(sub.basis, sub)

    zero = Subspace.zero(F)
    found = {zero.basis: zero}
    frontier = [zero]
    atom_list = sorted(atoms.values(), key=lambda s: (s.dim, s.basis))
    while frontier:
        nxt = []
        for sub in frontier:
            for atom in atom_list:
                if atom.issubset(sub):
                    continue
                j = sub.join(atom)
                if j.basis not in found:
                    found[j.basis] = j
                    nxt.append(j)
                    if len(found) > cap:
                        raise ResourceError(
                            f"more than {cap} invariant subspaces in {F!r} over F_{q}", cap)
        frontier = nxt
    return tuple(sorted(found.values(), key=lambda s: (s.dim, s.basis)))


def enumerate_invariant_subspaces(spec: FieldSpec, q: int,
                                  cap: int = DEFAULT_SUBSPACE_CAP) -> list[Subspace]:
    """Every F_p-subspace h with h^q ⊆ h, ordered by (dim, basis)."""
    return list(_invariant_cached(spec, q, cap))


def enumerate_all_subspaces(spec: FieldSpec, cap: int = DEFAULT_SUBSPACE_CAP) -> list[Subspace]:
    """All F_p-subspaces (the invariant ones for the trivial group)."""
    return enumerate_invariant_subspaces(spec, spec.order, cap)


def trace_zero_subspace(spec: FieldSpec, q: int, f: int | None = None) -> Subspace:
    """Kernel of the trace down to F_q."""
    F = spec
    _, f = F.relative_degree(q, f)
    cols = F.linear_map_matrix(lambda x: F.relative_trace(x, q, f))
    kernel = nullspace(cols, F.p)
    return Subspace.span(F, [F.from_coeffs(v) for v in kernel])


def fixed_coset_count(spec: FieldSpec, h: Subspace, q: int, mode: str = "both"):
    """Number of cosets x + h with x^q - x in h.

    mode "brute" walks coset representatives, "closed" returns q|h ∩ t|/|h|,
    "both" computes the two and raises ConsistencyError if they differ.
    """
    F = spec
    if not h.is_invariant(q):
        raise ParameterError("h is not stable under the q-power map")
    if mode not in ("brute", "closed", "both"):
        raise ParameterError(f"unknown mode {mode!r}")
    brute = closed = None
    if mode in ("brute", "both"):
        brute = sum(1 for x in h.coset_representatives()
                    if F.sub(F.pow(x, q), x) in h)
    if mode in ("closed", "both"):
        t = trace_zero_subspace(F, q)
        val = Fraction(q * h.intersect(t).size, h.size)
        if val.denominator != 1:
            raise ConsistencyError(f"fixed-coset count {val} is not an integer")
        closed = int(val)
    if mode == "both" and brute != closed:
        raise ConsistencyError(f"brute {brute} != closed {closed}")
    return brute if brute is not None else closed


# -- structured basis of the absolute trace-zero subspace --------------------

@dataclass(frozen=True)
class TraceBasis:
    q: int
    r: int              # |Gal(F_{p^k}/F_q)|
    s: int              # k / r
    alphas: tuple[int, ...]
    vectors: tuple[int, ...]


def _structured_vectors(F: FieldSpec, q: int, r: int, alphas) -> list[int]:
    g = lambda x: F.pow(x, q)
    out = []
    for a in alphas[:-1]:
        y = a
        for _ in range(r):
            out.append(y)
            y = g(y)
    last = alphas[-1]
    y = F.sub(g(last), last)
    for _ in range(r - 1):
        out.append(y)
        y = g(y)
    return out


def verify_trace_basis(spec: FieldSpec, tb: TraceBasis) -> bool:
    t = trace_zero_subspace(spec, spec.p)
    vecs = _structured_vectors(spec, tb.q, tb.r, tb.alphas)
    return (list(vecs) == list(tb.vectors)
            and len(vecs) == t.dim
            and all(v in t for v in vecs)
            and Subspace.span(spec, vecs) == t)


def lt_trace_basis(spec: FieldSpec, q: int, seed: int = 0, budget: int = 10_000) -> TraceBasis:
    """Basis {g^i a_j} ∪ {g^i (g-1) a_s} of the absolute trace-zero subspace, g = q-power map.

    Found by seeded random search; every returned basis is fully verified.
    """
    F = spec
    k_sub, r = F.relative_degree(q)
    s = F.m // r
    t = trace_zero_subspace(F, F.p)
    t_elems = t.elements()
    rng = random.Random(seed)
    for _ in range(budget):
        alphas = tuple(rng.choice(t_elems) for _ in range(s - 1)) + (rng.randrange(F.order),)
        vecs = _structured_vectors(F, q, r, alphas)
        if len(vecs) == t.dim and Subspace.span(F, vecs) == t and all(v in t for v in vecs):
            return TraceBasis(q, r, s, alphas, tuple(vecs))
    raise ResourceError(f"no structured trace basis found in {budget} tries (seed {seed})", budget)


# -- characteristic-2 cross sum ----------------------------------------------

def cross_sum_residue(alpha: int, spec: FieldSpec, q: int, m: int) -> int:
    """sum_{0<=i<j<m} a_i a_j modulo the absolute trace-zero subspace, a_i = α^{q^i} + α^{q^{i+1}}."""
    F = spec
    if F.p != 2:
        raise ParameterError("cross sums are defined in characteristic 2 only")
    rq = F.relative_degree(q)[0]
    if rq * m != F.m or m < 2:
        raise ParameterError(f"need [field:F_2] = r*m with m >= 2, got q={q}, m={m}")
    conj = [alpha]
    for _ in range(m):
        conj.append(F.pow(conj[-1], q))
    a = [F.add(conj[i], conj[i + 1]) for i in range(m)]
    acc = 0
    for i in range(m):
        for j in range(i + 1, m):
            acc = F.add(acc, F.mul(a[i], a[j]))
    return trace_zero_subspace(F, 2).reduce(acc)


def cross_sum_closed_form(alpha: int, spec: FieldSpec, q: int, m: int) -> int:
    F = spec
    t = trace_zero_subspace(F, 2)
    if m % 2 == 0:
        return 0
    return t.reduce(F.add(F.pow(alpha, q + 1), alpha))
