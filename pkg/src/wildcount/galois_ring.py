"""The Galois ring R = W(F_{2^d}) / 8 and the unramified p = 2 count at jump 2.

Elements are tuples (c_0..c_{d-1}) of residues mod 8, the coefficients of
c_0 + c_1 x + ... in Z/8[x]/(M), where M is the least irreducible of
degree d over F_2 read as a polynomial over Z/8.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product

from .errors import ConsistencyError, ParameterError, ResourceError
from .ff import build_field, least_irreducible
from .subspaces import Subspace, trace_zero_subspace
from .unitgroup import coset_partition, enumerate_subgroups

MOD = 8
MAX_RING_DEGREE = 4
DEFAULT_ORACLE_DEGREE = 3


def _poly_mulmod(a, b, modulus, mod=MOD):
    d = len(modulus) - 1
    prod_ = [0] * (2 * d - 1) if d else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod_[i + j] = (prod_[i + j] + x * y) % mod
    # modulus is monic: x^d = -(lower terms)
    for k in range(len(prod_) - 1, d - 1, -1):
        c = prod_[k]
        if c:
            prod_[k] = 0
            for i in range(d):
                prod_[k - d + i] = (prod_[k - d + i] - c * modulus[i]) % mod
    return tuple(prod_[:d])


@dataclass(frozen=True)
class GaloisRingSpec:
    d: int
    modulus: tuple[int, ...]
    frobenius_image: tuple[int, ...] = field(compare=False)

    @property
    def order(self) -> int:
        return MOD ** self.d

    def zero(self):
        return (0,) * self.d

    def one(self):
        return (1,) + (0,) * (self.d - 1)

    def elements(self):
        return [tuple(c) for c in product(range(MOD), repeat=self.d)]

    def encode(self, a) -> int:
        x = 0
        for c in reversed(a):
            x = x * MOD + c
        return x

    def decode(self, x: int):
        out = []
        for _ in range(self.d):
            out.append(x % MOD)
            x //= MOD
        return tuple(out)

    def add(self, a, b):
        return tuple((x + y) % MOD for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x % MOD for x in a)

    def mul(self, a, b):
        return _poly_mulmod(a, b, self.modulus)

    def scale(self, c: int, a):
        return tuple(c * x % MOD for x in a)

    def pow(self, a, e: int):
        acc, base = self.one(), a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def is_unit(self, a) -> bool:
        return any(c % 2 for c in a)

    @property
    def unit_order(self) -> int:
        return (2 ** self.d - 1) * 4 ** self.d

    def inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit")
        return self.pow(a, self.unit_order - 1)

    def eval_poly(self, coeffs, x):
        """Horner evaluation of an integer-coefficient polynomial at x."""
        acc = self.zero()
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), self.scale(c, self.one()))
        return acc

    def sigma(self, a, times: int = 1):
        """The Frobenius automorphism: x -> frobenius_image, extended Z/8-linearly."""
        for _ in range(times % self.d if self.d else 0):
            a = self.eval_poly(list(a), self.frobenius_image)
        return a

    def reduce2(self, a) -> int:
        """Image in the residue field F_{2^d}, as that field's int encoding."""
        x = 0
        for c in reversed(a):
            x = 2 * x + (c % 2)
        return x

    def lift(self, z: int):
        """Naive lift of a residue field element: coefficients 0/1."""
        return tuple((z >> i) & 1 for i in range(self.d))


def build_galois_ring(d: int) -> GaloisRingSpec:
    if not isinstance(d, int) or not 1 <= d <= MAX_RING_DEGREE:
        raise ParameterError(f"degree d={d!r} outside 1..{MAX_RING_DEGREE}")
    return _build_ring(d)


@lru_cache(maxsize=None)
def _build_ring(d: int) -> GaloisRingSpec:
    modulus = least_irreducible(2, d)
    R = GaloisRingSpec(d, modulus, (0,) * d)
    deriv = [i * c for i, c in enumerate(modulus)][1:]
    x = _x_element(R)
    s = _newton_root(R, modulus, deriv, R.mul(x, x))
    R = GaloisRingSpec(d, modulus, s)
    _check_ring(R)
    return R


def _x_element(R: GaloisRingSpec):
    """The class of x in Z/8[x]/(M)."""
    if R.d == 1:
        return (-R.modulus[0] % MOD,)
    return tuple(1 if i == 1 else 0 for i in range(R.d))


def _newton_root(R, modulus, deriv, start):
    s = start
    for _ in range(3):
        val = R.eval_poly(modulus, s)
        if not any(val):
            break
        s = R.add(s, R.neg(R.mul(val, R.inv(R.eval_poly(deriv, s)))))
    if any(R.eval_poly(modulus, s)):
        raise ConsistencyError("Hensel iteration did not converge")  # pragma: no cover
    return s


def _check_ring(R: GaloisRingSpec) -> None:
    if any(R.eval_poly(R.modulus, R.frobenius_image)):
        raise ConsistencyError("frobenius image is not a root of the modulus")
    x = _x_element(R)
    y = x
    for _ in range(R.d):
        y = R.eval_poly(list(y), R.frobenius_image)
    if y != x:
        raise ConsistencyError("sigma^d does not fix x")


# -- squares in 1 + 2R ---------------------------------------------------------

def square_class_check(R: GaloisRingSpec) -> dict:
    """Squares of 1 + 2R are exactly 1 + 4(z^2 + z); the induced h has index 2 and is trace zero."""
    F = build_field(2, R.d)
    one = R.one()
    principal = [R.add(one, R.scale(2, a)) for a in R.elements()]
    squares = {R.mul(u, u) for u in principal}
    forms = set()
    for z in R.elements():
        forms.add(R.add(one, R.scale(4, R.add(R.mul(z, z), z))))
    image = {F.add(F.mul(z, z), z) for z in F.elements()}
    h = Subspace.span(F, image)
    # h read off the squares: 1 + 4w is a square iff w mod 2 lies in h
    h_squares = Subspace.span(F, [R.reduce2(tuple((c // 4) % 2 for c in R.add(s, R.neg(one))))
                                  for s in squares])
    t = trace_zero_subspace(F, 2)
    report = {
        "d": R.d,
        "squares_match": squares == forms,
        "image_is_subspace": len(image) == h.size,
        "index": F.order // h.size,
        "h_from_squares_matches": h_squares == h,
        "h_is_trace_zero": h == t,
    }
    report["ok"] = (report["squares_match"] and report["image_is_subspace"]
                    and report["index"] == 2 and report["h_from_squares_matches"]
                    and report["h_is_trace_zero"])
    return report


# -- the exhaustive count --------------------------------------------------------

@dataclass
class P2OracleReport:
    nK: int
    r: int
    total: int
    subgroups: int
    per_h: dict = field(default_factory=dict)  # h -> (valid subgroups, fixed cosets each)


class _UnitGroupMod8:
    """(R/8)^x with elements as ints, split as odd part x principal part."""

    def __init__(self, R: GaloisRingSpec):
        self.R = R
        self.units = [R.encode(a) for a in R.elements() if R.is_unit(a)]
        self._mul: dict = {}

    def mul(self, x, y):
        key = (x, y) if x <= y else (y, x)
        z = self._mul.get(key)
        if z is None:
            R = self.R
            z = self._mul[key] = R.encode(R.mul(R.decode(x), R.decode(y)))
        return z

    def sigma(self, x, times=1):
        R = self.R
        return R.encode(R.sigma(R.decode(x), times))

    def mod4(self, x):
        return self.R.encode(tuple(c % 4 for c in self.R.decode(x)))

    def power(self, x, e):
        R = self.R
        return R.encode(R.pow(R.decode(x), e))

    @cached_property
    def identity(self):
        return self.R.encode(self.R.one())

    @cached_property
    def principal(self):
        """1 + 2R."""
        out = []
        for u in self.units:
            c = self.R.decode(u)
            if c[0] % 2 == 1 and all(x % 2 == 0 for x in c[1:]):
                out.append(u)
        return out

    @cached_property
    def odd_part(self):
        """The Teichmuller roots of unity: the image of u -> u^(4^d)."""
        e = 4 ** self.R.d
        return sorted({self.power(u, e) for u in self.units})


def _divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def p2_oracle_report(nK: int, r: int, max_degree: int = DEFAULT_ORACLE_DEGREE) -> P2OracleReport:
    if nK < 1 or r < 1:
        raise ParameterError("nK and r must be positive")
    d = nK * r
    if d > max_degree:
        raise ResourceError(f"ring degree {d} exceeds the cap {max_degree}", max_degree)
    R = build_galois_ring(d)
    U = _UnitGroupMod8(R)
    F = build_field(2, d)
    one = U.identity

    # odd part: cyclic of order 2^d - 1, one subgroup per divisor
    mu = U.odd_part
    gen = next(z for z in mu if len({U.power(z, k) for k in range(len(mu))}) == len(mu))
    odd_subs = [frozenset(U.power(gen, (len(mu) // k) * i) for i in range(k)) for k in _divisors(len(mu))]
    # 2-part: sigma^nK-stable subgroups of 1 + 2R
    period = r
    two_subs = enumerate_subgroups(U.principal, U.mul, one,
                                   act=lambda x: U.sigma(x, nK), period=period)

    target = len({U.mod4(u) for u in U.units})
    all_units = frozenset(U.units)
    total = 0
    count = 0
    tally: Counter = Counter()
    fixed_by_h: dict = {}
    for A in odd_subs:
        if any(U.sigma(x, nK) not in A for x in A):
            continue
        for B in two_subs:
            H = frozenset(U.mul(a, b) for a in A for b in B)
            if len(H) == len(all_units):
                continue
            if len({U.mod4(x) for x in H}) != target:
                continue
            label = coset_partition(U.units, H, U.mul)
            fixed = sum(1 for g, rep in label.items() if g == rep and label[U.sigma(g, nK)] == rep)
            # h: the kernel of reduction mod 4, as a subspace of the residue field
            kernel = [R.reduce2(tuple((c // 4) % 2 for c in R.add(R.decode(x), R.neg(R.one()))))
                      for x in H if U.mod4(x) == one]
            h = Subspace.span(F, kernel)
            total += fixed
            count += 1
            tally[h] += 1
            fixed_by_h.setdefault(h, set()).add(fixed)
    per_h = {h: (tally[h], sorted(fixed_by_h[h])) for h in tally}
    return P2OracleReport(nK, r, total, count, per_h)


def p2_oracle_count(nK: int, r: int, max_degree: int = DEFAULT_ORACLE_DEGREE) -> int:
    return p2_oracle_report(nK, r, max_degree).total
