"""Finite fields F_{p^m} built from scratch.

Elements are plain ints: the base-p digits of an element (least significant
first) are its coefficients in the polynomial basis 1, x, ..., x^{m-1}.
Integer order therefore coincides with lexicographic order on coefficient
vectors read from the top degree down, which is the enumeration order the
subspace and subgroup code relies on for canonical forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import ParameterError

MAX_DEGREE = 16
_TABLE_LIMIT = 256       # full add/mul tables up to this order
_LOG_LIMIT = 1 << 20     # exp/log tables up to this order


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power_exponent(q: int, p: int) -> int | None:
    """Return k with q == p**k, or None if q is not a power of p."""
    if q < 1:
        return None
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return k if q == 1 else None


# -- polynomials over F_p as little-endian coefficient lists ------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a modulo the (nonzero) polynomial b over F_p."""
    a = _trim([c % p for c in a])
    b = _trim(list(b))
    inv_lead = pow(b[-1], -1, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return a


def _monic_polys(degree: int, p: int):
    """Monic polynomials of the given degree, in increasing integer encoding."""
    for low in range(p ** degree):
        coeffs = []
        for _ in range(degree):
            coeffs.append(low % p)
            low //= p
        yield coeffs + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in _monic_polys(d, p):
            if not poly_mod(poly, g, p):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, m: int) -> tuple[int, ...]:
    for poly in _monic_polys(m, p):
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# -- the field ----------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """F_{p^m} presented as F_p[x]/(modulus)."""

    p: int
    m: int
    modulus: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p ** self.m

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})"

    # conversions

    def to_coeffs(self, x: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.m):
            out.append(x % p)
            x //= p
        return out

    def from_coeffs(self, coeffs) -> int:
        x = 0
        for c in reversed(list(coeffs)):
            x = x * self.p + (c % self.p)
        return x

    def check(self, x: int) -> int:
        if not isinstance(x, int) or not 0 <= x < self.order:
            raise ParameterError(f"{x!r} is not an element of {self!r}")
        return x

    # slow reference arithmetic (also used to build the tables)

    def _add_slow(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p, out, place = self.p, 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return out

    def _scale_slow(self, c: int, a: int) -> int:
        c %= self.p
        return self.from_coeffs([c * d for d in self.to_coeffs(a)])

    def _mul_slow(self, a: int, b: int) -> int:
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        rem = poly_mod(prod, list(self.modulus), self.p)
        return self.from_coeffs(rem + [0] * (self.m - len(rem)))

    # fast arithmetic

    @cached_property
    def _add_table(self):
        if self.order > _TABLE_LIMIT:
            return None
        n = self.order
        return [[self._add_slow(a, b) for b in range(n)] for a in range(n)]

    @cached_property
    def _neg_table(self):
        if self.order > 1 << 14:
            return None
        return [self._scale_slow(-1, a) for a in range(self.order)]

    @cached_property
    def _exp_log(self):
        """(exp, log) tables relative to the least primitive element."""
        if self.order > _LOG_LIMIT:
            return None
        n = self.order
        if n == 2:
            return [1], {1: 0}
        cofactors = [(n - 1) // r for r in prime_factors(n - 1)]

        def slow_pow(g, e):
            acc, base = 1, g
            while e:
                if e & 1:
                    acc = self._mul_slow(acc, base)
                base = self._mul_slow(base, base)
                e >>= 1
            return acc

        for g in range(2, n):
            if all(slow_pow(g, c) != 1 for c in cofactors):
                break
        exp = [1] * (n - 1)
        for i in range(1, n - 1):
            exp[i] = self._mul_slow(exp[i - 1], g)
        log = {v: i for i, v in enumerate(exp)}
        return exp, log

    def add(self, a: int, b: int) -> int:
        t = self._add_table
        return t[a][b] if t is not None else self._add_slow(a, b)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        t = self._neg_table
        return t[a] if t is not None else self._scale_slow(-1, a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def scale(self, c: int, a: int) -> int:
        """Multiply a by the prime-field scalar c."""
        return self._scale_slow(c, a)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        el = self._exp_log
        if el is None:
            return self._mul_slow(a, b)
        exp, log = el
        return exp[(log[a] + log[b]) % (self.order - 1)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 0 if e else 1
        el = self._exp_log
        if el is None:
            acc, base = 1, a
            while e:
                if e & 1:
                    acc = self._mul_slow(acc, base)
                base = self._mul_slow(base, base)
                e >>= 1
            return acc
        exp, log = el
        return exp[(log[a] * e) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.order - 2)

    def sum(self, values) -> int:
        acc = 0
        for v in values:
            acc = self.add(acc, v)
        return acc

    # Galois structure

    def frobenius_power(self, x: int, k: int) -> int:
        """x ** (p ** k)."""
        self.check(x)
        if k < 0:
            raise ParameterError("Frobenius exponent must be nonnegative")
        return self.pow(x, pow(self.p, k % self.m) if self.m else 1)

    def relative_degree(self, q: int, f: int | None = None) -> tuple[int, int]:
        """Validate q = p^{f'} with f'*f = m; return (f', f)."""
        fp = prime_power_exponent(q, self.p)
        if fp is None or fp == 0:
            raise ParameterError(f"q={q} is not a positive power of p={self.p}")
        if self.m % fp:
            raise ParameterError(f"F_{q} is not a subfield of {self!r}")
        if f is None:
            f = self.m // fp
        if fp * f != self.m:
            raise ParameterError(f"q^f = {q}^{f} does not match |field| = {self.order}")
        return fp, f

    def relative_trace(self, x: int, q: int, f: int | None = None) -> int:
        """Trace from this field down to its subfield of size q."""
        self.check(x)
        fp, f = self.relative_degree(q, f)
        acc, y = 0, x
        for _ in range(f):
            acc = self.add(acc, y)
            y = self.pow(y, q)
        return acc

    def in_subfield(self, x: int, q: int) -> bool:
        return self.pow(x, q) == x

    def linear_map_matrix(self, fn) -> list[list[int]]:
        """Columns of an F_p-linear map on the polynomial basis, as coefficient lists."""
        return [self.to_coeffs(fn(self.p ** i)) for i in range(self.m)]


def build_field(p: int, m: int) -> FieldSpec:
    """F_{p^m} modulo the least monic irreducible of degree m."""
    if not isinstance(p, int) or not is_prime(p):
        raise ParameterError(f"p={p!r} is not prime")
    if not isinstance(m, int) or not 1 <= m <= MAX_DEGREE:
        raise ParameterError(f"degree m={m!r} outside 1..{MAX_DEGREE}")
    return _build_cached(p, m)


@lru_cache(maxsize=None)
def _build_cached(p: int, m: int) -> FieldSpec:
    return FieldSpec(p, m, least_irreducible(p, m))


def frobenius_power(x: int, spec: FieldSpec, k: int) -> int:
    return spec.frobenius_power(x, k)


def relative_trace(x: int, spec: FieldSpec, q: int, f: int) -> int:
    return spec.relative_trace(x, q, f)
