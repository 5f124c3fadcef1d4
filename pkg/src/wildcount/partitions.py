"""Partition-indexed coefficients of the truncated formal logarithm.

The coefficient of T^n in log(1 + sum a_i T^i) is a polynomial in a_1..a_n
whose monomials are indexed by partitions of n.  ``rn_table`` stores it in
that indexed form using the closed partition formula (sign convention
(-1)^len); ``truncated_log`` computes the same series directly by composing
the Mercator series, and serves as the independent check on the table.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

from .errors import BranchError, ParameterError
from .ff import FieldSpec, prime_factors

MAX_N = 20


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ParameterError(f"parts {self.parts} are not non-increasing")
        if any(a <= 0 for a in self.parts):
            raise ParameterError("parts must be positive")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def multiplicities(self) -> tuple[int, ...]:
        """Exponent vector (#1s, #2s, ..., #ns); this is the monomial the part indexes."""
        c = Counter(self.parts)
        return tuple(c.get(i, 0) for i in range(1, self.n + 1))

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.parts)) + "}"


def _check_n(n: int, limit: int = MAX_N) -> None:
    if not isinstance(n, int) or not 1 <= n <= limit:
        raise ParameterError(f"n={n!r} outside 1..{limit}")


def _partitions(n: int, largest: int):
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of n, largest first part first ({n}, ..., {1,...,1})."""
    _check_n(n)
    return tuple(Partition(p) for p in _partitions(n, n))


def partition_stats(part: Partition) -> tuple[int, int]:
    """(number of parts, number of distinct orderings of the parts)."""
    length = len(part.parts)
    perms = factorial(length)
    for mult in Counter(part.parts).values():
        perms //= factorial(mult)
    return length, perms


@dataclass(frozen=True)
class LogCoefficientTable:
    n: int
    terms: dict  # Partition -> Fraction

    def evaluate(self, xs) -> Fraction:
        """Evaluate at x_1..x_n (any ring elements supporting * and +)."""
        if len(xs) < self.n:
            raise ParameterError(f"need {self.n} arguments, got {len(xs)}")
        total = Fraction(0)
        for part, coef in self.terms.items():
            total += coef * prod(xs[i - 1] for i in part.parts)
        return total

    def monomials(self) -> dict:
        """Exponent-vector keyed copy of the table."""
        return {part.multiplicities(): c for part, c in self.terms.items()}


@lru_cache(maxsize=None)
def rn_table(n: int) -> LogCoefficientTable:
    _check_n(n)
    terms = {}
    for part in enumerate_partitions(n):
        length, perms = partition_stats(part)
        terms[part] = Fraction((-1) ** length * perms, length)
    return LogCoefficientTable(n, terms)


# -- the series oracle --------------------------------------------------------

@dataclass(frozen=True)
class TruncatedSeries:
    """c_1..c_N of 1 + sum c_i T^i (a unit) or sum c_i T^i (a logarithm)."""

    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @classmethod
    def of(cls, values, order: int | None = None) -> "TruncatedSeries":
        vals = [Fraction(v) if isinstance(v, (int, Fraction)) else v for v in values]
        if order is not None:
            vals = (vals + [Fraction(0)] * order)[:order]
        return cls(tuple(vals))


def _series_mul(a: list, b: list, order: int, zero) -> list:
    """Product of two series with no constant term, truncated at T^order."""
    out = [zero] * order
    for i, x in enumerate(a):
        for j in range(order - i - 1):
            y = b[j]
            out[i + j + 1] = out[i + j + 1] + x * y
    return out


def truncated_log(u: TruncatedSeries, N: int) -> TruncatedSeries:
    """log(u) up to T^N via sum_{k>=1} (-1)^{k+1} (u-1)^k / k.

    Coefficients may be Fractions or any commutative ring elements that
    support +, * and multiplication by a Fraction (e.g. ``MPoly``).
    """
    _check_n(N)
    zero = u.coeffs[0] * 0 if u.coeffs else Fraction(0)
    w = list(u.coeffs[:N]) + [zero] * max(0, N - u.order)
    out = [zero] * N
    power = list(w)
    for k in range(1, N + 1):
        scale = Fraction((-1) ** (k + 1), k)
        out = [o + c * scale for o, c in zip(out, power)]
        power = _series_mul(power, w, N, zero)
    return TruncatedSeries(tuple(out))


def z_convolve(x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
    """Coefficients of (1 + sum x_i T^i)(1 + sum y_i T^i), truncated at the common order."""
    if x.order != y.order:
        raise ParameterError(f"orders differ: {x.order} vs {y.order}")
    a, b = x.coeffs, y.coeffs
    z = []
    for i in range(x.order):
        acc = a[i] + b[i]
        for j in range(i):
            acc = acc + a[j] * b[i - 1 - j]
        z.append(acc)
    return TruncatedSeries(tuple(z))


class MPoly:
    """Sparse multivariate polynomial with Fraction coefficients.

    Keys are exponent tuples; only what ``truncated_log`` needs is provided.
    """

    __slots__ = ("terms", "nvars")

    def __init__(self, terms=None, nvars=0):
        self.terms = {k: v for k, v in (terms or {}).items() if v}
        self.nvars = nvars

    @classmethod
    def var(cls, i: int, nvars: int) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): Fraction(1)}, nvars)

    def __add__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return MPoly(out, max(self.nvars, other.nvars))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MPoly({k: v * other for k, v in self.terms.items()}, self.nvars)
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return MPoly(out, self.nvars)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.terms == other.terms

    def __repr__(self):
        return f"MPoly({self.terms!r})"


def generic_log_coefficients(n: int) -> dict:
    """Exponent-vector -> coefficient of T^n in log(1 + sum a_i T^i), a_1..a_n symbolic."""
    _check_n(n)
    gens = [MPoly.var(i, n) for i in range(n)]
    series = truncated_log(TruncatedSeries(tuple(gens)), n)
    return dict(series.coeffs[n - 1].terms)


def log_sign_relation(max_n: int = 12) -> int:
    """The constant eps with rn_table(n) == eps * generic log coefficients for all n <= max_n.

    Raises AssertionError if no single constant works.
    """
    eps = None
    for n in range(1, max_n + 1):
        table = rn_table(n).monomials()
        generic = generic_log_coefficients(n)
        if set(table) != set(generic):
            raise AssertionError(f"monomial supports differ at n={n}")
        for mono, c in table.items():
            ratio = c / generic[mono]
            if eps is None:
                eps = ratio
            if ratio != eps or abs(ratio) != 1:
                raise AssertionError(f"no global sign at n={n}, monomial {mono}: ratio {ratio}")
    return int(eps)


LOG_SIGN = -1  # rn_table's (-1)^len convention is the negated Mercator expansion


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 7))


def check_rn_additivity(n: int, trials: int = 100, seed: int = 0) -> bool:
    """r_n(x) + r_n(y) == r_n(x * y) exactly, at corner points plus seeded random rationals."""
    _check_n(n, 12)
    table = rn_table(n)
    rng = random.Random(seed)
    zero = [Fraction(0)] * n
    points = [(zero, zero)]
    for _ in range(trials):
        x = [_random_rational(rng) for _ in range(n)]
        y = [_random_rational(rng) for _ in range(n)]
        points.append((x, y))
        points.append((x, list(x)))
        points.append((x, zero))
    for x, y in points:
        z = z_convolve(TruncatedSeries(tuple(x)), TruncatedSeries(tuple(y))).coeffs
        if table.evaluate(x) + table.evaluate(y) != table.evaluate(z):
            return False
    return True


def integrality_certificate(n: int) -> dict:
    """Factor every reduced denominator of rn_table(n); certify support within primes(n)."""
    allowed = set(prime_factors(n))
    rows = []
    ok = True
    for part, coef in rn_table(n).terms.items():
        primes = prime_factors(coef.denominator) if coef.denominator > 1 else []
        good = set(primes) <= allowed
        ok = ok and good
        rows.append({"partition": str(part), "coefficient": str(coef),
                     "denominator": coef.denominator, "primes": primes, "ok": good})
    return {"n": n, "allowed_primes": sorted(allowed), "ok": ok,
            "max_denominator": max(r["denominator"] for r in rows), "terms": rows}


# -- reduction to F_p ---------------------------------------------------------

@dataclass(frozen=True)
class ModPTable:
    """r_n with its {n} term removed, coefficients reduced mod p."""

    n: int
    p: int
    terms: dict  # Partition -> int in [0, p)

    def evaluate(self, field: FieldSpec, xs) -> int:
        """Evaluate on field elements x_1..x_{n-1}."""
        acc = 0
        for part, c in self.terms.items():
            if not c:
                continue
            mono = 1
            for i in part.parts:
                mono = field.mul(mono, xs[i - 1])
            acc = field.add(acc, field.scale(c, mono))
        return acc

    def negated(self) -> "ModPTable":
        return ModPTable(self.n, self.p, {k: (-c) % self.p for k, c in self.terms.items()})


def g_mod_p(n: int, p: int) -> ModPTable:
    _check_n(n)
    if n % p == 0:
        raise BranchError(f"p={p} divides n={n}; no reduction mod p exists")
    terms = {}
    for part, coef in rn_table(n).terms.items():
        if part.parts == (n,):
            continue
        terms[part] = coef.numerator * pow(coef.denominator, -1, p) % p
    return ModPTable(n, p, terms)
