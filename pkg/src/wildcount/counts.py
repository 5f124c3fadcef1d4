"""Closed-form counts of (-1, n) extensions, with branch dispatch.

Every formula is evaluated in exact rationals; a non-integral total is a
ConsistencyError rather than something to round.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .equivariant import b_exponent
from .errors import BranchError, ConsistencyError, ParameterError
from .ff import build_field, is_prime, prime_factors
from .subspaces import DEFAULT_SUBSPACE_CAP, enumerate_invariant_subspaces, trace_zero_subspace

__all__ = [
    "QueryParams", "CountResult", "ZetaData", "b_exponent", "main_sum_count",
    "cyclotomic_factor_degrees", "printed_closed_form", "divisor_sum_specialization",
    "unramified_p2_count", "dispatch", "BRANCHES",
]

# branch labels, one per clause of the case analysis
MAIN_SUM = "main-sum"
P_DIVIDES_N = "p-divides-n"
SMALL_E = "small-e-zero"
P2_UNRAMIFIED = "p2-unramified"
OPEN_REGION = "open-region"
PRINTED = "printed-closed-form"
DIVISOR_SUM = "divisor-sum"
BRANCHES = (MAIN_SUM, P_DIVIDES_N, SMALL_E, P2_UNRAMIFIED, OPEN_REGION)

STATUSES = ("count", "zero", "out_of_range")


@dataclass(frozen=True, order=True)
class QueryParams:
    p: int
    e: int
    f_base: int
    n: int
    f: int

    def __post_init__(self):
        for name in ("p", "e", "f_base", "n", "f"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ParameterError(f"{name}={v!r} must be a positive integer")
        if not is_prime(self.p):
            raise ParameterError(f"p={self.p} is not prime")

    def as_dict(self) -> dict:
        return {"p": self.p, "e": self.e, "f_base": self.f_base, "n": self.n, "f": self.f}


def _value_to_json(v):
    if v is None or isinstance(v, int):
        return v
    return str(v)


def _value_from_json(v):
    if v is None or isinstance(v, int):
        return v
    fr = Fraction(v)
    return fr.numerator if fr.denominator == 1 else fr


@dataclass(frozen=True)
class CountResult:
    status: str
    value: int | Fraction | None
    branch: str
    params: QueryParams | None = None
    engine: str = "formula"
    flags: tuple[str, ...] = ()
    details: dict = field(default_factory=dict, compare=True)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ParameterError(f"unknown status {self.status!r}")
        if self.status == "zero" and self.value != 0:
            raise ConsistencyError("zero status must carry value 0")
        if self.status == "out_of_range" and self.value is not None:
            raise ConsistencyError("out_of_range carries no value")
        object.__setattr__(self, "flags", tuple(sorted(set(self.flags))))

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "value": _value_to_json(self.value),
            "branch": self.branch,
            "params": self.params.as_dict() if self.params else None,
            "engine": self.engine,
            "flags": list(self.flags),
            "details": self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "CountResult":
        params = QueryParams(**d["params"]) if d.get("params") else None
        return cls(d["status"], _value_from_json(d["value"]), d["branch"], params,
                   d.get("engine", "formula"), tuple(d.get("flags", ())), dict(d.get("details", {})))

    @classmethod
    def from_json(cls, s: str) -> "CountResult":
        return cls.from_dict(json.loads(s))


def _zero(params, branch, **details) -> CountResult:
    return CountResult("zero", 0, branch, params, details=details)


# -- the main sum --------------------------------------------------------------

def main_sum_terms(params: QueryParams, cap: int = DEFAULT_SUBSPACE_CAP) -> tuple[int, dict]:
    """(q^{bf'f+1}, {h: |h ∩ t| / |h|^{bf'+1}}) over the q-stable subspaces h of k0."""
    p, fb, f, n = params.p, params.f_base, params.f, params.n
    spec = build_field(p, fb * f)
    q = p ** fb
    b = b_exponent(n, p)
    t = trace_zero_subspace(spec, q)
    terms = {}
    for h in enumerate_invariant_subspaces(spec, q, cap=cap):
        terms[h] = Fraction(h.intersect(t).size, h.size ** (b * fb + 1))
    return q ** (b * fb * f + 1), terms


def main_sum_count(params: QueryParams, cap: int = DEFAULT_SUBSPACE_CAP) -> CountResult:
    if params.e < params.n:
        raise BranchError("the main sum needs e >= n")
    if params.n % params.p == 0:
        return _zero(params, P_DIVIDES_N)
    scale, terms = main_sum_terms(params, cap)
    total = scale * sum(terms.values(), Fraction(0))
    if total.denominator != 1:
        raise ConsistencyError(f"main sum evaluates to the non-integer {total}")
    full = next(h for h in terms if h.codim == 0)
    full_term = scale * terms[full]
    if full_term.denominator != 1:
        raise ConsistencyError(f"the h = k0 term {full_term} is not an integer")
    value = int(total)
    return CountResult("count", value, MAIN_SUM, params,
                       flags=("includes-full-subgroup-term",),
                       details={"subspaces": len(terms), "full_term": int(full_term),
                                "proper_count": value - int(full_term)})


# -- divisor data of x^f - 1 ----------------------------------------------------

def _mult_order(p: int, d: int) -> int:
    if d == 1:
        return 1
    k, x = 1, p % d
    while x != 1:
        x = x * p % d
        k += 1
    return k


def _phi(d: int) -> int:
    out = d
    for r in prime_factors(d):
        out = out // r * (r - 1)
    return out


@dataclass(frozen=True)
class ZetaData:
    """Irreducible factors of x^f - 1 over F_p, and divisor counts of m = (x^f-1)/(x-1)^{p^a}."""

    p: int
    f: int
    factors: tuple[tuple[int, int], ...]  # (degree, multiplicity), one entry per irreducible
    m_factors: tuple[tuple[int, int], ...]
    a: tuple[int, ...]  # a[i] = number of monic degree-i divisors of m
    unipotent_mult: int  # p^a, the multiplicity of x - 1

    @property
    def d(self) -> int:
        return len(self.a) - 1

    def zeta(self, s: int) -> Fraction:
        return sum((Fraction(c, self.p ** (i * s)) for i, c in enumerate(self.a)), Fraction(0))


def cyclotomic_factor_degrees(p: int, f: int) -> ZetaData:
    if not is_prime(p):
        raise ParameterError(f"p={p} is not prime")
    if not 1 <= f <= 64:
        raise ParameterError(f"f={f} outside 1..64")
    a_exp, f0 = 0, f
    while f0 % p == 0:
        f0 //= p
        a_exp += 1
    mult = p ** a_exp
    factors = []
    for d in range(1, f0 + 1):
        if f0 % d:
            continue
        o = _mult_order(p, d)
        factors += [(o, mult)] * (_phi(d) // o)
    m_factors = factors[1:]  # the d = 1 entry is x - 1
    poly = [1]
    for deg, mu in m_factors:
        step = [0] * (deg * mu + 1)
        for k in range(mu + 1):
            step[k * deg] = 1
        out = [0] * (len(poly) + len(step) - 1)
        for i, x in enumerate(poly):
            if x:
                for j, y in enumerate(step):
                    out[i + j] += x * y
        poly = out
    return ZetaData(p, f, tuple(factors), tuple(m_factors), tuple(poly), mult)


def _check_specialization_branch(params: QueryParams) -> None:
    if params.f_base != 1:
        raise BranchError("the totally ramified specialization needs f' = 1")
    if params.e < params.n:
        raise BranchError("needs e >= n")
    if params.n % params.p == 0:
        raise BranchError("needs p not dividing n")


def printed_closed_form(params: QueryParams) -> CountResult:
    """The printed closed form, evaluated verbatim (the value may fail to be an integer)."""
    _check_specialization_branch(params)
    p, f = params.p, params.f
    b = b_exponent(params.n, p)
    if b == 0:
        raise BranchError("the printed form divides by p^b - 1 = 0 at n = 1")
    z = cyclotomic_factor_degrees(p, f)
    num = p ** ((f + 1) * b) - p ** (f * b) + p ** ((f - 1) * b + 1) - p ** (z.d * b + 1)
    val = Fraction(num, p ** b - 1) * z.zeta(b)
    value = val.numerator if val.denominator == 1 else val
    flags = () if val.denominator == 1 else ("non-integer",)
    return CountResult("count", value, PRINTED, params, flags=flags,
                       details={"b": b, "d": z.d, "zeta": str(z.zeta(b))})


def divisor_sum_specialization(params: QueryParams) -> CountResult:
    """p^{bf+1} sum over monic divisors g of x^f - 1 of |h_g ∩ t| / |h_g|^{b+1}."""
    _check_specialization_branch(params)
    p, f = params.p, params.f
    b = b_exponent(params.n, p)
    z = cyclotomic_factor_degrees(p, f)
    total = Fraction(0)
    for j in range(z.unipotent_mult + 1):
        for i, count in enumerate(z.a):
            size = p ** (f - j - i)
            inter = size if j >= 1 else Fraction(size, p)
            total += count * Fraction(inter) / size ** (b + 1)
    total *= p ** (b * f + 1)
    if total.denominator != 1:
        raise ConsistencyError(f"divisor sum evaluates to the non-integer {total}")
    return CountResult("count", int(total), DIVISOR_SUM, params)


def unramified_p2_count(params_or_fbase) -> CountResult:
    """2^{f'+1}, for p = 2, e = 1, n = 2, whatever the inertia degree f."""
    if isinstance(params_or_fbase, QueryParams):
        params = params_or_fbase
        if (params.p, params.e, params.n) != (2, 1, 2):
            raise BranchError("needs p = 2, e = 1, n = 2")
        f_base = params.f_base
    else:
        params, f_base = None, params_or_fbase
        if not isinstance(f_base, int) or f_base < 1:
            raise ParameterError("f_base must be a positive integer")
    return CountResult("count", 2 ** (f_base + 1), P2_UNRAMIFIED, params)


def dispatch(params: QueryParams, cap: int = DEFAULT_SUBSPACE_CAP) -> CountResult:
    p, e, n = params.p, params.e, params.n
    if e >= n:
        if n % p == 0:
            return _zero(params, P_DIVIDES_N)
        return main_sum_count(params, cap)
    if p > e + 1:
        return _zero(params, SMALL_E)
    if (p, e, n) == (2, 1, 2):
        return unramified_p2_count(params)
    return CountResult("out_of_range", None, OPEN_REGION, params)


def region(params: QueryParams) -> str:
    """The branch dispatch would take, without evaluating anything."""
    p, e, n = params.p, params.e, params.n
    if e >= n:
        return P_DIVIDES_N if n % p == 0 else MAIN_SUM
    if p > e + 1:
        return SMALL_E
    if (p, e, n) == (2, 1, 2):
        return P2_UNRAMIFIED
    return OPEN_REGION

