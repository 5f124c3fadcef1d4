"""Verification suites: every check cross-validates two independent computations.

Each check returns a ``Check`` record (name, passed, measured values,
runtime).  The CLI's ``verify`` subcommand and the acceptance tests both
run these.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from itertools import product

from .counts import (BRANCHES, OPEN_REGION, P_DIVIDES_N, SMALL_E, QueryParams, printed_closed_form,
                     cyclotomic_factor_degrees, dispatch, divisor_sum_specialization, region,
                     main_sum_count)
from .equivariant import (DEFAULT_BUDGET, FunctionalEquationInstance, canonical_witness,
                          squares_pair_count, squares_related, equivariant_brute_count, equivariant_closed_count,
                          within_budget)
from .errors import BranchError, WildcountError
from .ff import build_field
from .galois_ring import build_galois_ring, square_class_check, p2_oracle_report
from .oracle import enumerate_valid_subgroups, fiber_assemble, fiber_extract, oracle_total_count
from .partitions import check_rn_additivity, integrality_certificate, log_sign_relation
from .subspaces import (cross_sum_closed_form, cross_sum_residue, enumerate_all_subspaces,
                        enumerate_invariant_subspaces, fixed_coset_count, lt_trace_basis,
                        verify_trace_basis)

DEFAULT_SEED = 0


@dataclass
class Check:
    name: str
    passed: bool
    measured: dict = field(default_factory=dict)
    runtime: float = 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["status"] = "pass" if self.passed else "fail"
        d["runtime"] = round(self.runtime, 3)
        return d


def _run(name, fn, *args, **kwargs) -> Check:
    t0 = time.perf_counter()
    try:
        passed, measured = fn(*args, **kwargs)
    except WildcountError as exc:
        passed, measured = False, {"error": f"{type(exc).__name__}: {exc}"}
    return Check(name, bool(passed), measured, time.perf_counter() - t0)


# -- partition-log --------------------------------------------------------------

def log_sign_check(max_n: int = 12):
    try:
        eps = log_sign_relation(max_n)
    except AssertionError as exc:
        return False, {"error": str(exc)}
    return eps in (1, -1), {"epsilon": eps, "max_n": max_n}


def integrality_check(max_n: int = 20):
    bad = [n for n in range(1, max_n + 1) if not integrality_certificate(n)["ok"]]
    return not bad, {"max_n": max_n, "failures": bad}


def additivity_check(max_n: int = 12, trials: int = 100, seed: int = DEFAULT_SEED):
    bad = [n for n in range(1, max_n + 1) if not check_rn_additivity(n, trials, seed)]
    return not bad, {"max_n": max_n, "trials": trials, "seed": seed, "failures": bad}


# -- ff-core ---------------------------------------------------------------------

def field_axioms_check(max_order: int = 27):
    """Exhaustive ring axioms, inverses and Frobenius order on every field of order <= max_order."""
    failures = []
    fields = [(p, m) for p in (2, 3, 5, 7) for m in range(1, 6) if p ** m <= max_order]
    for p, m in fields:
        F = build_field(p, m)
        els = list(F.elements())
        ok = all(F.mul(a, F.inv(a)) == 1 for a in els[1:])
        ok = ok and all(F.add(a, F.neg(a)) == 0 for a in els)
        ok = ok and all(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
                        and F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
                        for a in els for b in els for c in els)
        ok = ok and all(F.frobenius_power(a, m) == a for a in els)
        if not ok:
            failures.append((p, m))
    return not failures, {"fields": len(fields), "failures": failures}


# -- invariant-subspaces -----------------------------------------------------------

def _gaussian_total(p: int, m: int) -> int:
    """Number of subspaces of F_p^m, by Gaussian binomials."""
    total = 0
    for k in range(m + 1):
        num = den = 1
        for i in range(k):
            num *= p ** (m - i) - 1
            den *= p ** (i + 1) - 1
        total += num // den
    return total


def subspace_count_check():
    rows = []
    for p, m in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 2)]:
        F = build_field(p, m)
        rows.append((p, m, len(enumerate_all_subspaces(F)), _gaussian_total(p, m)))
    return all(a == b for *_, a, b in rows), {"rows": rows}


def trace_basis_check(seed: int = DEFAULT_SEED):
    failures, count = [], 0
    for p, max_k in ((2, 10), (3, 6)):
        for k in range(1, max_k + 1):
            F = build_field(p, k)
            for kp in range(1, k + 1):
                if k % kp:
                    continue
                tb = lt_trace_basis(F, p ** kp, seed=seed)
                count += 1
                if not verify_trace_basis(F, tb):
                    failures.append((p, k, kp))
    return not failures, {"instances": count, "failures": failures}


def cross_sum_check(max_degree: int = 10):
    failures, count = [], 0
    for k in range(2, max_degree + 1):
        F = build_field(2, k)
        for r in range(1, k):
            if k % r:
                continue
            m = k // r
            if m < 2:
                continue
            q = 2 ** r
            for alpha in F.elements():
                count += 1
                if cross_sum_residue(alpha, F, q, m) != cross_sum_closed_form(alpha, F, q, m):
                    failures.append((k, r, alpha))
    return not failures, {"evaluations": count, "failures": failures[:10]}


def fixed_coset_check(max_order: int = 81):
    count = 0
    for p in (2, 3, 5, 7):
        for m in range(1, 7):
            if p ** m > max_order:
                break
            F = build_field(p, m)
            for fp in range(1, m + 1):
                if m % fp:
                    continue
                for h in enumerate_invariant_subspaces(F, p ** fp):
                    fixed_coset_count(F, h, p ** fp, mode="both")  # raises on mismatch
                    count += 1
    return True, {"instances": count}


# -- equivariant-solver ------------------------------------------------------------

def equivariant_grid_check(budget: int = DEFAULT_BUDGET):
    ran, refused, failures, zeros = 0, 0, [], 0
    for p, n, m in product((2, 3, 5), (2, 3, 4), (1, 2)):
        F = build_field(p, m)
        for q in sorted({p, p ** m}):
            for h in enumerate_invariant_subspaces(F, q):
                inst = FunctionalEquationInstance(F, q, n, h)
                if not within_budget(inst, budget):
                    refused += 1
                    continue
                got = equivariant_brute_count(inst, budget)
                want = equivariant_closed_count(p, n, q, h.codim)
                ran += 1
                if n % p == 0 and h.codim:
                    zeros += 1
                if got != want:
                    failures.append({"p": p, "n": n, "m": m, "q": q, "dim_h": h.dim,
                                     "brute": got, "closed": want})
    return not failures and zeros > 0, {"ran": ran, "refused": refused,
                                        "p_divides_n_instances": zeros, "failures": failures}


def witness_check(seed: int = DEFAULT_SEED):
    failures, count = [], 0
    for p, n, m in product((2, 3, 5), (2, 3, 4, 5), (1, 2)):
        if n % p == 0 or (p ** m) ** (n - 1) > 4096:
            continue
        F = build_field(p, m)
        h = enumerate_invariant_subspaces(F, p)[0]
        w = canonical_witness(FunctionalEquationInstance(F, p, n, h))
        count += 1
        samples = None if F.order ** (n - 1) <= 512 else 20_000
        if not (w.satisfies_relation(samples, seed) and w.is_equivariant()):
            failures.append((p, n, m))
    return not failures, {"instances": count, "failures": failures}


def squares_pair_check(node_budget: int = DEFAULT_BUDGET):
    failures, pairs, unrelated = [], 0, 0
    for m in (2, 3):
        F = build_field(2, m)
        subs = enumerate_all_subspaces(F)
        for h, hp in product(subs, subs):
            closed = squares_pair_count(F, h, hp, "closed")
            brute = squares_pair_count(F, h, hp, "brute", node_budget)
            pairs += 1
            if not squares_related(h, hp):
                unrelated += 1
                if closed != 0:
                    failures.append((m, h.basis, hp.basis, "unrelated pair nonzero"))
            if closed != brute:
                failures.append((m, h.basis, hp.basis, closed, brute))
    return not failures and unrelated > 0, {"pairs": pairs, "unrelated_pairs": unrelated,
                                            "failures": failures}


# -- truncated-units-oracle ---------------------------------------------------------

# (p, [k0 : F_p], n); q runs over every subfield
FIBER_POINTS = ((3, 1, 2), (2, 1, 3), (2, 2, 3), (5, 1, 2), (3, 2, 2), (2, 1, 4),
                (5, 1, 3), (3, 1, 3), (3, 1, 4), (2, 1, 2), (2, 2, 2))


def fiber_correspondence_check(points=FIBER_POINTS):
    failures, subgroups, rows = [], 0, []
    for p, m, n in points:
        F = build_field(p, m)
        for fp in range(1, m + 1):
            if m % fp:
                continue
            q = p ** fp
            valid = enumerate_valid_subgroups(n, F, q, include_full=True)
            tally: dict = {}
            for H in valid:
                fd = fiber_extract(H)
                if fiber_assemble(fd, n, q) != H:
                    failures.append({"point": (p, m, n, q), "subgroup": H.generators})
                tally[fd.h] = tally.get(fd.h, 0) + 1
                subgroups += 1
            for h in enumerate_invariant_subspaces(F, q):
                got, want = tally.get(h, 0), equivariant_closed_count(p, n, q, h.codim)
                if got != want:
                    failures.append({"point": (p, m, n, q), "dim_h": h.dim, "subgroups": got,
                                     "closed": want})
            rows.append((p, m, n, q, len(valid)))
    return not failures, {"points": rows, "subgroups": subgroups, "failures": failures}


# (p, f', f, n), all with e >= n
ORACLE_POINTS = ((3, 1, 1, 2), (5, 1, 1, 2), (3, 1, 2, 2), (2, 1, 1, 3), (2, 1, 2, 3))
FORMULA_REFERENCE = {(3, 1, 1, 2): 10, (5, 1, 1, 2): 26, (3, 1, 2, 2): 40, (2, 1, 1, 3): 5}


def oracle_delta_check(points=ORACLE_POINTS):
    rows, deltas, failures = [], set(), []
    for p, fb, f, n in points:
        formula = main_sum_count(QueryParams(p, n, fb, n, f)).value
        off = oracle_total_count(p, fb, f, n, include_full=False)
        on = oracle_total_count(p, fb, f, n, include_full=True)
        ref = FORMULA_REFERENCE.get((p, fb, f, n))
        deltas.add(formula - off)
        if on != formula:
            failures.append(("include_full mismatch", (p, fb, f, n), formula, on))
        if ref is not None and ref != formula:
            failures.append(("reference mismatch", (p, fb, f, n), ref, formula))
        rows.append({"point": (p, fb, f, n), "formula": formula, "oracle_proper": off,
                     "oracle_full": on, "delta": formula - off})
    single = len(deltas) == 1 and deltas <= {0, 1}
    return single and not failures, {"delta": sorted(deltas), "rows": rows, "failures": failures}


# -- galois-ring-oracle --------------------------------------------------------------

P2_POINTS = ((1, 1), (1, 2), (2, 1), (1, 3), (3, 1))


def square_class_suite(max_degree: int = 3):
    reports = [square_class_check(build_galois_ring(d)) for d in range(1, max_degree + 1)]
    return all(r["ok"] for r in reports), {"reports": reports}


def p2_oracle_check(points=P2_POINTS):
    rows = []
    for nK, r in points:
        rep = p2_oracle_report(nK, r)
        rows.append({"nK": nK, "r": r, "oracle": rep.total, "formula": 2 ** (nK + 1),
                     "subgroups": rep.subgroups,
                     "per_h": {str(h.basis): list(v) for h, v in rep.per_h.items()}})
    ok = all(row["oracle"] == row["formula"] for row in rows)
    by_r = {row["r"]: row["oracle"] for row in rows if row["nK"] == 1}
    independent = len(set(by_r.values())) == 1
    return ok and independent, {"rows": rows, "r_independent": independent}


# -- count-engine ---------------------------------------------------------------------

def printed_form_check():
    """Divisor-sum = main sum (pass criterion); the printed form is compared and reported."""
    rows, failures = [], []
    for p, f, n in product((2, 3, 5), range(1, 7), range(1, 5)):
        if n % p == 0:
            continue
        params = QueryParams(p, n, 1, n, f)
        main = main_sum_count(params).value
        div = divisor_sum_specialization(params).value
        try:
            printed = printed_closed_form(params).value
        except BranchError as exc:
            printed = f"undefined: {exc}"
        if div != main:
            failures.append((p, f, n, main, div))
        rows.append({"p": p, "f": f, "n": n, "main_sum": main, "divisor_sum": div,
                     "printed": str(printed), "printed_matches": printed == main})
    mismatches = sum(1 for r in rows if not r["printed_matches"])
    return not failures, {"points": len(rows), "printed_mismatches": mismatches,
                          "failures": failures, "rows": rows}


def zeta_check():
    failures = []
    for p, f in product((2, 3, 5, 7), range(1, 65)):
        z = cyclotomic_factor_degrees(p, f)
        total_deg = sum(d * mult for d, mult in z.factors)
        divisors = 1
        for _, mult in z.m_factors:
            divisors *= mult + 1
        if total_deg != f or z.a[0] != 1 or sum(z.a) != divisors:
            failures.append((p, f))
    return not failures, {"failures": failures}


def dispatch_check():
    fired, failures = {b: 0 for b in BRANCHES}, []
    for p, e, fb, n, f in product((2, 3, 5, 7), range(1, 6), (1, 2), range(1, 7), (1, 2)):
        params = QueryParams(p, e, fb, n, f)
        branch = region(params)
        fired[branch] += 1
        residual = e < n and p <= e + 1 and (p, e, n) != (2, 1, 2)
        if (branch == OPEN_REGION) != residual:
            failures.append(params.as_dict())
        if branch in (P_DIVIDES_N, SMALL_E):
            res = dispatch(params)
            if res.status != "zero" or res.value != 0:
                failures.append(params.as_dict())
        if branch == OPEN_REGION and dispatch(params).status != "out_of_range":
            failures.append(params.as_dict())
    return not failures and all(fired.values()), {"branch_counts": fired, "failures": failures}


# -- suites ---------------------------------------------------------------------------

def _suite_table(seed: int):
    return {
        "partition-log": [("log_sign", log_sign_check, {}),
                          ("integrality", integrality_check, {}),
                          ("additivity", additivity_check, {"seed": seed})],
        "ff": [("field_axioms", field_axioms_check, {})],
        "subspaces": [("subspace_counts", subspace_count_check, {}),
                      ("trace_basis", trace_basis_check, {"seed": seed}),
                      ("cross_sum", cross_sum_check, {}),
                      ("fixed_cosets", fixed_coset_check, {})],
        "equivariant": [("equivariant_grid", equivariant_grid_check, {}),
                        ("witness", witness_check, {"seed": seed}),
                        ("squares_refinement", squares_pair_check, {})],
        "oracle": [("fiber_correspondence", fiber_correspondence_check, {}),
                   ("formula_vs_oracle", oracle_delta_check, {})],
        "galois-ring": [("square_classes", square_class_suite, {}),
                        ("unramified_p2_count", p2_oracle_check, {})],
        "counts": [("zeta_data", zeta_check, {}),
                   ("printed_form_comparison", printed_form_check, {}),
                   ("dispatch_totality", dispatch_check, {})],
    }


SUITES = tuple(_suite_table(0)) + ("all",)


def run_suite(name: str, seed: int = DEFAULT_SEED):
    """Yield Check records for the named suite ("all" runs every suite)."""
    table = _suite_table(seed)
    if name == "all":
        names = list(table)
    elif name in table:
        names = [name]
    else:
        raise KeyError(name)
    for suite in names:
        for check_name, fn, kwargs in table[suite]:
            yield _run(f"{suite}/{check_name}", fn, **kwargs)

