"""Acceptance criteria, each with its time limit.

Every test prints one line "criterion N: PASS|FAIL ..." even under pytest's
output capture.  Run directly (python tests/test_acceptance.py) for the same
lines without pytest.
"""

import io
import json
import sys
import tempfile
import time
from pathlib import Path

import pytest

from wildcount import cli, verify
from wildcount.counts import CountResult


def report(capsys, n, check_results, limit, extra=""):
    """Print the criterion line and return whether it passed."""
    runtime = sum(c.runtime for c in check_results)
    ok = all(c.passed for c in check_results) and runtime < limit
    names = ", ".join(f"{c.name}={'ok' if c.passed else 'FAIL'}" for c in check_results)
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({runtime:.1f}s < {limit}s; {names}){extra}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    for c in check_results:
        assert c.passed, c.measured
    assert runtime < limit, f"{runtime:.1f}s exceeds {limit}s"
    return ok


def timed(name, fn):
    t0 = time.perf_counter()
    try:
        passed, measured = fn()
    except AssertionError as exc:
        passed, measured = False, {"error": str(exc)}
    return verify.Check(name, passed, measured, time.perf_counter() - t0)


# -- CLI contract checks -------------------------------------------------------------

def _cli(*argv):
    buf = io.StringIO()
    return cli.main(list(argv), out=buf), buf.getvalue()


def cli_json_roundtrip():
    outs = []
    for argv in (("count", "--p", "3", "--jump", "2", "--inertia", "2"),
                 ("count", "--p", "3", "--jump", "3"),
                 ("count", "--p", "2", "--e", "1", "--jump", "2"),
                 ("count", "--p", "3", "--e", "2", "--jump", "3")):
        _, out = _cli(*argv)
        res = CountResult.from_json(out)
        outs.append(res.to_json() == out.strip() and CountResult.from_json(res.to_json()) == res)
    return all(outs), {"round_trips": len(outs)}


def cli_cache_idempotence():
    with tempfile.TemporaryDirectory() as tmp:
        cache = Path(tmp) / "cache.jsonl"
        argv = ("sweep", "--p", "2,3", "--jump", "1..3", "--inertia", "1,2", "--engine", "both",
                "--cache", str(cache))
        c1, out1 = _cli(*argv)
        size1 = cache.stat().st_size
        c2, out2 = _cli(*argv)
        size2 = cache.stat().st_size
    return (c1 == c2 == 0 and out1 == out2 and size1 == size2,
            {"rows": len(out1.splitlines()) - 1, "byte_identical": out1 == out2})


def cli_exit_codes():
    got = {
        "ok": _cli("count", "--p", "5", "--jump", "2")[0],
        "usage": _cli("count", "--p", "4", "--jump", "2")[0],
        "out_of_range": _cli("count", "--p", "3", "--e", "2", "--jump", "3")[0],
        "resource": _cli("oracle", "--p", "3", "--jump", "2", "--inertia", "3", "--cap", "100")[0],
    }
    want = {"ok": 0, "usage": 2, "out_of_range": 3, "resource": 4}
    return got == want, got


# -- the criteria --------------------------------------------------------------------

def crit1(capsys=None):
    return report(capsys, 1, [verify._run("log_sign", verify.log_sign_check, 12)], 10)


def crit2(capsys=None):
    return report(capsys, 2, [verify._run("integrality", verify.integrality_check, 20)], 10)


def crit3(capsys=None):
    return report(capsys, 3, [verify._run("additivity", verify.additivity_check, 12, 100)], 30)


def crit4(capsys=None):
    c = verify._run("equivariant_grid", verify.equivariant_grid_check)
    w = verify._run("witness", verify.witness_check)
    m = c.measured
    extra = (f" ran={m.get('ran')} refused={m.get('refused')}"
             f" p|n instances={m.get('p_divides_n_instances')}")
    return report(capsys, 4, [c, w], 300, extra)


def crit5(capsys=None):
    c = verify._run("squares_refinement", verify.squares_pair_check)
    extra = f" pairs={c.measured.get('pairs')} unrelated={c.measured.get('unrelated_pairs')}"
    return report(capsys, 5, [c], 60, extra)


def crit6(capsys=None):
    return report(capsys, 6, [verify._run("trace_basis", verify.trace_basis_check),
                              verify._run("cross_sum", verify.cross_sum_check, 10)], 120)


def crit7(capsys=None):
    c = verify._run("fiber_correspondence", verify.fiber_correspondence_check)
    return report(capsys, 7, [c], 300, f" subgroups={c.measured.get('subgroups')}")


def crit8(capsys=None):
    c = verify._run("formula_vs_oracle", verify.oracle_delta_check)
    return report(capsys, 8, [c], 600, f" delta={c.measured.get('delta')}")


def crit9(capsys=None):
    c = verify._run("printed_form_comparison", verify.printed_form_check)
    m = c.measured
    table = [f"    p={r['p']} f={r['f']} n={r['n']}: main={r['main_sum']} printed={r['printed']}"
             for r in m.get("rows", []) if not r["printed_matches"]]
    extra = f" printed-form mismatches {m.get('printed_mismatches')}/{m.get('points')}"
    ok = report(capsys, 9, [c], 120, extra)
    text = "\n".join(table)
    if capsys is None:
        print(text)
    else:
        with capsys.disabled():
            print(text)
    return ok


def crit10(capsys=None):
    return report(capsys, 10, [verify._run("unramified_p2_count", verify.p2_oracle_check),
                               verify._run("square_classes", verify.square_class_suite, 3)], 600)


def crit11(capsys=None):
    return report(capsys, 11, [verify._run("dispatch_totality", verify.dispatch_check),
                               verify._run("fixed_cosets", verify.fixed_coset_check, 81)], 60)


def crit12(capsys=None):
    return report(capsys, 12, [timed("json_round_trip", cli_json_roundtrip),
                               timed("cache_idempotence", cli_cache_idempotence),
                               timed("exit_codes", cli_exit_codes)], 60)


CRITERIA = [crit1, crit2, crit3, crit4, crit5, crit6, crit7, crit8, crit9, crit10, crit11, crit12]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 13)])
def test_acceptance(criterion, capsys):
    criterion(capsys)


if __name__ == "__main__":
    failed = 0
    for crit in CRITERIA:
        try:
            crit()
        except AssertionError as exc:
            failed += 1
            print(f"    {exc}"[:500])
    sys.exit(1 if failed else 0)
